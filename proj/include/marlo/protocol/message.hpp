#pragma once

#include "marlo/core/score.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace marlo::protocol {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::size_t kMaxFrameBytes = std::size_t{1} << 20;

enum class MessageType : std::uint8_t {
  Hello, Welcome, Observation, Action, StepResult, EpisodeEnd, MatchEnd, Error, Ping, Pong,
};
std::string_view to_string(MessageType t);
std::optional<MessageType> parse_message_type(std::string_view s);

/// One frame. protocol_version is carried by hello and welcome only.
struct Message {
  MessageType type = MessageType::Ping;
  std::optional<int> protocol_version;
  nlohmann::json payload = nlohmann::json::object();
  friend bool operator==(const Message&, const Message&) = default;
};

class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::string field, const std::string& what)
      : std::runtime_error("field '" + field + "': " + what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Compact single-line text with sorted keys, LF-terminated.
std::string encode(const Message& m);
/// Accepts one frame with or without its trailing LF. Validates the payload schema for the type.
Message decode(std::string_view frame);

/// Protocol error codes sent in error frames.
namespace code {
inline constexpr std::string_view kBadFrame = "bad_frame";
inline constexpr std::string_view kUnsupportedVersion = "unsupported_version";
inline constexpr std::string_view kUnauthorized = "unauthorized";
inline constexpr std::string_view kMatchFull = "match_full";
inline constexpr std::string_view kHandshakeTimeout = "handshake_timeout";
inline constexpr std::string_view kBadAction = "bad_action";
inline constexpr std::string_view kUnexpected = "unexpected_message";
}  // namespace code

Message hello(std::string_view entry_name, std::optional<std::string> token = std::nullopt,
              int version = kProtocolVersion);
Message welcome(int agent_slot, std::string_view match_id, std::string_view game, int num_agents,
                const nlohmann::json& task, int action_timeout_ms);
Message observation(std::string_view match_id, int tick, int agent_slot, const nlohmann::json& view,
                    Centipoints score_so_far);
Message action(std::string_view match_id, int tick, const nlohmann::json& action);
Message step_result(int tick, Centipoints reward, bool done);
Message episode_end(std::string_view match_id, std::string_view termination, int ticks_elapsed, Centipoints total);
Message match_end(std::string_view match_id, const std::vector<Centipoints>& scores);
Message error(std::string_view code, std::string_view message);
Message ping(std::int64_t nonce = 0);
Message pong(std::int64_t nonce = 0);

/// Scores travel as decimal points; centipoints survive the round trip exactly.
Centipoints points_field(const nlohmann::json& payload, std::string_view key);

}  // namespace marlo::protocol
