#pragma once

#include "marlo/engine/game.hpp"
#include "marlo/protocol/message.hpp"
#include "marlo/protocol/net.hpp"

#include <functional>

namespace marlo::protocol {

/// Server refused us or sent an error frame; code() is the protocol error code.
class ClientError : public std::runtime_error {
 public:
  ClientError(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  [[nodiscard]] const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Blocking arena client, one per agent.
class Client {
 public:
  static Client connect(const Endpoint& server, const std::string& entry_name,
                        std::optional<std::string> token = std::nullopt, int protocol_version = kProtocolVersion,
                        std::chrono::milliseconds timeout = std::chrono::seconds(5));

  [[nodiscard]] int slot() const { return slot_; }
  [[nodiscard]] GameKind game() const { return game_; }
  [[nodiscard]] const std::string& match_id() const { return match_id_; }
  [[nodiscard]] const nlohmann::json& welcome_payload() const { return welcome_; }

  /// Next decoded frame; nullopt on timeout. Throws ClientError("closed") when the server hangs up.
  std::optional<Message> receive(std::chrono::milliseconds timeout);
  void send(const Message& m);
  /// Bypasses the encoder, for exercising server robustness.
  void send_raw(std::string_view bytes);
  void send_action(int tick, const Action& a);
  void close() { sock_.close(); }

 private:
  Client(Socket sock) : sock_(std::move(sock)), reader_(kMaxFrameBytes) {}

  Socket sock_;
  LineReader reader_;
  int slot_ = -1;
  GameKind game_ = GameKind::MobChase;
  std::string match_id_;
  nlohmann::json welcome_;
};

struct AgentRun {
  Centipoints cumulative;  // sum of step_result rewards
  int ticks = 0;
  std::vector<Centipoints> match_scores;  // from match_end
  std::vector<Message> errors;            // error frames received mid-match
};

/// Returns nullopt to send nothing for that tick.
using AgentPolicy = std::function<std::optional<Action>(const Observation& obs, int tick)>;

/// Observation -> policy -> action until match_end.
AgentRun run_agent(Client& client, const AgentPolicy& policy,
                   std::chrono::milliseconds idle_timeout = std::chrono::seconds(30));

}  // namespace marlo::protocol
