#pragma once

#include "marlo/baselines/baselines.hpp"
#include "marlo/protocol/message.hpp"
#include "marlo/protocol/net.hpp"

#include <chrono>
#include <vector>

namespace marlo::protocol {

/// Who drives one agent slot: a remote session, or an in-process baseline.
struct SlotAssignment {
  std::optional<baselines::BaselineKind> baseline;  // nullopt = remote

  static SlotAssignment remote() { return {}; }
  static SlotAssignment with(baselines::BaselineKind k) { return {k}; }
  [[nodiscard]] bool is_remote() const { return !baseline.has_value(); }
};
/// "remote" or a baseline name.
SlotAssignment parse_slot_assignment(std::string_view s);

struct NetConfig {
  Endpoint listen;
  std::chrono::milliseconds action_timeout{100};
  std::chrono::milliseconds handshake_timeout{10000};
  std::optional<std::string> token;
};

enum class SessionState : std::uint8_t { Handshaking, Ready, InEpisode, Dropped };
std::string_view to_string(SessionState s);

struct SessionStats {
  int slot = 0;
  std::string entry_name;
  SessionState state = SessionState::Ready;
  int missed_ticks = 0;      // timed out or disconnected
  int malformed_frames = 0;  // undecodable or illegal actions
  int substitutions = 0;
};

struct ServeReport {
  EpisodeResult result;
  MatchRecord record;
  std::vector<SessionStats> sessions;
  std::vector<std::string> log;
};

class MatchAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Serves one match. The listener is bound at construction so port() is usable before run().
class MatchServer {
 public:
  MatchServer(TaskSpec task, std::vector<SlotAssignment> slots, NetConfig config, std::uint64_t seed);
  ~MatchServer();
  MatchServer(const MatchServer&) = delete;
  MatchServer& operator=(const MatchServer&) = delete;

  [[nodiscard]] int port() const { return port_; }
  [[nodiscard]] const std::string& match_id() const { return match_id_; }

  /// Handshake, episode, match_end. Throws MatchAborted when the handshake window closes
  /// before every remote slot is filled.
  ServeReport run();

 private:
  TaskSpec task_;
  std::vector<SlotAssignment> slots_;
  NetConfig config_;
  std::uint64_t seed_;
  Socket listener_;
  int port_ = 0;
  std::string match_id_;
};

}  // namespace marlo::protocol
