#pragma once

#include "marlo/engine/game.hpp"

#include <chrono>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace marlo {

/// How the engine obtained the action it applied for one slot in one tick.
enum class ActionProvenance : std::uint8_t {
  Received,  // supplied by the controller
  Timeout,   // no answer before the tick deadline; no-op substituted
  Error,     // malformed or illegal reply; no-op substituted
  Dropped,   // controller disconnected; no-op substituted
  Failed,    // controller raised; no-op substituted
  Inactive,  // slot exited or dead; no action consumed
};
std::string_view to_string(ActionProvenance p);
std::optional<ActionProvenance> parse_provenance(std::string_view s);

struct ActionReply {
  std::optional<Action> action;
  ActionProvenance provenance = ActionProvenance::Received;

  static ActionReply ok(Action a) { return {std::move(a), ActionProvenance::Received}; }
  static ActionReply substitute(ActionProvenance why) { return {std::nullopt, why}; }
};

struct EpisodeContext {
  AgentId agent;
  const TaskSpec* task = nullptr;
  int num_agents = 0;
  std::uint64_t stream_seed = 0;  // per-slot controller stream
  std::string match_id;
};

struct TickContext {
  int tick = 0;
  AgentId agent;
  const Observation* observation = nullptr;
  Centipoints score_so_far;
};

using Clock = std::chrono::steady_clock;

/// Controller for one agent slot. The engine calls begin_tick for every active slot
/// first, then poll_action with a shared deadline, so remote controllers wait in parallel.
class ActionSource {
 public:
  virtual ~ActionSource() = default;
  virtual void begin_episode(const EpisodeContext& /*ctx*/) {}
  virtual void begin_tick(const TickContext& ctx) = 0;
  virtual ActionReply poll_action(Clock::time_point deadline) = 0;
  virtual void end_tick(int /*tick*/, Centipoints /*reward*/, bool /*done*/) {}
  virtual void end_episode(const EpisodeResult& /*result*/) {}
};

/// Adapts a plain function of the tick context.
class PolicySource final : public ActionSource {
 public:
  using Policy = std::function<std::optional<Action>(const TickContext&)>;
  explicit PolicySource(Policy policy) : policy_(std::move(policy)) {}

  void begin_tick(const TickContext& ctx) override {
    pending_ = ctx;
    observation_ = *ctx.observation;
    pending_.observation = &observation_;
  }
  ActionReply poll_action(Clock::time_point) override {
    auto a = policy_(pending_);
    return a ? ActionReply::ok(std::move(*a)) : ActionReply::substitute(ActionProvenance::Failed);
  }

 private:
  Policy policy_;
  TickContext pending_;
  Observation observation_;
};

inline constexpr int kReplayFormatVersion = 1;

struct TickRecord {
  JointAction actions;  // applied actions, after substitution
  std::vector<Centipoints> rewards;
  std::uint64_t state_hash = 0;
  std::vector<ActionProvenance> provenance;
  friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

struct MatchRecord {
  int format_version = kReplayFormatVersion;
  TaskSpec task;
  std::uint64_t seed = 0;
  std::uint64_t initial_state_hash = 0;
  std::vector<TickRecord> ticks;
  EpisodeResult result;
  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

struct EpisodeOptions {
  std::chrono::milliseconds action_timeout{100};
  std::string match_id;
};

struct EpisodeOutput {
  EpisodeResult result;
  MatchRecord record;
};

/// "<game>-<episode seed hex>", used when EpisodeOptions::match_id is empty.
std::string default_match_id(const TaskSpec& task, std::uint64_t seed);

/// Drives init -> (observe, collect, step) -> terminal. `sources` holds one controller per slot.
EpisodeOutput run_episode(const TaskSpec& task, std::span<ActionSource* const> sources, std::uint64_t seed,
                          const EpisodeOptions& options = {});

/// Record names a format version or game this build cannot replay.
class UnsupportedRecord : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ReplayFormatError : public std::runtime_error {
 public:
  ReplayFormatError(int line, const std::string& what)
      : std::runtime_error("replay line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

/// Line 1 header, one line per tick, final result line.
std::string write_replay(const MatchRecord& record);
MatchRecord read_replay(std::string_view text);

/// Re-simulates the task from the seed with the recorded actions and compares every
/// state hash and reward. Throws UnsupportedRecord for unknown versions.
bool verify_replay(const MatchRecord& record);

}  // namespace marlo
