#pragma once

#include "marlo/engine/episode.hpp"

#include <memory>

namespace marlo::baselines {

enum class BaselineKind : std::uint8_t { Random, GreedyChaser, ExitSeeker, GreedyBuilder, HunterScripted };

std::string_view to_string(BaselineKind k);
std::optional<BaselineKind> parse_baseline(std::string_view s);
bool supports(BaselineKind k, GameKind g);

/// Scripted policy over the public observation payload. Instances keep per-episode memory.
class Controller {
 public:
  virtual ~Controller() = default;
  /// Throws std::invalid_argument for an observation of a game the controller cannot play.
  virtual Action act(const Observation& obs, Rng& rng) = 0;
};

std::unique_ptr<Controller> make_controller(BaselineKind k);

/// In-process ActionSource running a baseline off the slot's controller stream.
class BaselineSource final : public ActionSource {
 public:
  explicit BaselineSource(BaselineKind kind, std::uint64_t seed_salt = 0) : kind_(kind), salt_(seed_salt) {}

  void begin_episode(const EpisodeContext& ctx) override;
  void begin_tick(const TickContext& ctx) override;
  ActionReply poll_action(Clock::time_point deadline) override;

  [[nodiscard]] BaselineKind kind() const { return kind_; }

 private:
  BaselineKind kind_;
  std::uint64_t salt_;
  std::unique_ptr<Controller> controller_;
  Rng rng_{0};
  std::optional<Action> pending_;
};

}  // namespace marlo::baselines
