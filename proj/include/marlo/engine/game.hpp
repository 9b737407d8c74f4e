#pragma once

#include "marlo/task/task_spec.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace marlo {

using Action = std::variant<mob_chase::Action, build_battle::Action, treasure_hunt::Action>;
using Observation = std::variant<mob_chase::Observation, build_battle::Observation, treasure_hunt::Observation>;

/// One action slot per agent; nullopt for agents that no longer act (exited or dead).
using JointAction = std::vector<std::optional<Action>>;

inline GameKind game_of(const Action& a) { return static_cast<GameKind>(a.index()); }
inline GameKind game_of(const Observation& o) { return static_cast<GameKind>(o.index()); }

Action noop_action(GameKind game);

/// Wire form: {"name": ..., plus per-action arguments}.
nlohmann::json action_to_json(const Action& a);
/// Throws FieldError naming the offending field.
Action action_from_json(GameKind game, const nlohmann::json& j);

nlohmann::json observation_to_json(const Observation& o);
Observation observation_from_json(GameKind game, const nlohmann::json& j);

/// A live episode of one game behind a game-agnostic surface.
class GameInstance {
 public:
  virtual ~GameInstance() = default;

  [[nodiscard]] virtual GameKind kind() const = 0;
  [[nodiscard]] virtual int num_agents() const = 0;
  [[nodiscard]] virtual bool is_active(AgentId agent) const = 0;
  [[nodiscard]] virtual Observation observe(AgentId agent) const = 0;
  /// Advances one tick. Actions of the wrong game are rejected with std::invalid_argument.
  virtual StepOutcome step(const JointAction& actions) = 0;
  [[nodiscard]] virtual int tick() const = 0;
  [[nodiscard]] virtual int tick_limit() const = 0;
  [[nodiscard]] virtual std::uint64_t state_hash() const = 0;
  [[nodiscard]] virtual nlohmann::json state_json() const = 0;
  [[nodiscard]] virtual std::unique_ptr<GameInstance> clone() const = 0;
};

/// Per-episode seed: one value feeds the init, environment, and per-agent streams.
std::uint64_t episode_seed(const TaskSpec& task, std::uint64_t match_seed);

/// Validates the task (InvalidTask on failure) and builds the initial state.
std::unique_ptr<GameInstance> make_game(const TaskSpec& task, std::uint64_t match_seed);

}  // namespace marlo
