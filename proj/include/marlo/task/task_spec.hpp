#pragma once

#include "marlo/games/build_battle.hpp"
#include "marlo/games/mob_chase.hpp"
#include "marlo/games/treasure_hunt.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace marlo {

inline constexpr int kTaskSpecVersion = 1;

using GameParams = std::variant<mob_chase::Params, build_battle::Params, treasure_hunt::Params>;

/// One fully seeded, parameterized game instance.
struct TaskSpec {
  int spec_version = kTaskSpecVersion;
  std::uint64_t seed = 0;
  GameParams params;

  [[nodiscard]] GameKind game() const { return static_cast<GameKind>(params.index()); }
  [[nodiscard]] const std::string& weather() const;
  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

/// Task text could not be read: malformed syntax, schema violation, or unsupported version.
class TaskError : public std::runtime_error {
 public:
  enum class Kind { Parse, Schema, Version };
  TaskError(Kind kind, std::string field, const std::string& what, int line = 0)
      : std::runtime_error(what), kind_(kind), field_(std::move(field)), line_(line) {}
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const std::string& field() const { return field_; }
  [[nodiscard]] int line() const { return line_; }

 private:
  Kind kind_;
  std::string field_;
  int line_;
};

TaskSpec default_task(GameKind game, std::uint64_t seed = 0);

/// Empty when the task instantiates without error.
std::vector<std::string> validate(const TaskSpec& spec);

int agent_count(const TaskSpec& spec);

/// Team of each agent slot; Mob Chase is collaborative, so every slot is team 0.
std::vector<int> slot_teams(const TaskSpec& spec);

nlohmann::json to_json(const TaskSpec& spec);
/// Strict: unknown fields, missing fields and wrong types all raise TaskError.
TaskSpec task_from_json(const nlohmann::json& j);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string save_task(const TaskSpec& spec);
TaskSpec load_task(std::string_view text);

TaskSpec load_task_file(const std::string& path);
void save_task_file(const TaskSpec& spec, const std::string& path);

}  // namespace marlo
