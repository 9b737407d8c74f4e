#pragma once

#include "marlo/task/task_spec.hpp"

#include <array>
#include <map>

namespace marlo {

enum class Difficulty : std::uint8_t { Small, Medium, Large };
std::string_view to_string(Difficulty d);
std::optional<Difficulty> parse_difficulty(std::string_view s);

inline constexpr int kDifficultyConfigVersion = 1;

struct Range {
  double lo = 0;
  double hi = 0;
};

/// Per-game, per-difficulty parameter ranges (inclusive).
struct DifficultyConfig {
  using RangeSet = std::map<std::string, Range, std::less<>>;

  int config_version = kDifficultyConfigVersion;
  std::vector<std::string> weather;
  std::vector<std::string> blocks;  // Build Battle palette pool
  std::array<std::array<RangeSet, 3>, 3> ranges;  // [game][difficulty]

  [[nodiscard]] const RangeSet& at(GameKind g, Difficulty d) const {
    return ranges[static_cast<std::size_t>(g)][static_cast<std::size_t>(d)];
  }
};

/// Strict parse; FieldError names the offending entry.
DifficultyConfig difficulty_config_from_json(const nlohmann::json& j);
DifficultyConfig load_difficulty_config(const std::string& path);
/// The config shipped with the source tree.
std::string default_difficulty_config_path();

/// Deterministic in (game, difficulty, seed, config); the result always validates.
TaskSpec sample_task(GameKind game, Difficulty difficulty, std::uint64_t seed, const DifficultyConfig& config);

}  // namespace marlo
