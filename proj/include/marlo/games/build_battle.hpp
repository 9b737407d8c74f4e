#pragma once

#include "marlo/core/grid.hpp"
#include "marlo/core/hash.hpp"
#include "marlo/core/rng.hpp"
#include "marlo/core/types.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

/// Two teams race to reproduce one blueprint cuboid, each in its own private region.
/// Every effective block event pays +/-0.2 to the acting agent.
namespace marlo::build_battle {

inline constexpr Centipoints kBlockReward{20};
inline constexpr int kTeams = 2;

/// Index into the task palette. kEmpty marks "no block" in a region and
/// "must stay empty" in a blueprint.
using BlockId = int;
inline constexpr BlockId kEmpty = -1;
inline constexpr std::string_view kEmptyName = "empty";

struct Dims {
  int w = 3;  // x extent
  int h = 3;  // y extent
  int d = 1;  // vertical extent
  [[nodiscard]] constexpr std::size_t volume() const {
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * static_cast<std::size_t>(d);
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

struct BlockPos {
  int x = 0;
  int y = 0;
  int z = 0;
  friend bool operator==(const BlockPos&, const BlockPos&) = default;
};

struct Blueprint {
  Dims dims;
  std::vector<BlockId> cells;  // x fastest, then y, then z

  [[nodiscard]] bool contains(BlockPos p) const {
    return p.x >= 0 && p.y >= 0 && p.z >= 0 && p.x < dims.w && p.y < dims.h && p.z < dims.d;
  }
  [[nodiscard]] std::size_t index(BlockPos p) const {
    return static_cast<std::size_t>(p.x) +
           static_cast<std::size_t>(dims.w) *
               (static_cast<std::size_t>(p.y) + static_cast<std::size_t>(dims.h) * static_cast<std::size_t>(p.z));
  }
  [[nodiscard]] BlockPos pos(std::size_t i) const {
    const auto w = static_cast<std::size_t>(dims.w);
    const auto h = static_cast<std::size_t>(dims.h);
    return {static_cast<int>(i % w), static_cast<int>((i / w) % h), static_cast<int>(i / (w * h))};
  }
  [[nodiscard]] BlockId at(BlockPos p) const { return cells[index(p)]; }
  [[nodiscard]] int required_blocks() const;
  friend bool operator==(const Blueprint&, const Blueprint&) = default;
};

using Region = std::vector<BlockId>;  // same indexing as Blueprint::cells

struct Params {
  int team_size = 2;
  Dims blueprint_dims{3, 3, 1};
  std::vector<std::string> palette{"stone", "dirt"};
  std::vector<std::string> blueprint;  // literal cells (palette names or "empty"); empty = seeded draw
  double fill = 0.75;                  // chance a drawn blueprint cell is non-empty
  int tick_limit = 100;
  std::string weather = "clear";
  friend bool operator==(const Params&, const Params&) = default;
};

/// Agents walk a ground plane one cell larger than the footprint on every side; plane
/// cell (x+1, y+1) sits over footprint column (x, y).
struct State {
  Blueprint blueprint;
  std::array<Region, kTeams> regions;
  std::vector<Cell> agent_pos;
  std::vector<int> team_of;
  std::vector<std::string> palette;
  std::array<Centipoints, kTeams> team_score{};
  int tick = 0;
  int tick_limit = 100;

  [[nodiscard]] GridShape plane() const { return {blueprint.dims.w + 2, blueprint.dims.h + 2}; }
  [[nodiscard]] int num_agents() const { return static_cast<int>(agent_pos.size()); }
  [[nodiscard]] std::optional<BlockId> block_id(std::string_view name) const;
  friend bool operator==(const State&, const State&) = default;
};

struct Action {
  enum class Kind : std::uint8_t { Move, Stay, Place, Remove };
  Kind kind = Kind::Stay;
  Direction dir = Direction::North;  // Move direction, or the adjacent target column
  int z = 0;                         // target height for Place / Remove
  std::string block;                 // palette name for Place

  static Action move(Direction d) { return {Kind::Move, d, 0, {}}; }
  static Action stay() { return {}; }
  static Action place(std::string block, Direction d, int z = 0) { return {Kind::Place, d, z, std::move(block)}; }
  static Action remove(Direction d, int z = 0) { return {Kind::Remove, d, z, {}}; }
  friend bool operator==(const Action&, const Action&) = default;
};
inline const Action kNoop = Action::stay();

struct Teammate {
  int slot = 0;
  Cell pos;
  friend bool operator==(const Teammate&, const Teammate&) = default;
};

struct Observation {
  int self = 0;
  int team = 0;
  Cell pos;
  std::vector<Teammate> teammates;
  Region region;
  Blueprint blueprint;
  std::vector<std::string> palette;
  Centipoints own_score;
  Centipoints opponent_score;
  int ticks_remaining = 0;
  friend bool operator==(const Observation&, const Observation&) = default;
};

std::vector<std::string> validate(const Params& p);
State init(const Params& p, Rng& rng);
State init(const Params& p, std::uint64_t seed);

/// Reward for one block event at `pos`. Exactly one of before/after must be kEmpty.
Centipoints classify_event(const Blueprint& bp, BlockPos pos, BlockId before, BlockId after);

bool is_complete(const Region& region, const Blueprint& bp);

/// matching placed blocks minus mismatching placed blocks.
int potential(const Region& region, const Blueprint& bp);

/// Footprint column targeted by an agent standing at `plane_pos` facing `dir`.
Cell target_column(Cell plane_pos, Direction dir);

StepOutcome step(State& s, std::span<const std::optional<Action>> actions, Rng& rng);

/// Team with the higher summed score, nullopt on a draw.
std::optional<int> match_winner(const std::vector<Centipoints>& totals, const std::vector<int>& team_of);

Observation observe(const State& s, int slot);
std::uint64_t state_hash(const State& s);

nlohmann::json to_json(const Blueprint& bp, const std::vector<std::string>& palette);
Blueprint blueprint_from_json(const nlohmann::json& j, const std::vector<std::string>& palette);
nlohmann::json to_json(const State& s);
State state_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Observation& o);
Observation observation_from_json(const nlohmann::json& j);

}  // namespace marlo::build_battle
