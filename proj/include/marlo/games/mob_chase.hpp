#pragma once

#include "marlo/core/grid.hpp"
#include "marlo/core/hash.hpp"
#include "marlo/core/rng.hpp"
#include "marlo/core/types.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

/// Collaborative stag-hunt game: agents and a mob in a fenced meadow. Agents either
/// corner the mob (everyone still inside scores 1) or leave through an exit (0.2 each).
namespace marlo::mob_chase {

inline constexpr Centipoints kCaptureReward{100};
inline constexpr Centipoints kExitReward{20};

enum class Terrain : std::uint8_t { Free, Fence, Exit };
enum class AgentStatus : std::uint8_t { Active, Exited };

/// Surround: the mob has no free 4-neighbour. Enclosure: the mob's reachable region
/// (agents and fences block) contains no exit cell.
enum class CaptureRule : std::uint8_t { Surround, Enclosure };

std::string_view to_string(CaptureRule r);
std::optional<CaptureRule> parse_capture_rule(std::string_view s);

struct Params {
  int width = 7;
  int height = 7;
  int agents = 2;
  int exits = 2;
  std::vector<Cell> exit_cells;       // fixed exits on the perimeter; empty = seeded draw
  std::vector<Cell> agent_positions;  // fixed starts; empty = seeded draw
  std::optional<Cell> mob_position;
  double flee_bias = 0.75;
  int tick_limit = 100;
  int observation_radius = 0;  // 0 = full grid
  CaptureRule capture_rule = CaptureRule::Surround;
  std::string weather = "clear";

  friend bool operator==(const Params&, const Params&) = default;
};

struct State {
  GridShape shape;
  std::vector<Terrain> cells;
  Cell mob;
  std::vector<Cell> agent_pos;
  std::vector<AgentStatus> status;
  int tick = 0;
  int tick_limit = 100;
  double flee_bias = 0.75;
  CaptureRule capture_rule = CaptureRule::Surround;

  [[nodiscard]] Terrain at(Cell c) const { return shape.contains(c) ? cells[shape.index(c)] : Terrain::Fence; }
  [[nodiscard]] int num_agents() const { return static_cast<int>(agent_pos.size()); }
  [[nodiscard]] bool active(int slot) const { return status[static_cast<std::size_t>(slot)] == AgentStatus::Active; }
  [[nodiscard]] bool agent_at(Cell c) const;
  /// Walkable for the mob: in bounds, not fence, not an active agent.
  [[nodiscard]] bool free_for_mob(Cell c) const { return at(c) != Terrain::Fence && !agent_at(c); }

  friend bool operator==(const State&, const State&) = default;
};

enum class Action : std::uint8_t { MoveNorth, MoveSouth, MoveEast, MoveWest, Stay, UseExit };
inline constexpr Action kNoop = Action::Stay;

std::string_view to_string(Action a);
std::optional<Action> parse_action(std::string_view s);
std::optional<Direction> move_direction(Action a);

struct AgentView {
  int slot = 0;
  std::optional<Cell> pos;  // nullopt when exited or outside the window
  AgentStatus status = AgentStatus::Active;
  friend bool operator==(const AgentView&, const AgentView&) = default;
};

/// Symbolic per-agent view. Rows use '#' fence, '.' free, 'E' exit, '?' outside the grid.
struct Observation {
  int width = 0;
  int height = 0;
  Cell origin;  // grid coordinate of rows[0][0]
  std::vector<std::string> rows;
  std::optional<Cell> mob;
  std::vector<AgentView> agents;
  int self = 0;
  int ticks_remaining = 0;

  /// Terrain glyph at an absolute coordinate, '?' if unseen.
  [[nodiscard]] char glyph(Cell c) const;
  friend bool operator==(const Observation&, const Observation&) = default;
};

std::vector<std::string> validate(const Params& p);

/// Throws InvalidTask when the parameters cannot be instantiated.
State init(const Params& p, Rng& rng);
State init(const Params& p, std::uint64_t seed);

bool is_captured(const State& s);
bool is_captured(const State& s, CaptureRule rule);

/// Destination of the mob this tick.
Cell mob_policy(const State& s, Rng& rng);

/// One lockstep tick. `actions` has one entry per slot; entries for exited agents are ignored.
StepOutcome step(State& s, std::span<const std::optional<Action>> actions, Rng& rng);

Observation observe(const State& s, int slot, int radius);

std::uint64_t state_hash(const State& s);

nlohmann::json to_json(const State& s);
State state_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Observation& o);
Observation observation_from_json(const nlohmann::json& j);

}  // namespace marlo::mob_chase
