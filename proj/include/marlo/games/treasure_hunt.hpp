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

/// Two teams of collectors and fighters in a rooms-and-corridors dungeon with hostile foes.
/// The carrier reaching the exit, any agent death, or the time limit ends the episode.
namespace marlo::treasure_hunt {

inline constexpr Centipoints kPickupReward{25};
inline constexpr Centipoints kTreasureExitReward{50};
inline constexpr Centipoints kDeathPenalty{100};
inline constexpr int kTeams = 2;

enum class Tile : std::uint8_t { Wall, Floor, Exit };
enum class Role : std::uint8_t { Collector, Fighter };

std::string_view to_string(Role r);
std::optional<Role> parse_role(std::string_view s);

struct Room {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  [[nodiscard]] Cell center() const { return {x + w / 2, y + h / 2}; }
  [[nodiscard]] bool contains(Cell c) const { return c.x >= x && c.y >= y && c.x < x + w && c.y < y + h; }
  friend bool operator==(const Room&, const Room&) = default;
};

struct DungeonMap {
  GridShape shape;
  std::vector<Tile> tiles;
  std::vector<Room> rooms;
  Cell treasure;
  Cell exit;
  std::array<std::vector<Cell>, kTeams> spawn_points;

  [[nodiscard]] Tile at(Cell c) const { return shape.contains(c) ? tiles[shape.index(c)] : Tile::Wall; }
  [[nodiscard]] bool walkable(Cell c) const { return at(c) != Tile::Wall; }
  friend bool operator==(const DungeonMap&, const DungeonMap&) = default;
};

struct Params {
  int width = 15;
  int height = 15;
  int rooms = 4;
  int room_min = 3;
  int room_max = 5;
  int collectors_per_team = 1;
  int fighters_per_team = 1;
  int foes = 2;
  int foe_hp = 1;
  int agent_hp = 2;
  int sight_radius = 5;
  int observation_radius = 4;
  int tick_limit = 200;
  std::string weather = "clear";

  [[nodiscard]] int team_size() const { return collectors_per_team + fighters_per_team; }
  friend bool operator==(const Params&, const Params&) = default;
};

struct Foe {
  int id = 0;
  Cell pos;
  int hp = 1;
  friend bool operator==(const Foe&, const Foe&) = default;
};

struct State {
  DungeonMap map;
  std::vector<Cell> agent_pos;
  std::vector<int> hp;
  std::vector<Role> role;
  std::vector<int> team_of;
  std::vector<bool> alive;
  std::vector<Foe> foes;  // ordered by id; defeated foes are erased
  std::optional<int> carrier;
  bool treasure_present = true;
  int tick = 0;
  int tick_limit = 200;
  int sight_radius = 5;

  [[nodiscard]] int num_agents() const { return static_cast<int>(agent_pos.size()); }
  [[nodiscard]] std::optional<int> agent_at(Cell c) const;
  [[nodiscard]] std::optional<std::size_t> foe_at(Cell c) const;
  friend bool operator==(const State&, const State&) = default;
};

struct Action {
  enum class Kind : std::uint8_t { Move, Stay, Pickup, Attack };
  Kind kind = Kind::Stay;
  Direction dir = Direction::North;

  static Action move(Direction d) { return {Kind::Move, d}; }
  static Action stay() { return {}; }
  static Action pickup() { return {Kind::Pickup, Direction::North}; }
  static Action attack(Direction d) { return {Kind::Attack, d}; }
  friend bool operator==(const Action&, const Action&) = default;
};
inline constexpr Action kNoop{};

struct FoeAction {
  enum class Kind : std::uint8_t { Stay, Move, Attack };
  Kind kind = Kind::Stay;
  Direction dir = Direction::North;  // Move direction
  int target = -1;                   // attacked agent slot
  friend bool operator==(const FoeAction&, const FoeAction&) = default;
};

struct VisibleFoe {
  Cell pos;
  int hp = 0;
  friend bool operator==(const VisibleFoe&, const VisibleFoe&) = default;
};

struct VisibleAgent {
  int slot = 0;
  int team = 0;
  Role role = Role::Collector;
  Cell pos;
  friend bool operator==(const VisibleAgent&, const VisibleAgent&) = default;
};

struct TeammateStatus {
  int slot = 0;
  Role role = Role::Collector;
  bool alive = true;
  Cell pos;
  int hp = 0;
  friend bool operator==(const TeammateStatus&, const TeammateStatus&) = default;
};

/// Egocentric window. Rows use '#' wall, '.' floor, 'E' exit, '?' outside the map.
struct Observation {
  int self = 0;
  int team = 0;
  Role role = Role::Collector;
  int hp = 0;
  Cell pos;
  int width = 0;
  int height = 0;
  Cell origin;
  std::vector<std::string> rows;
  std::optional<Cell> treasure;
  std::vector<VisibleFoe> foes;
  std::vector<VisibleAgent> others;
  std::vector<TeammateStatus> teammates;
  bool carrying = false;
  int treasure_holder_team = -1;
  int ticks_remaining = 0;

  [[nodiscard]] char glyph(Cell c) const;
  friend bool operator==(const Observation&, const Observation&) = default;
};

std::vector<std::string> validate(const Params& p);

/// Rooms-and-corridors layout. Throws InvalidTask if no layout exists.
DungeonMap generate_dungeon(const Params& p, Rng& rng);
DungeonMap generate_dungeon(const Params& p, std::uint64_t seed);

/// Every walkable cell reachable from the exit.
bool is_connected(const DungeonMap& map);

State init(const Params& p, Rng& rng);
State init(const Params& p, std::uint64_t seed);

/// Per-slot rewards for a scoring event attributed to `team`.
/// Pickup / TreasureExit pay `team` and charge the other team the negation;
/// Death charges every member of `team` one point.
std::vector<Centipoints> event_rewards(EventKind event, int team, std::span<const int> team_of);

FoeAction foe_policy(const State& s, std::size_t foe_index, Rng& rng);

StepOutcome step(State& s, std::span<const std::optional<Action>> actions, Rng& rng);

Observation observe(const State& s, int slot, int radius);
std::uint64_t state_hash(const State& s);

nlohmann::json to_json(const DungeonMap& m);
DungeonMap map_from_json(const nlohmann::json& j);
nlohmann::json to_json(const State& s);
State state_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Observation& o);
Observation observation_from_json(const nlohmann::json& j);

}  // namespace marlo::treasure_hunt
