#pragma once

#include "marlo/core/score.hpp"

#include <array>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace marlo {

/// 0-based agent slot within a match.
struct AgentId {
  int index = 0;
  friend constexpr auto operator<=>(AgentId, AgentId) = default;
};

struct Cell {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

constexpr int manhattan(Cell a, Cell b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

/// North is -y. Enumeration order N, E, S, W is the deterministic tie order everywhere.
enum class Direction : std::uint8_t { North, East, South, West };
inline constexpr std::array<Direction, 4> kDirections = {Direction::North, Direction::East, Direction::South,
                                                          Direction::West};

constexpr Cell neighbor(Cell c, Direction d) {
  switch (d) {
    case Direction::North: return {c.x, c.y - 1};
    case Direction::East: return {c.x + 1, c.y};
    case Direction::South: return {c.x, c.y + 1};
    case Direction::West: return {c.x - 1, c.y};
  }
  return c;
}

std::string_view to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view s);

enum class GameKind : std::uint8_t { MobChase, BuildBattle, TreasureHunt };
inline constexpr std::array<GameKind, 3> kAllGames = {GameKind::MobChase, GameKind::BuildBattle,
                                                       GameKind::TreasureHunt};
std::string_view to_string(GameKind g);
std::optional<GameKind> parse_game(std::string_view s);

enum class EventKind : std::uint8_t {
  Capture,
  Exit,
  BlockPlaced,
  BlockRemoved,
  Pickup,
  TreasureExit,
  Death,
  Timeout,
  StructureComplete,
  AllExited,
};
std::string_view to_string(EventKind e);

struct GameEvent {
  EventKind kind;
  int agent = -1;  // acting / affected agent slot, -1 if none
  int team = -1;   // team the event is attributed to, -1 if none
  friend bool operator==(const GameEvent&, const GameEvent&) = default;
};

enum class Termination : std::uint8_t { Capture, AllExited, Timeout, StructureComplete, TreasureExit, Death };
std::string_view to_string(Termination t);
std::optional<Termination> parse_termination(std::string_view s);

struct StepOutcome {
  std::vector<Centipoints> rewards;  // indexed by agent slot
  bool done = false;
  std::optional<Termination> termination;
  std::vector<GameEvent> events;

  [[nodiscard]] bool has_event(EventKind k) const {
    for (const auto& e : events)
      if (e.kind == k) return true;
    return false;
  }
};

struct EpisodeResult {
  std::vector<Centipoints> total_rewards;
  int ticks_elapsed = 0;
  Termination termination = Termination::Timeout;
  friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

/// Raised before tick 0 when a task cannot be instantiated.
class InvalidTask : public std::runtime_error {
 public:
  explicit InvalidTask(std::vector<std::string> violations);
  [[nodiscard]] const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace marlo
