#include "marlo/core/types.hpp"

namespace marlo {
namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::string out = "invalid task";
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += i == 0 ? ": " : "; ";
    out += v[i];
  }
  return out;
}

}  // namespace

InvalidTask::InvalidTask(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::North: return "N";
    case Direction::East: return "E";
    case Direction::South: return "S";
    case Direction::West: return "W";
  }
  return "?";
}

std::optional<Direction> parse_direction(std::string_view s) {
  for (Direction d : kDirections)
    if (to_string(d) == s) return d;
  return std::nullopt;
}

std::string_view to_string(GameKind g) {
  switch (g) {
    case GameKind::MobChase: return "mob_chase";
    case GameKind::BuildBattle: return "build_battle";
    case GameKind::TreasureHunt: return "treasure_hunt";
  }
  return "?";
}

std::optional<GameKind> parse_game(std::string_view s) {
  for (GameKind g : kAllGames)
    if (to_string(g) == s) return g;
  return std::nullopt;
}

std::string_view to_string(EventKind e) {
  switch (e) {
    case EventKind::Capture: return "capture";
    case EventKind::Exit: return "exit";
    case EventKind::BlockPlaced: return "block_placed";
    case EventKind::BlockRemoved: return "block_removed";
    case EventKind::Pickup: return "pickup";
    case EventKind::TreasureExit: return "treasure_exit";
    case EventKind::Death: return "death";
    case EventKind::Timeout: return "timeout";
    case EventKind::StructureComplete: return "structure_complete";
    case EventKind::AllExited: return "all_exited";
  }
  return "?";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Capture: return "Capture";
    case Termination::AllExited: return "AllExited";
    case Termination::Timeout: return "Timeout";
    case Termination::StructureComplete: return "StructureComplete";
    case Termination::TreasureExit: return "TreasureExit";
    case Termination::Death: return "Death";
  }
  return "?";
}

std::optional<Termination> parse_termination(std::string_view s) {
  for (auto t : {Termination::Capture, Termination::AllExited, Termination::Timeout, Termination::StructureComplete,
                 Termination::TreasureExit, Termination::Death})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

}  // namespace marlo
