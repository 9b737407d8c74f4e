#include "marlo/games/mob_chase.hpp"

#include "marlo/core/json_util.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace marlo::mob_chase {
namespace {

using nlohmann::json;

bool on_perimeter(GridShape shape, Cell c) {
  return shape.contains(c) && (c.x == 0 || c.y == 0 || c.x == shape.width - 1 || c.y == shape.height - 1);
}

bool is_corner(GridShape shape, Cell c) {
  return (c.x == 0 || c.x == shape.width - 1) && (c.y == 0 || c.y == shape.height - 1);
}

bool interior(GridShape shape, Cell c) {
  return c.x >= 1 && c.y >= 1 && c.x <= shape.width - 2 && c.y <= shape.height - 2;
}

std::vector<Cell> exit_candidates(GridShape shape) {
  std::vector<Cell> out;
  for (int x = 1; x < shape.width - 1; ++x) out.push_back({x, 0});
  for (int x = 1; x < shape.width - 1; ++x) out.push_back({x, shape.height - 1});
  for (int y = 1; y < shape.height - 1; ++y) out.push_back({0, y});
  for (int y = 1; y < shape.height - 1; ++y) out.push_back({shape.width - 1, y});
  return out;
}

char glyph_of(Terrain t) {
  switch (t) {
    case Terrain::Free: return '.';
    case Terrain::Fence: return '#';
    case Terrain::Exit: return 'E';
  }
  return '?';
}

Terrain terrain_of(char c) {
  switch (c) {
    case '.': return Terrain::Free;
    case '#': return Terrain::Fence;
    case 'E': return Terrain::Exit;
    default: throw FieldError("cells", std::string("unknown terrain glyph '") + c + "'");
  }
}

std::string_view status_name(AgentStatus s) { return s == AgentStatus::Active ? "active" : "exited"; }

AgentStatus parse_status(const std::string& s, std::string_view field) {
  if (s == "active") return AgentStatus::Active;
  if (s == "exited") return AgentStatus::Exited;
  throw FieldError(std::string(field), "unknown agent status '" + s + "'");
}

std::string cell_text(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

}  // namespace

std::string_view to_string(CaptureRule r) { return r == CaptureRule::Surround ? "surround" : "enclosure"; }

std::optional<CaptureRule> parse_capture_rule(std::string_view s) {
  if (s == "surround") return CaptureRule::Surround;
  if (s == "enclosure") return CaptureRule::Enclosure;
  return std::nullopt;
}

bool State::agent_at(Cell c) const {
  for (std::size_t i = 0; i < agent_pos.size(); ++i)
    if (status[i] == AgentStatus::Active && agent_pos[i] == c) return true;
  return false;
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::MoveNorth: return "MoveNorth";
    case Action::MoveSouth: return "MoveSouth";
    case Action::MoveEast: return "MoveEast";
    case Action::MoveWest: return "MoveWest";
    case Action::Stay: return "Stay";
    case Action::UseExit: return "UseExit";
  }
  return "?";
}

std::optional<Action> parse_action(std::string_view s) {
  for (auto a : {Action::MoveNorth, Action::MoveSouth, Action::MoveEast, Action::MoveWest, Action::Stay,
                 Action::UseExit})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

std::optional<Direction> move_direction(Action a) {
  switch (a) {
    case Action::MoveNorth: return Direction::North;
    case Action::MoveSouth: return Direction::South;
    case Action::MoveEast: return Direction::East;
    case Action::MoveWest: return Direction::West;
    default: return std::nullopt;
  }
}

char Observation::glyph(Cell c) const {
  const int lx = c.x - origin.x;
  const int ly = c.y - origin.y;
  if (ly < 0 || ly >= static_cast<int>(rows.size())) return '?';
  const auto& row = rows[static_cast<std::size_t>(ly)];
  if (lx < 0 || lx >= static_cast<int>(row.size())) return '?';
  return row[static_cast<std::size_t>(lx)];
}

std::vector<std::string> validate(const Params& p) {
  std::vector<std::string> v;
  if (p.width < 3 || p.height < 3) {
    v.push_back("grid too small: width and height must be at least 3");
    return v;
  }
  const GridShape shape{p.width, p.height};
  if (p.agents < 2) v.push_back("at least 2 agents required");
  const int interior_cells = (p.width - 2) * (p.height - 2);
  if (interior_cells < p.agents + 1)
    v.push_back("grid too small: " + std::to_string(interior_cells) + " meadow cells for " +
                std::to_string(p.agents) + " agents and the mob");
  const int perimeter = 2 * (p.width - 2) + 2 * (p.height - 2);
  if (p.exits < 1) v.push_back("at least 1 exit required");
  if (p.exits > perimeter) v.push_back("too many exits for the fence perimeter");
  if (!p.exit_cells.empty()) {
    if (static_cast<int>(p.exit_cells.size()) != p.exits) v.push_back("exit_cells must list exactly `exits` cells");
    std::set<Cell> seen;
    for (Cell c : p.exit_cells) {
      if (!on_perimeter(shape, c) || is_corner(shape, c))
        v.push_back("exit cell " + cell_text(c) + " is not a non-corner perimeter cell");
      if (!seen.insert(c).second) v.push_back("duplicate exit cell " + cell_text(c));
    }
  }
  std::set<Cell> occupied;
  if (!p.agent_positions.empty()) {
    if (static_cast<int>(p.agent_positions.size()) != p.agents)
      v.push_back("agent_positions must list exactly `agents` cells");
    for (Cell c : p.agent_positions) {
      if (!interior(shape, c)) v.push_back("agent position " + cell_text(c) + " is not a meadow cell");
      if (!occupied.insert(c).second) v.push_back("duplicate agent position " + cell_text(c));
    }
  }
  if (p.mob_position) {
    if (!interior(shape, *p.mob_position)) v.push_back("mob position is not a meadow cell");
    if (occupied.count(*p.mob_position)) v.push_back("mob position collides with an agent");
  }
  if (!(p.flee_bias >= 0.0 && p.flee_bias <= 1.0)) v.push_back("flee_bias must lie in [0, 1]");
  if (p.tick_limit < 1) v.push_back("tick_limit must be positive");
  if (p.observation_radius < 0) v.push_back("observation_radius must be non-negative");
  return v;
}

State init(const Params& p, Rng& rng) {
  if (auto v = validate(p); !v.empty()) throw InvalidTask(std::move(v));
  State s;
  s.shape = {p.width, p.height};
  s.cells.assign(s.shape.size(), Terrain::Free);
  for (std::size_t i = 0; i < s.cells.size(); ++i)
    if (on_perimeter(s.shape, s.shape.cell(i))) s.cells[i] = Terrain::Fence;

  std::vector<Cell> exits = p.exit_cells;
  if (exits.empty()) {
    auto candidates = exit_candidates(s.shape);
    rng.shuffle(candidates);
    exits.assign(candidates.begin(), candidates.begin() + p.exits);
  }
  for (Cell c : exits) s.cells[s.shape.index(c)] = Terrain::Exit;

  std::vector<Cell> free_cells;
  for (int y = 1; y < p.height - 1; ++y)
    for (int x = 1; x < p.width - 1; ++x) {
      const Cell c{x, y};
      const bool fixed = std::find(p.agent_positions.begin(), p.agent_positions.end(), c) != p.agent_positions.end() ||
                         (p.mob_position && *p.mob_position == c);
      if (!fixed) free_cells.push_back(c);
    }
  rng.shuffle(free_cells);
  std::size_t next = 0;
  if (p.agent_positions.empty()) {
    for (int i = 0; i < p.agents; ++i) s.agent_pos.push_back(free_cells[next++]);
  } else {
    s.agent_pos = p.agent_positions;
  }
  s.mob = p.mob_position ? *p.mob_position : free_cells[next++];
  s.status.assign(static_cast<std::size_t>(p.agents), AgentStatus::Active);
  s.tick = 0;
  s.tick_limit = p.tick_limit;
  s.flee_bias = p.flee_bias;
  s.capture_rule = p.capture_rule;
  return s;
}

State init(const Params& p, std::uint64_t seed) {
  Rng rng(seed);
  return init(p, rng);
}

bool is_captured(const State& s) { return is_captured(s, s.capture_rule); }

bool is_captured(const State& s, CaptureRule rule) {
  if (rule == CaptureRule::Surround) {
    for (Direction d : kDirections) {
      const Cell n = neighbor(s.mob, d);
      if (s.shape.contains(n) && s.free_for_mob(n)) return false;
    }
    return true;
  }
  const auto dist = bfs_distances(s.shape, s.mob, [&](Cell c) { return s.free_for_mob(c); });
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] != kUnreachable && s.cells[i] == Terrain::Exit) return false;
  return true;
}

Cell mob_policy(const State& s, Rng& rng) {
  std::vector<Cell> candidates;
  for (Direction d : kDirections) {
    const Cell n = neighbor(s.mob, d);
    if (s.shape.contains(n) && s.free_for_mob(n)) candidates.push_back(n);
  }
  if (candidates.empty()) return s.mob;
  if (rng.bernoulli(s.flee_bias)) {
    auto nearest_agent = [&](Cell c) {
      int best = std::numeric_limits<int>::max();
      for (int i = 0; i < s.num_agents(); ++i)
        if (s.active(i)) best = std::min(best, manhattan(c, s.agent_pos[static_cast<std::size_t>(i)]));
      return best;
    };
    int best = std::numeric_limits<int>::min();
    std::vector<Cell> tied;
    for (Cell c : candidates) {
      const int d = nearest_agent(c);
      if (d > best) {
        best = d;
        tied.clear();
      }
      if (d == best) tied.push_back(c);
    }
    return tied[rng.uniform(tied.size())];
  }
  return candidates[rng.uniform(candidates.size())];
}

StepOutcome step(State& s, std::span<const std::optional<Action>> actions, Rng& rng) {
  const int n = s.num_agents();
  if (static_cast<int>(actions.size()) != n) throw std::invalid_argument("mob_chase::step: one action slot per agent");
  StepOutcome out;
  out.rewards.assign(static_cast<std::size_t>(n), Centipoints{});
  ++s.tick;

  for (int i = 0; i < n; ++i) {
    const auto slot = static_cast<std::size_t>(i);
    if (!s.active(i) || !actions[slot] || *actions[slot] != Action::UseExit) continue;
    if (s.at(s.agent_pos[slot]) != Terrain::Exit) continue;
    s.status[slot] = AgentStatus::Exited;
    out.rewards[slot] += kExitReward;
    out.events.push_back({EventKind::Exit, i, -1});
  }

  std::vector<Cell> intended = s.agent_pos;
  std::vector<bool> participates(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto slot = static_cast<std::size_t>(i);
    participates[slot] = s.active(i);
    if (!participates[slot] || !actions[slot]) continue;
    if (auto dir = move_direction(*actions[slot])) {
      const Cell target = neighbor(s.agent_pos[slot], *dir);
      if (s.shape.contains(target) && s.at(target) != Terrain::Fence && target != s.mob) intended[slot] = target;
    }
  }
  s.agent_pos = resolve_moves(s.agent_pos, intended, participates);

  s.mob = mob_policy(s, rng);

  bool any_active = false;
  for (int i = 0; i < n; ++i) any_active = any_active || s.active(i);

  if (any_active && is_captured(s)) {
    for (int i = 0; i < n; ++i) {
      if (!s.active(i)) continue;
      out.rewards[static_cast<std::size_t>(i)] += kCaptureReward;
    }
    out.events.push_back({EventKind::Capture, -1, -1});
    out.done = true;
    out.termination = Termination::Capture;
  } else if (!any_active) {
    out.events.push_back({EventKind::AllExited, -1, -1});
    out.done = true;
    out.termination = Termination::AllExited;
  } else if (s.tick >= s.tick_limit) {
    out.events.push_back({EventKind::Timeout, -1, -1});
    out.done = true;
    out.termination = Termination::Timeout;
  }
  return out;
}

Observation observe(const State& s, int slot, int radius) {
  Observation o;
  o.width = s.shape.width;
  o.height = s.shape.height;
  o.self = slot;
  o.ticks_remaining = s.tick_limit - s.tick;
  Cell lo{0, 0};
  Cell hi{s.shape.width - 1, s.shape.height - 1};
  if (radius > 0) {
    const Cell centre = s.agent_pos[static_cast<std::size_t>(slot)];
    lo = {centre.x - radius, centre.y - radius};
    hi = {centre.x + radius, centre.y + radius};
  }
  auto visible = [&](Cell c) { return c.x >= lo.x && c.y >= lo.y && c.x <= hi.x && c.y <= hi.y; };
  o.origin = lo;
  for (int y = lo.y; y <= hi.y; ++y) {
    std::string row;
    row.reserve(static_cast<std::size_t>(hi.x - lo.x + 1));
    for (int x = lo.x; x <= hi.x; ++x) {
      const Cell c{x, y};
      row += s.shape.contains(c) ? glyph_of(s.cells[s.shape.index(c)]) : '?';
    }
    o.rows.push_back(std::move(row));
  }
  if (visible(s.mob)) o.mob = s.mob;
  for (int i = 0; i < s.num_agents(); ++i) {
    AgentView v;
    v.slot = i;
    v.status = s.status[static_cast<std::size_t>(i)];
    const Cell p = s.agent_pos[static_cast<std::size_t>(i)];
    if (v.status == AgentStatus::Active && visible(p)) v.pos = p;
    o.agents.push_back(v);
  }
  return o;
}

std::uint64_t state_hash(const State& s) {
  Fnv1a64 h;
  h.str("mob_chase").i32(s.shape.width).i32(s.shape.height);
  for (Terrain t : s.cells) h.byte(static_cast<std::uint8_t>(t));
  h.i32(s.mob.x).i32(s.mob.y);
  h.i32(s.num_agents());
  for (std::size_t i = 0; i < s.agent_pos.size(); ++i)
    h.i32(s.agent_pos[i].x).i32(s.agent_pos[i].y).byte(static_cast<std::uint8_t>(s.status[i]));
  h.i32(s.tick).i32(s.tick_limit);
  return h.digest();
}

json to_json(const State& s) {
  json rows = json::array();
  for (int y = 0; y < s.shape.height; ++y) {
    std::string row;
    for (int x = 0; x < s.shape.width; ++x) row += glyph_of(s.cells[s.shape.index({x, y})]);
    rows.push_back(row);
  }
  json agents = json::array();
  for (std::size_t i = 0; i < s.agent_pos.size(); ++i)
    agents.push_back({{"pos", json_util::cell(s.agent_pos[i])}, {"status", status_name(s.status[i])}});
  return {{"cells", rows},
          {"mob", json_util::cell(s.mob)},
          {"agents", agents},
          {"tick", s.tick},
          {"tick_limit", s.tick_limit},
          {"flee_bias", s.flee_bias},
          {"capture_rule", to_string(s.capture_rule)}};
}

State state_from_json(const json& j) {
  using namespace json_util;
  reject_unknown(j, {"cells", "mob", "agents", "tick", "tick_limit", "flee_bias", "capture_rule"}, "state");
  State s;
  const json& rows = require(j, "cells", "state");
  if (!rows.is_array() || rows.empty()) throw FieldError("state.cells", "expected non-empty row list");
  s.shape = {static_cast<int>(rows[0].get<std::string>().size()), static_cast<int>(rows.size())};
  for (const auto& row : rows) {
    const auto text = row.get<std::string>();
    if (static_cast<int>(text.size()) != s.shape.width) throw FieldError("state.cells", "ragged rows");
    for (char c : text) s.cells.push_back(terrain_of(c));
  }
  s.mob = get_cell(require(j, "mob", "state"), "state.mob");
  for (const auto& a : require(j, "agents", "state")) {
    s.agent_pos.push_back(get_cell(require(a, "pos", "state.agents"), "state.agents.pos"));
    s.status.push_back(parse_status(get_string(a, "status", "state.agents"), "state.agents.status"));
  }
  s.tick = static_cast<int>(get_int(j, "tick", "state"));
  s.tick_limit = static_cast<int>(get_int(j, "tick_limit", "state"));
  s.flee_bias = get_number(j, "flee_bias", "state");
  auto rule = parse_capture_rule(get_string(j, "capture_rule", "state"));
  if (!rule) throw FieldError("state.capture_rule", "unknown capture rule");
  s.capture_rule = *rule;
  return s;
}

json to_json(const Observation& o) {
  json agents = json::array();
  for (const auto& a : o.agents)
    agents.push_back({{"slot", a.slot},
                      {"pos", a.pos ? json_util::cell(*a.pos) : json(nullptr)},
                      {"status", status_name(a.status)}});
  return {{"width", o.width},
          {"height", o.height},
          {"origin", json_util::cell(o.origin)},
          {"grid", o.rows},
          {"mob", o.mob ? json_util::cell(*o.mob) : json(nullptr)},
          {"agents", agents},
          {"self", o.self},
          {"ticks_remaining", o.ticks_remaining}};
}

Observation observation_from_json(const json& j) {
  using namespace json_util;
  reject_unknown(j, {"width", "height", "origin", "grid", "mob", "agents", "self", "ticks_remaining"}, "view");
  Observation o;
  o.width = static_cast<int>(get_int(j, "width", "view"));
  o.height = static_cast<int>(get_int(j, "height", "view"));
  o.origin = get_cell(require(j, "origin", "view"), "view.origin");
  for (const auto& row : require(j, "grid", "view")) o.rows.push_back(row.get<std::string>());
  const json& mob = require(j, "mob", "view");
  if (!mob.is_null()) o.mob = get_cell(mob, "view.mob");
  for (const auto& a : require(j, "agents", "view")) {
    AgentView v;
    v.slot = static_cast<int>(get_int(a, "slot", "view.agents"));
    const json& pos = require(a, "pos", "view.agents");
    if (!pos.is_null()) v.pos = get_cell(pos, "view.agents.pos");
    v.status = parse_status(get_string(a, "status", "view.agents"), "view.agents.status");
    o.agents.push_back(v);
  }
  o.self = static_cast<int>(get_int(j, "self", "view"));
  o.ticks_remaining = static_cast<int>(get_int(j, "ticks_remaining", "view"));
  return o;
}

}  // namespace marlo::mob_chase
