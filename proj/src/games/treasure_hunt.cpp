#include "marlo/games/treasure_hunt.hpp"

#include "marlo/core/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace marlo::treasure_hunt {
namespace {

using nlohmann::json;

constexpr int kLayoutAttempts = 20;
constexpr int kRoomAttempts = 100;

char glyph_of(Tile t) {
  switch (t) {
    case Tile::Wall: return '#';
    case Tile::Floor: return '.';
    case Tile::Exit: return 'E';
  }
  return '?';
}

Tile tile_of(char c) {
  switch (c) {
    case '#': return Tile::Wall;
    case '.': return Tile::Floor;
    case 'E': return Tile::Exit;
    default: throw FieldError("map.tiles", std::string("unknown tile glyph '") + c + "'");
  }
}

int grid_columns(int rooms) { return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(rooms)))); }

bool grid_fallback_fits(const Params& p) {
  const int cols = grid_columns(p.rooms);
  const int rows = (p.rooms + cols - 1) / cols;
  return (p.width - 1) / cols >= p.room_min + 1 && (p.height - 1) / rows >= p.room_min + 1;
}

bool overlaps_with_margin(const Room& a, const Room& b) {
  return a.x - 1 < b.x + b.w && b.x - 1 < a.x + a.w && a.y - 1 < b.y + b.h && b.y - 1 < a.y + a.h;
}

std::vector<Room> place_rooms_randomly(const Params& p, Rng& rng) {
  const int max_w = std::min(p.room_max, p.width - 2);
  const int max_h = std::min(p.room_max, p.height - 2);
  if (max_w < p.room_min || max_h < p.room_min) return {};
  for (int attempt = 0; attempt < kLayoutAttempts; ++attempt) {
    std::vector<Room> rooms;
    for (int k = 0; k < p.rooms; ++k) {
      bool placed = false;
      for (int t = 0; t < kRoomAttempts && !placed; ++t) {
        Room r;
        r.w = rng.uniform_int(p.room_min, max_w);
        r.h = rng.uniform_int(p.room_min, max_h);
        r.x = rng.uniform_int(1, p.width - 1 - r.w);
        r.y = rng.uniform_int(1, p.height - 1 - r.h);
        if (std::none_of(rooms.begin(), rooms.end(), [&](const Room& o) { return overlaps_with_margin(r, o); })) {
          rooms.push_back(r);
          placed = true;
        }
      }
      if (!placed) break;
    }
    if (static_cast<int>(rooms.size()) == p.rooms) return rooms;
  }
  return {};
}

std::vector<Room> place_rooms_on_grid(const Params& p) {
  const int cols = grid_columns(p.rooms);
  const int rows = (p.rooms + cols - 1) / cols;
  const int slot_w = (p.width - 1) / cols;
  const int slot_h = (p.height - 1) / rows;
  std::vector<Room> rooms;
  for (int i = 0; i < p.rooms; ++i) {
    Room r;
    r.w = std::min(p.room_max, slot_w - 1);
    r.h = std::min(p.room_max, slot_h - 1);
    r.x = 1 + (i % cols) * slot_w;
    r.y = 1 + (i / cols) * slot_h;
    rooms.push_back(r);
  }
  return rooms;
}

void carve_corridor(DungeonMap& m, Cell from, Cell to, bool horizontal_first) {
  auto carve = [&](Cell c) {
    auto& t = m.tiles[m.shape.index(c)];
    if (t == Tile::Wall) t = Tile::Floor;
  };
  Cell c = from;
  auto walk_x = [&] {
    while (c.x != to.x) {
      c.x += c.x < to.x ? 1 : -1;
      carve(c);
    }
  };
  auto walk_y = [&] {
    while (c.y != to.y) {
      c.y += c.y < to.y ? 1 : -1;
      carve(c);
    }
  };
  if (horizontal_first) {
    walk_x();
    walk_y();
  } else {
    walk_y();
    walk_x();
  }
}

std::vector<Cell> room_cells(const Room& r) {
  std::vector<Cell> out;
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x) out.push_back({x, y});
  return out;
}

std::string role_name(Role r) { return std::string(to_string(r)); }

Role role_from(const std::string& s, std::string_view field) {
  auto r = parse_role(s);
  if (!r) throw FieldError(std::string(field), "unknown role '" + s + "'");
  return *r;
}

}  // namespace

std::string_view to_string(Role r) { return r == Role::Collector ? "collector" : "fighter"; }

std::optional<Role> parse_role(std::string_view s) {
  if (s == "collector") return Role::Collector;
  if (s == "fighter") return Role::Fighter;
  return std::nullopt;
}

std::optional<int> State::agent_at(Cell c) const {
  for (int i = 0; i < num_agents(); ++i)
    if (alive[static_cast<std::size_t>(i)] && agent_pos[static_cast<std::size_t>(i)] == c) return i;
  return std::nullopt;
}

std::optional<std::size_t> State::foe_at(Cell c) const {
  for (std::size_t i = 0; i < foes.size(); ++i)
    if (foes[i].pos == c) return i;
  return std::nullopt;
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
  if (p.width < 7 || p.height < 7) v.push_back("dungeon too small: width and height must be at least 7");
  if (p.rooms < 1) v.push_back("at least 1 room required");
  if (p.room_min < 2) v.push_back("room_min must be at least 2");
  if (p.room_max < p.room_min) v.push_back("room_max must be at least room_min");
  if (p.collectors_per_team < 1) v.push_back("each team needs at least 1 collector");
  if (p.fighters_per_team < 0) v.push_back("fighters_per_team must be non-negative");
  if (p.foes < 0) v.push_back("foes must be non-negative");
  if (p.foe_hp < 1) v.push_back("foe_hp must be positive");
  if (p.agent_hp < 1) v.push_back("agent_hp must be positive");
  if (p.sight_radius < 0) v.push_back("sight_radius must be non-negative");
  if (p.observation_radius < 0) v.push_back("observation_radius must be non-negative");
  if (p.tick_limit < 1) v.push_back("tick_limit must be positive");
  if (!v.empty()) return v;

  if (!grid_fallback_fits(p))
    v.push_back("no valid layout: " + std::to_string(p.rooms) + " rooms of side " + std::to_string(p.room_min) +
                " do not fit a " + std::to_string(p.width) + "x" + std::to_string(p.height) + " dungeon");
  const int room_area = p.room_min * p.room_min;
  if (p.team_size() + 2 > room_area) v.push_back("rooms too small to spawn a team");
  const int entities = 2 + 2 * p.team_size() + p.foes;
  if (entities > p.rooms * room_area) v.push_back("not enough floor for the treasure, exit, agents and foes");
  return v;
}

bool is_connected(const DungeonMap& m) {
  const auto dist = bfs_distances(m.shape, m.exit, [&](Cell c) { return m.walkable(c); });
  for (std::size_t i = 0; i < m.tiles.size(); ++i)
    if (m.tiles[i] != Tile::Wall && dist[i] == kUnreachable) return false;
  return m.walkable(m.exit);
}

DungeonMap generate_dungeon(const Params& p, Rng& rng) {
  if (auto v = validate(p); !v.empty()) throw InvalidTask(std::move(v));
  DungeonMap m;
  m.shape = {p.width, p.height};
  m.tiles.assign(m.shape.size(), Tile::Wall);
  m.rooms = place_rooms_randomly(p, rng);
  if (m.rooms.empty()) m.rooms = place_rooms_on_grid(p);

  for (const Room& r : m.rooms)
    for (Cell c : room_cells(r)) m.tiles[m.shape.index(c)] = Tile::Floor;
  for (std::size_t i = 1; i < m.rooms.size(); ++i)
    carve_corridor(m, m.rooms[i - 1].center(), m.rooms[i].center(), rng.bernoulli(0.5));

  const auto exit_room_cells = room_cells(m.rooms[0]);
  m.exit = exit_room_cells[rng.uniform(exit_room_cells.size())];
  m.tiles[m.shape.index(m.exit)] = Tile::Exit;

  const auto from_exit = bfs_distances(m.shape, m.exit, [&](Cell c) { return m.walkable(c); });
  std::size_t treasure_room = 0;
  if (m.rooms.size() == 1) {
    // Single room: farthest cell from the exit, lowest index on ties.
    int best = -1;
    for (Cell c : exit_room_cells) {
      const int d = from_exit[m.shape.index(c)];
      if (d > best) {
        best = d;
        m.treasure = c;
      }
    }
  } else {
    int best = -1;
    for (std::size_t i = 1; i < m.rooms.size(); ++i) {
      const int d = from_exit[m.shape.index(m.rooms[i].center())];
      if (d > best) {
        best = d;
        treasure_room = i;
      }
    }
    m.treasure = m.rooms[treasure_room].center();
  }

  // Spawn rooms: two rooms holding neither exit nor treasure, as equidistant to the treasure as possible.
  const auto from_treasure = bfs_distances(m.shape, m.treasure, [&](Cell c) { return m.walkable(c); });
  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i < m.rooms.size(); ++i)
    if (i != treasure_room) candidates.push_back(i);
  std::array<std::size_t, kTeams> spawn_room{0, 0};
  if (candidates.size() >= 2) {
    int best_gap = std::numeric_limits<int>::max();
    for (std::size_t a = 0; a < candidates.size(); ++a)
      for (std::size_t b = a + 1; b < candidates.size(); ++b) {
        const int da = from_treasure[m.shape.index(m.rooms[candidates[a]].center())];
        const int db = from_treasure[m.shape.index(m.rooms[candidates[b]].center())];
        const int gap = std::abs(da - db);
        if (gap < best_gap) {
          best_gap = gap;
          spawn_room = {candidates[a], candidates[b]};
        }
      }
    if (rng.bernoulli(0.5)) std::swap(spawn_room[0], spawn_room[1]);
  } else if (candidates.size() == 1) {
    spawn_room = {candidates[0], 0};
  } else if (m.rooms.size() == 2) {
    spawn_room = {0, 1};
  }

  std::vector<Cell> taken{m.exit, m.treasure};
  for (int team = 0; team < kTeams; ++team) {
    auto cells = room_cells(m.rooms[spawn_room[static_cast<std::size_t>(team)]]);
    rng.shuffle(cells);
    for (Cell c : cells) {
      if (static_cast<int>(m.spawn_points[static_cast<std::size_t>(team)].size()) == p.team_size()) break;
      if (std::find(taken.begin(), taken.end(), c) != taken.end()) continue;
      m.spawn_points[static_cast<std::size_t>(team)].push_back(c);
      taken.push_back(c);
    }
    if (static_cast<int>(m.spawn_points[static_cast<std::size_t>(team)].size()) != p.team_size())
      throw InvalidTask({"spawn room too small for team " + std::to_string(team)});
  }

  if (!is_connected(m)) throw InvalidTask({"generated dungeon is not connected"});
  return m;
}

DungeonMap generate_dungeon(const Params& p, std::uint64_t seed) {
  Rng rng(seed);
  return generate_dungeon(p, rng);
}

State init(const Params& p, Rng& rng) {
  State s;
  s.map = generate_dungeon(p, rng);
  for (int team = 0; team < kTeams; ++team) {
    const auto& spawns = s.map.spawn_points[static_cast<std::size_t>(team)];
    for (int k = 0; k < p.team_size(); ++k) {
      s.agent_pos.push_back(spawns[static_cast<std::size_t>(k)]);
      s.role.push_back(k < p.collectors_per_team ? Role::Collector : Role::Fighter);
      s.team_of.push_back(team);
      s.hp.push_back(p.agent_hp);
      s.alive.push_back(true);
    }
  }

  std::vector<Cell> preferred;
  std::vector<Cell> fallback;
  for (std::size_t i = 0; i < s.map.tiles.size(); ++i) {
    const Cell c = s.map.shape.cell(i);
    if (s.map.tiles[i] != Tile::Floor || c == s.map.treasure) continue;
    if (std::find(s.agent_pos.begin(), s.agent_pos.end(), c) != s.agent_pos.end()) continue;
    const bool near_spawn = std::any_of(s.agent_pos.begin(), s.agent_pos.end(),
                                        [&](Cell a) { return manhattan(a, c) <= 3; });
    (near_spawn ? fallback : preferred).push_back(c);
  }
  rng.shuffle(preferred);
  rng.shuffle(fallback);
  preferred.insert(preferred.end(), fallback.begin(), fallback.end());
  if (static_cast<int>(preferred.size()) < p.foes) throw InvalidTask({"not enough floor for foes"});
  for (int k = 0; k < p.foes; ++k) s.foes.push_back({k, preferred[static_cast<std::size_t>(k)], p.foe_hp});

  s.tick = 0;
  s.tick_limit = p.tick_limit;
  s.sight_radius = p.sight_radius;
  return s;
}

State init(const Params& p, std::uint64_t seed) {
  Rng rng(seed);
  return init(p, rng);
}

std::vector<Centipoints> event_rewards(EventKind event, int team, std::span<const int> team_of) {
  std::vector<Centipoints> out(team_of.size());
  for (std::size_t i = 0; i < team_of.size(); ++i) {
    const bool own = team_of[i] == team;
    switch (event) {
      case EventKind::Pickup: out[i] = own ? kPickupReward : -kPickupReward; break;
      case EventKind::TreasureExit: out[i] = own ? kTreasureExitReward : -kTreasureExitReward; break;
      case EventKind::Death: out[i] = own ? -kDeathPenalty : Centipoints{}; break;
      default: throw std::invalid_argument("event_rewards: not a scoring event");
    }
  }
  return out;
}

FoeAction foe_policy(const State& s, std::size_t foe_index, Rng& rng) {
  const Foe& foe = s.foes.at(foe_index);
  for (int i = 0; i < s.num_agents(); ++i) {
    if (s.alive[static_cast<std::size_t>(i)] && manhattan(s.agent_pos[static_cast<std::size_t>(i)], foe.pos) == 1)
      return {FoeAction::Kind::Attack, Direction::North, i};
  }

  auto free_cell = [&](Cell c) { return s.map.walkable(c) && !s.agent_at(c) && !s.foe_at(c); };

  int target = -1;
  int best = std::numeric_limits<int>::max();
  for (int i = 0; i < s.num_agents(); ++i) {
    if (!s.alive[static_cast<std::size_t>(i)]) continue;
    const int d = manhattan(s.agent_pos[static_cast<std::size_t>(i)], foe.pos);
    if (d <= s.sight_radius && d < best) {
      best = d;
      target = i;
    }
  }
  if (target >= 0) {
    const auto dist =
        bfs_distances(s.map.shape, s.agent_pos[static_cast<std::size_t>(target)], [&](Cell c) { return free_cell(c); });
    std::optional<Direction> step_dir;
    int step_dist = std::numeric_limits<int>::max();
    for (Direction d : kDirections) {
      const Cell n = neighbor(foe.pos, d);
      if (!free_cell(n)) continue;
      const int nd = dist[s.map.shape.index(n)];
      if (nd != kUnreachable && nd < step_dist) {
        step_dist = nd;
        step_dir = d;
      }
    }
    if (step_dir) return {FoeAction::Kind::Move, *step_dir, -1};
  }

  std::vector<Direction> options;
  for (Direction d : kDirections)
    if (free_cell(neighbor(foe.pos, d))) options.push_back(d);
  if (options.empty()) return {};
  return {FoeAction::Kind::Move, options[rng.uniform(options.size())], -1};
}

StepOutcome step(State& s, std::span<const std::optional<Action>> actions, Rng& rng) {
  const int n = s.num_agents();
  if (static_cast<int>(actions.size()) != n) throw std::invalid_argument("treasure_hunt::step: one action slot per agent");
  StepOutcome out;
  out.rewards.assign(static_cast<std::size_t>(n), Centipoints{});
  ++s.tick;

  auto pay = [&](EventKind kind, int team) {
    const auto r = event_rewards(kind, team, s.team_of);
    for (std::size_t i = 0; i < r.size(); ++i) out.rewards[i] += r[i];
  };
  auto finish = [&](Termination t) {
    out.done = true;
    out.termination = t;
  };

  std::vector<Cell> intended = s.agent_pos;
  std::vector<bool> participates(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto slot = static_cast<std::size_t>(i);
    participates[slot] = s.alive[slot];
    const auto& a = actions[slot];
    if (!participates[slot] || !a || a->kind != Action::Kind::Move) continue;
    const Cell t = neighbor(s.agent_pos[slot], a->dir);
    if (s.map.walkable(t) && !s.foe_at(t)) intended[slot] = t;
  }
  s.agent_pos = resolve_moves(s.agent_pos, intended, participates);

  for (int i = 0; i < n; ++i) {
    const auto slot = static_cast<std::size_t>(i);
    const auto& a = actions[slot];
    if (!s.alive[slot] || !a || a->kind != Action::Kind::Attack || s.role[slot] != Role::Fighter) continue;
    if (auto f = s.foe_at(neighbor(s.agent_pos[slot], a->dir))) {
      if (--s.foes[*f].hp <= 0) s.foes.erase(s.foes.begin() + static_cast<std::ptrdiff_t>(*f));
    }
  }

  for (int i = 0; i < n; ++i) {
    const auto slot = static_cast<std::size_t>(i);
    const auto& a = actions[slot];
    if (!s.alive[slot] || !a || a->kind != Action::Kind::Pickup) continue;
    if (s.role[slot] != Role::Collector || !s.treasure_present || s.agent_pos[slot] != s.map.treasure) continue;
    s.treasure_present = false;
    s.carrier = i;
    pay(EventKind::Pickup, s.team_of[slot]);
    out.events.push_back({EventKind::Pickup, i, s.team_of[slot]});
  }

  if (s.carrier && s.map.at(s.agent_pos[static_cast<std::size_t>(*s.carrier)]) == Tile::Exit) {
    const int team = s.team_of[static_cast<std::size_t>(*s.carrier)];
    pay(EventKind::TreasureExit, team);
    out.events.push_back({EventKind::TreasureExit, *s.carrier, team});
    finish(Termination::TreasureExit);
    return out;
  }

  for (std::size_t f = 0; f < s.foes.size() && !out.done; ++f) {
    const FoeAction act = foe_policy(s, f, rng);
    if (act.kind == FoeAction::Kind::Move) {
      s.foes[f].pos = neighbor(s.foes[f].pos, act.dir);
    } else if (act.kind == FoeAction::Kind::Attack) {
      const auto victim = static_cast<std::size_t>(act.target);
      if (--s.hp[victim] <= 0) {
        s.hp[victim] = 0;
        s.alive[victim] = false;
        if (s.carrier && *s.carrier == act.target) s.carrier.reset();
        pay(EventKind::Death, s.team_of[victim]);
        out.events.push_back({EventKind::Death, act.target, s.team_of[victim]});
        finish(Termination::Death);
      }
    }
  }

  if (!out.done && s.tick >= s.tick_limit) {
    out.events.push_back({EventKind::Timeout, -1, -1});
    finish(Termination::Timeout);
  }
  return out;
}

Observation observe(const State& s, int slot, int radius) {
  const auto idx = static_cast<std::size_t>(slot);
  Observation o;
  o.self = slot;
  o.team = s.team_of[idx];
  o.role = s.role[idx];
  o.hp = s.hp[idx];
  o.pos = s.agent_pos[idx];
  o.width = s.map.shape.width;
  o.height = s.map.shape.height;
  o.origin = {o.pos.x - radius, o.pos.y - radius};
  auto visible = [&](Cell c) {
    return c.x >= o.origin.x && c.y >= o.origin.y && c.x <= o.pos.x + radius && c.y <= o.pos.y + radius;
  };
  for (int y = o.origin.y; y <= o.pos.y + radius; ++y) {
    std::string row;
    for (int x = o.origin.x; x <= o.pos.x + radius; ++x) {
      const Cell c{x, y};
      row += s.map.shape.contains(c) ? glyph_of(s.map.tiles[s.map.shape.index(c)]) : '?';
    }
    o.rows.push_back(std::move(row));
  }
  if (s.treasure_present && visible(s.map.treasure)) o.treasure = s.map.treasure;
  for (const Foe& f : s.foes)
    if (visible(f.pos)) o.foes.push_back({f.pos, f.hp});
  for (int i = 0; i < s.num_agents(); ++i) {
    const auto j = static_cast<std::size_t>(i);
    if (i == slot) continue;
    if (s.team_of[j] == o.team) {
      o.teammates.push_back({i, s.role[j], static_cast<bool>(s.alive[j]), s.agent_pos[j], s.hp[j]});
    } else if (s.alive[j] && visible(s.agent_pos[j])) {
      o.others.push_back({i, s.team_of[j], s.role[j], s.agent_pos[j]});
    }
  }
  o.carrying = s.carrier && *s.carrier == slot;
  o.treasure_holder_team = s.carrier ? s.team_of[static_cast<std::size_t>(*s.carrier)] : -1;
  o.ticks_remaining = s.tick_limit - s.tick;
  return o;
}

std::uint64_t state_hash(const State& s) {
  Fnv1a64 h;
  h.str("treasure_hunt").i32(s.map.shape.width).i32(s.map.shape.height);
  for (Tile t : s.map.tiles) h.byte(static_cast<std::uint8_t>(t));
  h.i32(s.map.treasure.x).i32(s.map.treasure.y).i32(s.map.exit.x).i32(s.map.exit.y);
  h.i32(s.num_agents());
  for (std::size_t i = 0; i < s.agent_pos.size(); ++i) {
    h.i32(s.agent_pos[i].x).i32(s.agent_pos[i].y).i32(s.hp[i]);
    h.byte(static_cast<std::uint8_t>(s.role[i])).i32(s.team_of[i]).byte(s.alive[i] ? 1 : 0);
  }
  h.i32(static_cast<std::int32_t>(s.foes.size()));
  for (const Foe& f : s.foes) h.i32(f.id).i32(f.pos.x).i32(f.pos.y).i32(f.hp);
  h.i32(s.carrier.value_or(-1)).byte(s.treasure_present ? 1 : 0);
  h.i32(s.tick).i32(s.tick_limit).i32(s.sight_radius);
  return h.digest();
}

json to_json(const DungeonMap& m) {
  json rows = json::array();
  for (int y = 0; y < m.shape.height; ++y) {
    std::string row;
    for (int x = 0; x < m.shape.width; ++x) row += glyph_of(m.tiles[m.shape.index({x, y})]);
    rows.push_back(row);
  }
  json rooms = json::array();
  for (const Room& r : m.rooms) rooms.push_back(json::array({r.x, r.y, r.w, r.h}));
  json spawns = json::array();
  for (const auto& team : m.spawn_points) {
    json cells = json::array();
    for (Cell c : team) cells.push_back(json_util::cell(c));
    spawns.push_back(cells);
  }
  return {{"tiles", rows},
          {"rooms", rooms},
          {"treasure", json_util::cell(m.treasure)},
          {"exit", json_util::cell(m.exit)},
          {"spawn_points", spawns}};
}

DungeonMap map_from_json(const json& j) {
  using namespace json_util;
  reject_unknown(j, {"tiles", "rooms", "treasure", "exit", "spawn_points"}, "map");
  DungeonMap m;
  const json& rows = require(j, "tiles", "map");
  if (!rows.is_array() || rows.empty()) throw FieldError("map.tiles", "expected non-empty row list");
  m.shape = {static_cast<int>(rows[0].get<std::string>().size()), static_cast<int>(rows.size())};
  for (const auto& row : rows) {
    const auto text = row.get<std::string>();
    if (static_cast<int>(text.size()) != m.shape.width) throw FieldError("map.tiles", "ragged rows");
    for (char c : text) m.tiles.push_back(tile_of(c));
  }
  for (const auto& r : require(j, "rooms", "map")) {
    if (!r.is_array() || r.size() != 4) throw FieldError("map.rooms", "expected [x, y, w, h]");
    m.rooms.push_back({r[0].get<int>(), r[1].get<int>(), r[2].get<int>(), r[3].get<int>()});
  }
  m.treasure = get_cell(require(j, "treasure", "map"), "map.treasure");
  m.exit = get_cell(require(j, "exit", "map"), "map.exit");
  const json& spawns = require(j, "spawn_points", "map");
  if (!spawns.is_array() || spawns.size() != kTeams) throw FieldError("map.spawn_points", "expected two teams");
  for (std::size_t t = 0; t < kTeams; ++t)
    for (const auto& c : spawns[t]) m.spawn_points[t].push_back(get_cell(c, "map.spawn_points"));
  return m;
}

json to_json(const State& s) {
  json agents = json::array();
  for (std::size_t i = 0; i < s.agent_pos.size(); ++i)
    agents.push_back({{"pos", json_util::cell(s.agent_pos[i])},
                      {"hp", s.hp[i]},
                      {"role", role_name(s.role[i])},
                      {"team", s.team_of[i]},
                      {"alive", static_cast<bool>(s.alive[i])}});
  json foes = json::array();
  for (const Foe& f : s.foes) foes.push_back({{"id", f.id}, {"pos", json_util::cell(f.pos)}, {"hp", f.hp}});
  return {{"map", to_json(s.map)},
          {"agents", agents},
          {"foes", foes},
          {"carrier", s.carrier ? json(*s.carrier) : json(nullptr)},
          {"treasure_present", s.treasure_present},
          {"tick", s.tick},
          {"tick_limit", s.tick_limit},
          {"sight_radius", s.sight_radius}};
}

State state_from_json(const json& j) {
  using namespace json_util;
  reject_unknown(j, {"map", "agents", "foes", "carrier", "treasure_present", "tick", "tick_limit", "sight_radius"},
                 "state");
  State s;
  s.map = map_from_json(require(j, "map", "state"));
  for (const auto& a : require(j, "agents", "state")) {
    s.agent_pos.push_back(get_cell(require(a, "pos", "state.agents"), "state.agents.pos"));
    s.hp.push_back(static_cast<int>(get_int(a, "hp", "state.agents")));
    s.role.push_back(role_from(get_string(a, "role", "state.agents"), "state.agents.role"));
    s.team_of.push_back(static_cast<int>(get_int(a, "team", "state.agents")));
    s.alive.push_back(get_bool(a, "alive", "state.agents"));
  }
  for (const auto& f : require(j, "foes", "state"))
    s.foes.push_back({static_cast<int>(get_int(f, "id", "state.foes")),
                      get_cell(require(f, "pos", "state.foes"), "state.foes.pos"),
                      static_cast<int>(get_int(f, "hp", "state.foes"))});
  const json& carrier = require(j, "carrier", "state");
  if (!carrier.is_null()) s.carrier = carrier.get<int>();
  s.treasure_present = get_bool(j, "treasure_present", "state");
  s.tick = static_cast<int>(get_int(j, "tick", "state"));
  s.tick_limit = static_cast<int>(get_int(j, "tick_limit", "state"));
  s.sight_radius = static_cast<int>(get_int(j, "sight_radius", "state"));
  return s;
}

json to_json(const Observation& o) {
  json foes = json::array();
  for (const auto& f : o.foes) foes.push_back({{"pos", json_util::cell(f.pos)}, {"hp", f.hp}});
  json others = json::array();
  for (const auto& a : o.others)
    others.push_back({{"slot", a.slot}, {"team", a.team}, {"role", role_name(a.role)}, {"pos", json_util::cell(a.pos)}});
  json mates = json::array();
  for (const auto& m : o.teammates)
    mates.push_back({{"slot", m.slot},
                     {"role", role_name(m.role)},
                     {"alive", m.alive},
                     {"pos", json_util::cell(m.pos)},
                     {"hp", m.hp}});
  return {{"self", o.self},
          {"team", o.team},
          {"role", role_name(o.role)},
          {"hp", o.hp},
          {"pos", json_util::cell(o.pos)},
          {"width", o.width},
          {"height", o.height},
          {"origin", json_util::cell(o.origin)},
          {"grid", o.rows},
          {"treasure", o.treasure ? json_util::cell(*o.treasure) : json(nullptr)},
          {"foes", foes},
          {"others", others},
          {"teammates", mates},
          {"carrying", o.carrying},
          {"treasure_holder_team", o.treasure_holder_team},
          {"ticks_remaining", o.ticks_remaining}};
}

Observation observation_from_json(const json& j) {
  using namespace json_util;
  reject_unknown(j, {"self", "team", "role", "hp", "pos", "width", "height", "origin", "grid", "treasure", "foes",
                     "others", "teammates", "carrying", "treasure_holder_team", "ticks_remaining"},
                 "view");
  Observation o;
  o.self = static_cast<int>(get_int(j, "self", "view"));
  o.team = static_cast<int>(get_int(j, "team", "view"));
  o.role = role_from(get_string(j, "role", "view"), "view.role");
  o.hp = static_cast<int>(get_int(j, "hp", "view"));
  o.pos = get_cell(require(j, "pos", "view"), "view.pos");
  o.width = static_cast<int>(get_int(j, "width", "view"));
  o.height = static_cast<int>(get_int(j, "height", "view"));
  o.origin = get_cell(require(j, "origin", "view"), "view.origin");
  for (const auto& row : require(j, "grid", "view")) o.rows.push_back(row.get<std::string>());
  const json& t = require(j, "treasure", "view");
  if (!t.is_null()) o.treasure = get_cell(t, "view.treasure");
  for (const auto& f : require(j, "foes", "view"))
    o.foes.push_back({get_cell(require(f, "pos", "view.foes"), "view.foes.pos"),
                      static_cast<int>(get_int(f, "hp", "view.foes"))});
  for (const auto& a : require(j, "others", "view"))
    o.others.push_back({static_cast<int>(get_int(a, "slot", "view.others")),
                        static_cast<int>(get_int(a, "team", "view.others")),
                        role_from(get_string(a, "role", "view.others"), "view.others.role"),
                        get_cell(require(a, "pos", "view.others"), "view.others.pos")});
  for (const auto& m : require(j, "teammates", "view"))
    o.teammates.push_back({static_cast<int>(get_int(m, "slot", "view.teammates")),
                           role_from(get_string(m, "role", "view.teammates"), "view.teammates.role"),
                           get_bool(m, "alive", "view.teammates"),
                           get_cell(require(m, "pos", "view.teammates"), "view.teammates.pos"),
                           static_cast<int>(get_int(m, "hp", "view.teammates"))});
  o.carrying = get_bool(j, "carrying", "view");
  o.treasure_holder_team = static_cast<int>(get_int(j, "treasure_holder_team", "view"));
  o.ticks_remaining = static_cast<int>(get_int(j, "ticks_remaining", "view"));
  return o;
}

}  // namespace marlo::treasure_hunt
