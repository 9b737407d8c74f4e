#include "marlo/games/build_battle.hpp"

#include "marlo/core/json_util.hpp"

#include <algorithm>
#include <set>

namespace marlo::build_battle {
namespace {

using nlohmann::json;

std::string block_name(BlockId id, const std::vector<std::string>& palette) {
  return id == kEmpty ? std::string(kEmptyName) : palette.at(static_cast<std::size_t>(id));
}

BlockId parse_block(const std::string& name, const std::vector<std::string>& palette, std::string_view field) {
  if (name == kEmptyName) return kEmpty;
  auto it = std::find(palette.begin(), palette.end(), name);
  if (it == palette.end()) throw FieldError(std::string(field), "block '" + name + "' is not in the palette");
  return static_cast<BlockId>(it - palette.begin());
}

json cells_json(const std::vector<BlockId>& cells, const std::vector<std::string>& palette) {
  json out = json::array();
  for (BlockId b : cells) out.push_back(block_name(b, palette));
  return out;
}

std::vector<BlockId> cells_from_json(const json& j, const std::vector<std::string>& palette, std::string_view field) {
  if (!j.is_array()) throw FieldError(std::string(field), "expected a list of block names");
  std::vector<BlockId> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw FieldError(std::string(field), "expected a list of block names");
    out.push_back(parse_block(v.get<std::string>(), palette, field));
  }
  return out;
}

Dims dims_from_json(const json& j, std::string_view field) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number_integer() || !j[1].is_number_integer() ||
      !j[2].is_number_integer())
    throw FieldError(std::string(field), "expected [w, h, d]");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

}  // namespace

int Blueprint::required_blocks() const {
  return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](BlockId b) { return b != kEmpty; }));
}

std::optional<BlockId> State::block_id(std::string_view name) const {
  auto it = std::find(palette.begin(), palette.end(), name);
  if (it == palette.end()) return std::nullopt;
  return static_cast<BlockId>(it - palette.begin());
}

std::vector<std::string> validate(const Params& p) {
  std::vector<std::string> v;
  const Dims& d = p.blueprint_dims;
  if (d.w < 1 || d.h < 1 || d.d < 1) v.push_back("blueprint dims must be at least (1,1,1)");
  if (p.team_size < 1) v.push_back("team_size must be at least 1");
  if (d.w >= 1 && d.h >= 1 && p.team_size > (d.w + 2) * (d.h + 2))
    v.push_back("ground plane too small for team_size agents");
  if (p.palette.empty()) v.push_back("palette must contain at least one block type");
  std::set<std::string> names;
  for (const auto& name : p.palette) {
    if (name.empty() || name == kEmptyName) v.push_back("invalid palette entry '" + name + "'");
    if (!names.insert(name).second) v.push_back("duplicate palette entry '" + name + "'");
  }
  if (!p.blueprint.empty()) {
    if (d.w >= 1 && d.h >= 1 && d.d >= 1 && p.blueprint.size() != d.volume())
      v.push_back("blueprint lists " + std::to_string(p.blueprint.size()) + " cells, dims require " +
                  std::to_string(d.volume()));
    bool any_block = false;
    for (const auto& name : p.blueprint) {
      if (name == kEmptyName) continue;
      any_block = true;
      if (!names.count(name)) v.push_back("blueprint block '" + name + "' is not in the palette");
    }
    if (!any_block) v.push_back("blueprint needs at least one non-empty cell");
  }
  if (!(p.fill > 0.0 && p.fill <= 1.0)) v.push_back("fill must lie in (0, 1]");
  if (p.tick_limit < 1) v.push_back("tick_limit must be positive");
  return v;
}

State init(const Params& p, Rng& rng) {
  if (auto v = validate(p); !v.empty()) throw InvalidTask(std::move(v));
  State s;
  s.palette = p.palette;
  s.blueprint.dims = p.blueprint_dims;
  const std::size_t volume = p.blueprint_dims.volume();
  if (!p.blueprint.empty()) {
    for (const auto& name : p.blueprint) s.blueprint.cells.push_back(parse_block(name, p.palette, "blueprint"));
  } else {
    s.blueprint.cells.assign(volume, kEmpty);
    for (auto& c : s.blueprint.cells)
      if (rng.bernoulli(p.fill)) c = static_cast<BlockId>(rng.uniform(p.palette.size()));
    if (s.blueprint.required_blocks() == 0)
      s.blueprint.cells[rng.uniform(volume)] = static_cast<BlockId>(rng.uniform(p.palette.size()));
  }
  for (auto& r : s.regions) r.assign(volume, kEmpty);

  // Both teams start from the same plane cells.
  const GridShape plane = s.plane();
  std::vector<Cell> spawn;
  for (std::size_t i = 0; i < plane.size(); ++i) spawn.push_back(plane.cell(i));
  rng.shuffle(spawn);
  for (int team = 0; team < kTeams; ++team)
    for (int k = 0; k < p.team_size; ++k) {
      s.agent_pos.push_back(spawn[static_cast<std::size_t>(k)]);
      s.team_of.push_back(team);
    }
  s.tick = 0;
  s.tick_limit = p.tick_limit;
  return s;
}

State init(const Params& p, std::uint64_t seed) {
  Rng rng(seed);
  return init(p, rng);
}

Centipoints classify_event(const Blueprint& bp, BlockPos pos, BlockId before, BlockId after) {
  if ((before == kEmpty) == (after == kEmpty))
    throw std::invalid_argument("classify_event: exactly one of before/after must be empty");
  const BlockId wanted = bp.at(pos);
  if (before == kEmpty) return after == wanted ? kBlockReward : -kBlockReward;  // placement
  return before == wanted ? -kBlockReward : kBlockReward;                       // removal
}

bool is_complete(const Region& region, const Blueprint& bp) {
  if (region.size() != bp.cells.size()) throw std::invalid_argument("is_complete: region/blueprint size mismatch");
  return std::equal(region.begin(), region.end(), bp.cells.begin());
}

int potential(const Region& region, const Blueprint& bp) {
  int phi = 0;
  for (std::size_t i = 0; i < region.size(); ++i) {
    if (region[i] == kEmpty) continue;
    phi += region[i] == bp.cells[i] ? 1 : -1;
  }
  return phi;
}

Cell target_column(Cell plane_pos, Direction dir) {
  const Cell n = neighbor(plane_pos, dir);
  return {n.x - 1, n.y - 1};
}

StepOutcome step(State& s, std::span<const std::optional<Action>> actions, Rng& /*rng*/) {
  const int n = s.num_agents();
  if (static_cast<int>(actions.size()) != n) throw std::invalid_argument("build_battle::step: one action slot per agent");
  StepOutcome out;
  out.rewards.assign(static_cast<std::size_t>(n), Centipoints{});
  ++s.tick;

  const GridShape plane = s.plane();
  std::vector<Cell> intended = s.agent_pos;
  for (int i = 0; i < n; ++i) {
    const auto& a = actions[static_cast<std::size_t>(i)];
    if (!a || a->kind != Action::Kind::Move) continue;
    const Cell t = neighbor(s.agent_pos[static_cast<std::size_t>(i)], a->dir);
    if (plane.contains(t)) intended[static_cast<std::size_t>(i)] = t;
  }
  // Regions are private, so movement conflicts only arise within a team.
  for (int team = 0; team < kTeams; ++team) {
    std::vector<bool> participates(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) participates[static_cast<std::size_t>(i)] = s.team_of[static_cast<std::size_t>(i)] == team;
    auto moved = resolve_moves(s.agent_pos, intended, participates);
    for (int i = 0; i < n; ++i)
      if (participates[static_cast<std::size_t>(i)]) s.agent_pos[static_cast<std::size_t>(i)] = moved[static_cast<std::size_t>(i)];
  }

  for (int i = 0; i < n; ++i) {
    const auto slot = static_cast<std::size_t>(i);
    const auto& a = actions[slot];
    if (!a || (a->kind != Action::Kind::Place && a->kind != Action::Kind::Remove)) continue;
    const Cell col = target_column(s.agent_pos[slot], a->dir);
    const BlockPos pos{col.x, col.y, a->z};
    if (!s.blueprint.contains(pos)) continue;
    const int team = s.team_of[slot];
    Region& region = s.regions[static_cast<std::size_t>(team)];
    const BlockId before = region[s.blueprint.index(pos)];
    BlockId after = before;
    if (a->kind == Action::Kind::Place) {
      auto id = s.block_id(a->block);
      if (!id || before != kEmpty) continue;
      after = *id;
    } else {
      if (before == kEmpty) continue;
      after = kEmpty;
    }
    region[s.blueprint.index(pos)] = after;
    const Centipoints r = classify_event(s.blueprint, pos, before, after);
    out.rewards[slot] += r;
    s.team_score[static_cast<std::size_t>(team)] += r;
    out.events.push_back({after == kEmpty ? EventKind::BlockRemoved : EventKind::BlockPlaced, i, team});
  }

  for (int team = 0; team < kTeams; ++team) {
    if (is_complete(s.regions[static_cast<std::size_t>(team)], s.blueprint)) {
      out.events.push_back({EventKind::StructureComplete, -1, team});
      out.done = true;
      out.termination = Termination::StructureComplete;
    }
  }
  if (!out.done && s.tick >= s.tick_limit) {
    out.events.push_back({EventKind::Timeout, -1, -1});
    out.done = true;
    out.termination = Termination::Timeout;
  }
  return out;
}

std::optional<int> match_winner(const std::vector<Centipoints>& totals, const std::vector<int>& team_of) {
  std::array<Centipoints, kTeams> sum{};
  for (std::size_t i = 0; i < totals.size(); ++i) sum[static_cast<std::size_t>(team_of.at(i))] += totals[i];
  if (sum[0] == sum[1]) return std::nullopt;
  return sum[0] > sum[1] ? 0 : 1;
}

Observation observe(const State& s, int slot) {
  const auto idx = static_cast<std::size_t>(slot);
  Observation o;
  o.self = slot;
  o.team = s.team_of[idx];
  o.pos = s.agent_pos[idx];
  for (int i = 0; i < s.num_agents(); ++i)
    if (i != slot && s.team_of[static_cast<std::size_t>(i)] == o.team) o.teammates.push_back({i, s.agent_pos[static_cast<std::size_t>(i)]});
  o.region = s.regions[static_cast<std::size_t>(o.team)];
  o.blueprint = s.blueprint;
  o.palette = s.palette;
  o.own_score = s.team_score[static_cast<std::size_t>(o.team)];
  o.opponent_score = s.team_score[static_cast<std::size_t>(1 - o.team)];
  o.ticks_remaining = s.tick_limit - s.tick;
  return o;
}

std::uint64_t state_hash(const State& s) {
  Fnv1a64 h;
  h.str("build_battle");
  const Dims& d = s.blueprint.dims;
  h.i32(d.w).i32(d.h).i32(d.d);
  h.i32(static_cast<std::int32_t>(s.palette.size()));
  for (const auto& name : s.palette) h.str(name);
  for (BlockId b : s.blueprint.cells) h.i32(b);
  for (const auto& region : s.regions)
    for (BlockId b : region) h.i32(b);
  h.i32(s.num_agents());
  for (std::size_t i = 0; i < s.agent_pos.size(); ++i) h.i32(s.agent_pos[i].x).i32(s.agent_pos[i].y).i32(s.team_of[i]);
  for (Centipoints c : s.team_score) h.i64(c.value());
  h.i32(s.tick).i32(s.tick_limit);
  return h.digest();
}

json to_json(const Blueprint& bp, const std::vector<std::string>& palette) {
  return {{"dims", json::array({bp.dims.w, bp.dims.h, bp.dims.d})}, {"cells", cells_json(bp.cells, palette)}};
}

Blueprint blueprint_from_json(const json& j, const std::vector<std::string>& palette) {
  using namespace json_util;
  reject_unknown(j, {"dims", "cells"}, "blueprint");
  Blueprint bp;
  bp.dims = dims_from_json(require(j, "dims", "blueprint"), "blueprint.dims");
  bp.cells = cells_from_json(require(j, "cells", "blueprint"), palette, "blueprint.cells");
  if (bp.cells.size() != bp.dims.volume()) throw FieldError("blueprint.cells", "cell count does not match dims");
  return bp;
}

json to_json(const State& s) {
  json agents = json::array();
  for (std::size_t i = 0; i < s.agent_pos.size(); ++i)
    agents.push_back({{"pos", json_util::cell(s.agent_pos[i])}, {"team", s.team_of[i]}});
  return {{"blueprint", to_json(s.blueprint, s.palette)},
          {"regions", json::array({cells_json(s.regions[0], s.palette), cells_json(s.regions[1], s.palette)})},
          {"agents", agents},
          {"palette", s.palette},
          {"team_score", json::array({s.team_score[0].value(), s.team_score[1].value()})},
          {"tick", s.tick},
          {"tick_limit", s.tick_limit}};
}

State state_from_json(const json& j) {
  using namespace json_util;
  reject_unknown(j, {"blueprint", "regions", "agents", "palette", "team_score", "tick", "tick_limit"}, "state");
  State s;
  s.palette = require(j, "palette", "state").get<std::vector<std::string>>();
  s.blueprint = blueprint_from_json(require(j, "blueprint", "state"), s.palette);
  const json& regions = require(j, "regions", "state");
  if (!regions.is_array() || regions.size() != kTeams) throw FieldError("state.regions", "expected two regions");
  for (std::size_t t = 0; t < kTeams; ++t) {
    s.regions[t] = cells_from_json(regions[t], s.palette, "state.regions");
    if (s.regions[t].size() != s.blueprint.cells.size()) throw FieldError("state.regions", "region size mismatch");
  }
  for (const auto& a : require(j, "agents", "state")) {
    s.agent_pos.push_back(get_cell(require(a, "pos", "state.agents"), "state.agents.pos"));
    s.team_of.push_back(static_cast<int>(get_int(a, "team", "state.agents")));
  }
  const json& scores = require(j, "team_score", "state");
  for (std::size_t t = 0; t < kTeams; ++t) s.team_score[t] = Centipoints{scores.at(t).get<std::int64_t>()};
  s.tick = static_cast<int>(get_int(j, "tick", "state"));
  s.tick_limit = static_cast<int>(get_int(j, "tick_limit", "state"));
  return s;
}

json to_json(const Observation& o) {
  json mates = json::array();
  for (const auto& m : o.teammates) mates.push_back({{"slot", m.slot}, {"pos", json_util::cell(m.pos)}});
  return {{"self", o.self},
          {"team", o.team},
          {"pos", json_util::cell(o.pos)},
          {"teammates", mates},
          {"region", cells_json(o.region, o.palette)},
          {"blueprint", to_json(o.blueprint, o.palette)},
          {"palette", o.palette},
          {"own_score", o.own_score.value()},
          {"opponent_score", o.opponent_score.value()},
          {"ticks_remaining", o.ticks_remaining}};
}

Observation observation_from_json(const json& j) {
  using namespace json_util;
  reject_unknown(j, {"self", "team", "pos", "teammates", "region", "blueprint", "palette", "own_score",
                     "opponent_score", "ticks_remaining"},
                 "view");
  Observation o;
  o.self = static_cast<int>(get_int(j, "self", "view"));
  o.team = static_cast<int>(get_int(j, "team", "view"));
  o.pos = get_cell(require(j, "pos", "view"), "view.pos");
  for (const auto& m : require(j, "teammates", "view"))
    o.teammates.push_back({static_cast<int>(get_int(m, "slot", "view.teammates")),
                           get_cell(require(m, "pos", "view.teammates"), "view.teammates.pos")});
  o.palette = require(j, "palette", "view").get<std::vector<std::string>>();
  o.region = cells_from_json(require(j, "region", "view"), o.palette, "view.region");
  o.blueprint = blueprint_from_json(require(j, "blueprint", "view"), o.palette);
  o.own_score = Centipoints{get_int(j, "own_score", "view")};
  o.opponent_score = Centipoints{get_int(j, "opponent_score", "view")};
  o.ticks_remaining = static_cast<int>(get_int(j, "ticks_remaining", "view"));
  return o;
}

}  // namespace marlo::build_battle
