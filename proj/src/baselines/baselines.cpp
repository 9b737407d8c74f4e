#include "marlo/baselines/baselines.hpp"

#include "marlo/core/grid.hpp"

#include <array>
#include <stdexcept>

namespace marlo::baselines {
namespace {

constexpr std::array kNames{"random", "greedy_chaser", "exit_seeker", "greedy_builder", "hunter_scripted"};

/// First move of a shortest path from `from` to the nearest goal cell, nullopt when no
/// goal is reachable or `from` is itself the only goal.
template <class Passable, class Goal>
std::optional<Direction> step_toward(GridShape shape, Cell from, Passable&& passable, Goal&& is_goal) {
  const auto dist = bfs_distances(shape, from, passable);
  std::optional<Cell> best;
  int best_d = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 0) continue;
    const Cell c = shape.cell(i);
    if (!is_goal(c)) continue;
    if (!best || dist[i] < best_d) {
      best = c;
      best_d = dist[i];
    }
  }
  if (!best) return std::nullopt;
  const auto back = bfs_distances(shape, *best, [&](Cell c) { return c == from || passable(c); });
  for (Direction d : kDirections) {
    const Cell n = neighbor(from, d);
    if (shape.contains(n) && back[shape.index(n)] == best_d - 1) return d;
  }
  return std::nullopt;
}

template <class T>
const T& expect(const Observation& obs, BaselineKind k) {
  if (const T* o = std::get_if<T>(&obs)) return *o;
  throw std::invalid_argument(std::string(to_string(k)) + ": incompatible observation for " +
                              std::string(to_string(game_of(obs))));
}

/// Terrain memory accumulated from windowed views; '?' until seen.
class TerrainMemory {
 public:
  template <class Obs>
  void update(const Obs& o) {
    if (shape_.width != o.width || shape_.height != o.height) {
      shape_ = {o.width, o.height};
      known_.assign(shape_.size(), '?');
    }
    for (std::size_t r = 0; r < o.rows.size(); ++r)
      for (std::size_t c = 0; c < o.rows[r].size(); ++c) {
        const Cell p{o.origin.x + static_cast<int>(c), o.origin.y + static_cast<int>(r)};
        if (shape_.contains(p)) known_[shape_.index(p)] = o.rows[r][c];
      }
  }
  [[nodiscard]] GridShape shape() const { return shape_; }
  [[nodiscard]] char at(Cell c) const { return shape_.contains(c) ? known_[shape_.index(c)] : '#'; }
  [[nodiscard]] bool open(Cell c) const {
    const char g = at(c);
    return g == '.' || g == 'E' || g == '?';
  }

 private:
  GridShape shape_{0, 0};
  std::vector<char> known_;
};

// ---- random -------------------------------------------------------------

class RandomController final : public Controller {
 public:
  Action act(const Observation& obs, Rng& rng) override {
    if (const auto* o = std::get_if<mob_chase::Observation>(&obs)) {
      using A = mob_chase::Action;
      std::vector<A> legal{A::MoveNorth, A::MoveSouth, A::MoveEast, A::MoveWest, A::Stay};
      const auto& self = o->agents.at(static_cast<std::size_t>(o->self));
      if (self.pos && o->glyph(*self.pos) == 'E') legal.push_back(A::UseExit);
      return rng.pick(legal);
    }
    if (const auto* o = std::get_if<build_battle::Observation>(&obs)) {
      using A = build_battle::Action;
      std::vector<A> legal{A::stay()};
      for (Direction d : kDirections) {
        legal.push_back(A::move(d));
        for (int z = 0; z < o->blueprint.dims.d; ++z) {
          for (const auto& b : o->palette) legal.push_back(A::place(b, d, z));
          legal.push_back(A::remove(d, z));
        }
      }
      return rng.pick(legal);
    }
    const auto& o = std::get<treasure_hunt::Observation>(obs);
    using A = treasure_hunt::Action;
    std::vector<A> legal{A::stay()};
    for (Direction d : kDirections) legal.push_back(A::move(d));
    if (o.role == treasure_hunt::Role::Collector) {
      legal.push_back(A::pickup());
    } else {
      for (Direction d : kDirections) legal.push_back(A::attack(d));
    }
    return rng.pick(legal);
  }
};

// ---- mob chase ----------------------------------------------------------

std::vector<Cell> visible_others(const mob_chase::Observation& o) {
  std::vector<Cell> out;
  for (const auto& a : o.agents)
    if (a.slot != o.self && a.pos) out.push_back(*a.pos);
  return out;
}

bool contains_cell(const std::vector<Cell>& cells, Cell c) {
  return std::find(cells.begin(), cells.end(), c) != cells.end();
}

mob_chase::Action move_action(Direction d) {
  switch (d) {
    case Direction::North: return mob_chase::Action::MoveNorth;
    case Direction::East: return mob_chase::Action::MoveEast;
    case Direction::South: return mob_chase::Action::MoveSouth;
    case Direction::West: return mob_chase::Action::MoveWest;
  }
  return mob_chase::Action::Stay;
}

class GreedyChaser final : public Controller {
 public:
  Action act(const Observation& obs, Rng& rng) override {
    const auto& o = expect<mob_chase::Observation>(obs, BaselineKind::GreedyChaser);
    memory_.update(o);
    const Cell self = o.agents.at(static_cast<std::size_t>(o.self)).pos.value();
    const auto others = visible_others(o);
    auto passable = [&](Cell c) {
      const char g = memory_.at(c);
      return (g == '.' || g == 'E') && !contains_cell(others, c);
    };
    if (!o.mob) {
      std::vector<Direction> options;
      for (Direction d : kDirections)
        if (passable(neighbor(self, d))) options.push_back(d);
      return options.empty() ? mob_chase::Action::Stay : move_action(rng.pick(options));
    }
    const GridShape shape = memory_.shape();
    const auto dist = bfs_distances(shape, *o.mob, passable);
    const int d = dist[shape.index(self)];
    if (d == kUnreachable || d <= 1) return mob_chase::Action::Stay;
    for (Direction dir : kDirections) {
      const Cell n = neighbor(self, dir);
      if (shape.contains(n) && dist[shape.index(n)] == d - 1) return move_action(dir);
    }
    return mob_chase::Action::Stay;
  }

 private:
  TerrainMemory memory_;
};

class ExitSeeker final : public Controller {
 public:
  Action act(const Observation& obs, Rng& rng) override {
    const auto& o = expect<mob_chase::Observation>(obs, BaselineKind::ExitSeeker);
    memory_.update(o);
    const Cell self = o.agents.at(static_cast<std::size_t>(o.self)).pos.value();
    if (memory_.at(self) == 'E') return mob_chase::Action::UseExit;
    const auto others = visible_others(o);
    auto passable = [&](Cell c) { return memory_.open(c) && !contains_cell(others, c) && o.mob != c; };
    auto step = step_toward(memory_.shape(), self, passable, [&](Cell c) { return memory_.at(c) == 'E'; });
    if (!step) step = step_toward(memory_.shape(), self, passable, [&](Cell c) { return memory_.at(c) == '?'; });
    if (step) return move_action(*step);
    std::vector<Direction> options;
    for (Direction d : kDirections)
      if (passable(neighbor(self, d))) options.push_back(d);
    return options.empty() ? mob_chase::Action::Stay : move_action(rng.pick(options));
  }

 private:
  TerrainMemory memory_;
};

// ---- build battle -------------------------------------------------------

class GreedyBuilder final : public Controller {
 public:
  Action act(const Observation& obs, Rng& /*rng*/) override {
    using build_battle::Action;
    const auto& o = expect<build_battle::Observation>(obs, BaselineKind::GreedyBuilder);
    const auto& bp = o.blueprint;
    const GridShape plane{bp.dims.w + 2, bp.dims.h + 2};
    const GridShape footprint{bp.dims.w, bp.dims.h};

    auto mismatch_z = [&](Cell col) -> std::optional<int> {
      if (!footprint.contains(col)) return std::nullopt;
      for (int z = 0; z < bp.dims.d; ++z) {
        const auto i = bp.index({col.x, col.y, z});
        if (o.region[i] != bp.cells[i]) return z;
      }
      return std::nullopt;
    };
    auto fix = [&](Cell at) -> std::optional<Action> {
      for (Direction d : kDirections) {
        const Cell col = build_battle::target_column(at, d);
        const auto z = mismatch_z(col);
        if (!z) continue;
        const auto i = bp.index({col.x, col.y, *z});
        if (o.region[i] != build_battle::kEmpty) return Action::remove(d, *z);
        return Action::place(o.palette.at(static_cast<std::size_t>(bp.cells[i])), d, *z);
      }
      return std::nullopt;
    };

    if (auto a = fix(o.pos)) return *a;
    std::vector<Cell> mates;
    for (const auto& t : o.teammates) mates.push_back(t.pos);
    auto passable = [&](Cell c) { return !contains_cell(mates, c); };
    auto goal = [&](Cell c) {
      for (Direction d : kDirections)
        if (mismatch_z(build_battle::target_column(c, d))) return true;
      return false;
    };
    if (auto step = step_toward(plane, o.pos, passable, goal)) return Action::move(*step);
    return Action::stay();
  }
};

// ---- treasure hunt ------------------------------------------------------

class HunterScripted final : public Controller {
 public:
  Action act(const Observation& obs, Rng& rng) override {
    using treasure_hunt::Action;
    const auto& o = expect<treasure_hunt::Observation>(obs, BaselineKind::HunterScripted);
    memory_.update(o);
    if (o.treasure) {
      treasure_ = o.treasure;
    } else if (treasure_ && in_window(o, *treasure_)) {
      treasure_.reset();
    }
    if (o.treasure_holder_team >= 0) treasure_.reset();
    for (int y = 0; y < o.height; ++y)
      for (int x = 0; x < o.width; ++x)
        if (memory_.at({x, y}) == 'E') exit_ = Cell{x, y};

    blocked_ticks_ = (last_pos_ && *last_pos_ == o.pos && last_moved_) ? blocked_ticks_ + 1 : 0;
    last_pos_ = o.pos;
    Action a = choose(o, rng);
    last_moved_ = a.kind == Action::Kind::Move;
    return a;
  }

 private:
  static bool in_window(const treasure_hunt::Observation& o, Cell c) {
    const int r = static_cast<int>(o.rows.size()) / 2;
    return std::abs(c.x - o.pos.x) <= r && std::abs(c.y - o.pos.y) <= r;
  }

  std::vector<Direction> open_moves(const treasure_hunt::Observation& o, const std::vector<Cell>& occupied) const {
    std::vector<Direction> out;
    for (Direction d : kDirections) {
      const Cell n = neighbor(o.pos, d);
      const char g = memory_.at(n);
      if ((g == '.' || g == 'E') && !contains_cell(occupied, n)) out.push_back(d);
    }
    return out;
  }

  treasure_hunt::Action wander(const treasure_hunt::Observation& o, const std::vector<Cell>& occupied, Rng& rng) const {
    const auto options = open_moves(o, occupied);
    return options.empty() ? treasure_hunt::Action::stay() : treasure_hunt::Action::move(rng.pick(options));
  }

  treasure_hunt::Action choose(const treasure_hunt::Observation& o, Rng& rng) {
    using treasure_hunt::Action;
    std::vector<Cell> occupied;
    for (const auto& f : o.foes) occupied.push_back(f.pos);
    for (const auto& a : o.others) occupied.push_back(a.pos);
    for (const auto& t : o.teammates)
      if (t.alive) occupied.push_back(t.pos);

    // A foe only strikes an agent that is adjacent once all agents have moved.
    auto exposed = [&](Cell c) {
      for (const auto& f : o.foes)
        if (manhattan(f.pos, c) <= 1) return true;
      return false;
    };
    auto safe_wander = [&]() {
      std::vector<Direction> options;
      for (Direction d : open_moves(o, occupied))
        if (!exposed(neighbor(o.pos, d))) options.push_back(d);
      if (!options.empty()) return Action::move(rng.pick(options));
      return Action::stay();
    };

    if (o.role == treasure_hunt::Role::Fighter) {
      for (Direction d : kDirections)
        for (const auto& f : o.foes)
          if (f.pos == neighbor(o.pos, d)) return Action::attack(d);
    }
    if (blocked_ticks_ >= 2) backoff_ = rng.uniform_int(1, 4);
    if (backoff_ > 0) {
      --backoff_;
      return exposed(o.pos) ? safe_wander() : wander(o, occupied, rng);
    }
    if (o.treasure_holder_team >= 0 && o.treasure_holder_team != o.team) return safe_wander();

    const GridShape shape = memory_.shape();
    auto passable = [&](Cell c) { return memory_.open(c) && !contains_cell(occupied, c) && !exposed(c); };
    auto through_agents = [&](Cell c) { return memory_.open(c) && !exposed(c); };
    auto go = [&](auto&& goal) -> std::optional<Action> {
      if (auto d = step_toward(shape, o.pos, passable, goal)) return Action::move(*d);
      if (auto d = step_toward(shape, o.pos, through_agents, goal)) return Action::move(*d);
      return std::nullopt;
    };
    auto explore = [&]() {
      if (auto a = go([&](Cell c) { return memory_.at(c) == '?'; })) return *a;
      return safe_wander();
    };

    if (o.role == treasure_hunt::Role::Fighter) {
      for (const auto& f : o.foes)
        if (manhattan(f.pos, o.pos) == 2) return Action::stay();
      for (const auto& f : o.foes)
        if (manhattan(f.pos, o.pos) <= 4) {
          const Cell target = f.pos;
          if (auto a = go([&](Cell c) { return manhattan(c, target) == 2; })) return *a;
        }
      std::optional<Cell> collector;
      for (const auto& t : o.teammates)
        if (t.alive && t.role == treasure_hunt::Role::Collector) collector = t.pos;
      if (!collector) return explore();
      if (manhattan(*collector, o.pos) > 2) {
        const Cell target = *collector;
        if (auto a = go([&](Cell c) { return manhattan(c, target) == 1; })) return *a;
      }
      return exposed(o.pos) || rng.bernoulli(0.5) ? safe_wander() : Action::stay();
    }

    if (o.carrying) {
      if (exit_) {
        const Cell target = *exit_;
        if (auto a = go([&](Cell c) { return c == target; })) return *a;
      }
      return explore();
    }
    if (treasure_) {
      if (o.pos == *treasure_ && !exposed(o.pos)) return Action::pickup();
      const Cell target = *treasure_;
      if (auto a = go([&](Cell c) { return c == target; })) return *a;
    }
    return explore();
  }

  TerrainMemory memory_;
  std::optional<Cell> treasure_;
  std::optional<Cell> exit_;
  std::optional<Cell> last_pos_;
  bool last_moved_ = false;
  int blocked_ticks_ = 0;
  int backoff_ = 0;
};

}  // namespace

std::string_view to_string(BaselineKind k) { return kNames.at(static_cast<std::size_t>(k)); }

std::optional<BaselineKind> parse_baseline(std::string_view s) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (s == kNames[i]) return static_cast<BaselineKind>(i);
  return std::nullopt;
}

bool supports(BaselineKind k, GameKind g) {
  switch (k) {
    case BaselineKind::Random: return true;
    case BaselineKind::GreedyChaser:
    case BaselineKind::ExitSeeker: return g == GameKind::MobChase;
    case BaselineKind::GreedyBuilder: return g == GameKind::BuildBattle;
    case BaselineKind::HunterScripted: return g == GameKind::TreasureHunt;
  }
  return false;
}

std::unique_ptr<Controller> make_controller(BaselineKind k) {
  switch (k) {
    case BaselineKind::Random: return std::make_unique<RandomController>();
    case BaselineKind::GreedyChaser: return std::make_unique<GreedyChaser>();
    case BaselineKind::ExitSeeker: return std::make_unique<ExitSeeker>();
    case BaselineKind::GreedyBuilder: return std::make_unique<GreedyBuilder>();
    case BaselineKind::HunterScripted: return std::make_unique<HunterScripted>();
  }
  throw std::invalid_argument("unknown baseline");
}

void BaselineSource::begin_episode(const EpisodeContext& ctx) {
  const GameKind g = ctx.task->game();
  if (!supports(kind_, g))
    throw std::invalid_argument("baseline '" + std::string(to_string(kind_)) + "' cannot play " + std::string(to_string(g)));
  controller_ = make_controller(kind_);
  rng_ = Rng::stream(ctx.stream_seed, salt_);
}

void BaselineSource::begin_tick(const TickContext& ctx) { pending_ = controller_->act(*ctx.observation, rng_); }

ActionReply BaselineSource::poll_action(Clock::time_point) {
  if (!pending_) return ActionReply::substitute(ActionProvenance::Failed);
  ActionReply r = ActionReply::ok(std::move(*pending_));
  pending_.reset();
  return r;
}

}  // namespace marlo::baselines
