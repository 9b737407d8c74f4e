#pragma once

#include "marlo/baselines/baselines.hpp"
#include "marlo/engine/episode.hpp"
#include "marlo/engine/game.hpp"

#include <memory>
#include <vector>

namespace marlo::testing {

inline mob_chase::State meadow(int w, int h, std::vector<Cell> exits, std::vector<Cell> agents, Cell mob) {
  mob_chase::State s;
  s.shape = {w, h};
  s.cells.assign(s.shape.size(), mob_chase::Terrain::Free);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) s.cells[s.shape.index({x, y})] = mob_chase::Terrain::Fence;
  for (Cell e : exits) s.cells[s.shape.index(e)] = mob_chase::Terrain::Exit;
  s.agent_pos = std::move(agents);
  s.status.assign(s.agent_pos.size(), mob_chase::AgentStatus::Active);
  s.mob = mob;
  s.tick_limit = 100;
  return s;
}

/// Owns one baseline source per slot.
struct Lineup {
  std::vector<std::unique_ptr<ActionSource>> owned;
  std::vector<ActionSource*> ptrs;

  void add(std::unique_ptr<ActionSource> s) {
    ptrs.push_back(s.get());
    owned.push_back(std::move(s));
  }
  static Lineup of(std::initializer_list<baselines::BaselineKind> kinds) {
    Lineup l;
    for (auto k : kinds) l.add(std::make_unique<baselines::BaselineSource>(k));
    return l;
  }
  static Lineup uniform(baselines::BaselineKind k, int n) {
    Lineup l;
    for (int i = 0; i < n; ++i) l.add(std::make_unique<baselines::BaselineSource>(k));
    return l;
  }
};

inline EpisodeOutput play(const TaskSpec& task, Lineup& lineup, std::uint64_t seed) {
  return run_episode(task, lineup.ptrs, seed);
}

inline EpisodeOutput play_random(const TaskSpec& task, std::uint64_t seed) {
  auto l = Lineup::uniform(baselines::BaselineKind::Random, agent_count(task));
  return play(task, l, seed);
}

inline std::vector<std::uint64_t> hash_trace(const MatchRecord& r) {
  std::vector<std::uint64_t> out{r.initial_state_hash};
  for (const auto& t : r.ticks) out.push_back(t.state_hash);
  return out;
}

inline std::int64_t sum_cp(const std::vector<Centipoints>& v) {
  std::int64_t s = 0;
  for (auto c : v) s += c.value();
  return s;
}

}  // namespace marlo::testing
