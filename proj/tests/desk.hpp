#pragma once

#include "marlo/tournament/tournament.hpp"

namespace marlo::testing {

/// Eight entries: every on/off combination of a scripted controller per game, random otherwise.
/// Entry "e7" plays scripted everywhere and dominates the rest.
inline tournament::BracketConfig desk_bracket(std::uint64_t base_seed) {
  using B = baselines::BaselineKind;
  tournament::BracketConfig c;
  for (int mask = 0; mask < 8; ++mask) {
    tournament::Entry e;
    e.id = "e" + std::to_string(mask);
    e.controllers[GameKind::MobChase] = (mask & 1) ? B::ExitSeeker : B::Random;
    e.controllers[GameKind::BuildBattle] = (mask & 2) ? B::GreedyBuilder : B::Random;
    e.controllers[GameKind::TreasureHunt] = (mask & 4) ? B::HunterScripted : B::Random;
    c.entries.push_back(e);
  }
  TaskSpec mc = default_task(GameKind::MobChase, 1);
  auto& mp = std::get<mob_chase::Params>(mc.params);
  mp.width = mp.height = 11;
  mp.exits = 1;
  mp.tick_limit = 40;
  TaskSpec bb = default_task(GameKind::BuildBattle, 2);
  std::get<build_battle::Params>(bb.params).blueprint = {"stone", "dirt", "stone", "empty", "stone",
                                                         "empty", "dirt", "stone", "dirt"};
  TaskSpec th = default_task(GameKind::TreasureHunt, 3);
  std::get<treasure_hunt::Params>(th.params).foes = 0;
  c.tasks = {{"chase", mc}, {"build", bb}, {"hunt", th}};
  c.stages = {{2, 4, 2, 2}, {1, 4, 2, 2}};
  c.base_seed = base_seed;
  c.workers = 1;
  return c;
}

inline const std::string kDeskChampion = "e7";

}  // namespace marlo::testing
