#include "support.hpp"

#include "marlo/games/build_battle.hpp"

#include <doctest.h>

namespace marlo::build_battle {

namespace {

using Joint = std::vector<std::optional<Action>>;

Params literal_params() {
  Params p;
  p.team_size = 1;
  p.blueprint_dims = {3, 3, 2};
  p.palette = {"stone", "dirt"};
  p.blueprint = {"stone", "dirt", "stone", "empty", "stone", "empty", "dirt", "stone", "dirt",
                 "empty", "stone", "empty", "empty", "empty", "empty", "empty", "empty", "empty"};
  p.tick_limit = 100;
  return p;
}

// From scratch: +1 per placed block that matches, -1 per placed block that does not.
int oracle_phi(const State& s, int team) {
  int phi = 0;
  const auto& r = s.regions[static_cast<std::size_t>(team)];
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == -1) continue;
    phi += r[i] == s.blueprint.cells[i] ? 1 : -1;
  }
  return phi;
}

Action random_action(Rng& rng, const State& s) {
  switch (rng.uniform(4)) {
    case 0: return Action::move(kDirections[rng.uniform(4)]);
    case 1: return Action::stay();
    case 2: {
      const int z = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(s.blueprint.dims.d)));
      return Action::place(rng.pick(s.palette), kDirections[rng.uniform(4)], z);
    }
    default: {
      const int z = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(s.blueprint.dims.d)));
      return Action::remove(kDirections[rng.uniform(4)], z);
    }
  }
}

}  // namespace

TEST_CASE("the four block event classes pay +0.2, -0.2, -0.2, +0.2") {
  State s = init(literal_params(), 1);
  s.agent_pos = {{0, 1}, {0, 1}};  // both west of footprint column (0,0), which wants stone
  Rng rng(0);

  auto correct = step(s, Joint{Action::place("stone", Direction::East), Action::place("dirt", Direction::East)}, rng);
  CHECK(correct.rewards[0] == Centipoints{20});
  CHECK(correct.rewards[1] == Centipoints{-20});

  auto removal = step(s, Joint{Action::remove(Direction::East), Action::remove(Direction::East)}, rng);
  CHECK(removal.rewards[0] == Centipoints{-20});  // removed a correct block
  CHECK(removal.rewards[1] == Centipoints{20});   // removed a wrong block
  CHECK(s.team_score == std::array<Centipoints, 2>{Centipoints{0}, Centipoints{0}});

  // Placing into a column that must stay empty is a wrong placement.
  auto into_empty = step(s, Joint{Action::place("stone", Direction::East, 1), Action::stay()}, rng);
  CHECK(into_empty.rewards[0] == Centipoints{-20});
  // No-ops: occupied cell, empty removal, out-of-footprint target, unknown block.
  s.agent_pos[1] = {0, 0};
  auto noop = step(s, Joint{Action::place("dirt", Direction::East, 1), Action::remove(Direction::North)}, rng);
  CHECK(noop.rewards == std::vector<Centipoints>{Centipoints{0}, Centipoints{0}});
  auto unknown = step(s, Joint{Action::place("gold", Direction::East), Action::stay()}, rng);
  CHECK(unknown.events.empty());
}

TEST_CASE("classify_event rejects non-events") {
  Blueprint bp{{1, 1, 1}, {0}};
  CHECK(classify_event(bp, {0, 0, 0}, kEmpty, 0) == Centipoints{20});
  CHECK(classify_event(bp, {0, 0, 0}, kEmpty, 1) == Centipoints{-20});
  CHECK(classify_event(bp, {0, 0, 0}, 0, kEmpty) == Centipoints{-20});
  CHECK(classify_event(bp, {0, 0, 0}, 1, kEmpty) == Centipoints{20});
  CHECK_THROWS_AS(classify_event(bp, {0, 0, 0}, kEmpty, kEmpty), std::invalid_argument);
  CHECK_THROWS_AS(classify_event(bp, {0, 0, 0}, 0, 1), std::invalid_argument);
}

TEST_CASE("team block reward equals 0.2 times the potential change") {
  Params p;
  p.team_size = 2;
  p.blueprint_dims = {3, 2, 2};
  p.palette = {"stone", "dirt", "wood"};
  p.tick_limit = 200;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    State s = init(p, seed);
    Rng rng(seed + 1000);
    std::array<std::int64_t, kTeams> earned{};
    for (int t = 0; t < p.tick_limit; ++t) {
      Joint joint;
      for (int i = 0; i < s.num_agents(); ++i) joint.push_back(random_action(rng, s));
      const auto out = step(s, joint, rng);
      for (int i = 0; i < s.num_agents(); ++i) earned[static_cast<std::size_t>(s.team_of[static_cast<std::size_t>(i)])] += out.rewards[static_cast<std::size_t>(i)].value();
      for (int team = 0; team < kTeams; ++team) {
        REQUIRE(earned[static_cast<std::size_t>(team)] == 20 * oracle_phi(s, team));
        REQUIRE(potential(s.regions[static_cast<std::size_t>(team)], s.blueprint) == oracle_phi(s, team));
        REQUIRE(s.team_score[static_cast<std::size_t>(team)].value() == earned[static_cast<std::size_t>(team)]);
      }
      if (out.done) break;
    }
  }
}

TEST_CASE("completing the blueprint ends the episode and regions stay private") {
  Params p = literal_params();
  p.blueprint_dims = {1, 1, 1};
  p.blueprint = {"dirt"};
  State s = init(p, 3);
  s.agent_pos = {{0, 1}, {2, 1}};
  Rng rng(0);
  auto out = step(s, Joint{Action::place("stone", Direction::East), Action::place("dirt", Direction::West)}, rng);
  CHECK(out.done);
  CHECK(out.termination == Termination::StructureComplete);
  CHECK(s.regions[0] == Region{0});
  CHECK(s.regions[1] == Region{1});
  CHECK(match_winner({Centipoints{-20}, Centipoints{20}}, s.team_of) == 1);
  CHECK_FALSE(match_winner({Centipoints{20}, Centipoints{20}}, s.team_of).has_value());
}

TEST_CASE("agents stay on the ground plane and teammates block each other") {
  Params p = literal_params();
  p.team_size = 2;
  State s = init(p, 4);
  const GridShape plane = s.plane();
  CHECK(plane.width == 5);
  s.agent_pos = {{0, 0}, {1, 0}, {0, 0}, {1, 0}};
  Rng rng(0);
  step(s, Joint{Action::move(Direction::North), Action::move(Direction::West), Action::move(Direction::East),
                Action::stay()},
       rng);
  CHECK(s.agent_pos[0] == Cell{0, 0});  // off the plane
  CHECK(s.agent_pos[1] == Cell{1, 0});  // teammate still there
  CHECK(s.agent_pos[2] == Cell{0, 0});  // blocked by its own teammate, not by the other team
}

TEST_CASE("validation, init determinism and json round trips") {
  Params p;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const State s = init(p, seed);
    CHECK(s == init(p, seed));
    CHECK(s.blueprint.required_blocks() > 0);
    CHECK(state_from_json(to_json(s)) == s);
    const Observation o = observe(s, 1);
    CHECK(observation_from_json(to_json(o)) == o);
  }
  Params bad = literal_params();
  bad.blueprint = {"stone"};
  CHECK_FALSE(validate(bad).empty());
  bad = literal_params();
  bad.blueprint.assign(18, "empty");
  CHECK_FALSE(validate(bad).empty());
  bad = literal_params();
  bad.palette = {"stone", "stone"};
  CHECK_FALSE(validate(bad).empty());
  bad = literal_params();
  bad.fill = 0;
  CHECK_FALSE(validate(bad).empty());
}

}  // namespace marlo::build_battle
