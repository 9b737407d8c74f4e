#include "support.hpp"

#include "marlo/core/json_util.hpp"
#include "marlo/task/sampler.hpp"
#include "marlo/task/task_spec.hpp"

#include <doctest.h>

#include <fstream>

using namespace marlo;
using nlohmann::json;

namespace {

DifficultyConfig shipped() { return load_difficulty_config(default_difficulty_config_path()); }

json sampled_field(const TaskSpec& t, const std::string& key) {
  const json params = to_json(t)["params"];
  if (t.game() == GameKind::BuildBattle) {
    const auto& p = std::get<build_battle::Params>(t.params);
    if (key == "width") return p.blueprint_dims.w;
    if (key == "height") return p.blueprint_dims.h;
    if (key == "depth") return p.blueprint_dims.d;
    if (key == "palette_size") return p.palette.size();
  }
  return params.at(key);
}

TaskError::Kind error_kind(const std::string& text) {
  try {
    load_task(text);
  } catch (const TaskError& e) {
    return e.kind();
  }
  FAIL("expected a TaskError");
  return TaskError::Kind::Parse;
}

}  // namespace

TEST_CASE("sampled tasks validate, instantiate, stay in range and round trip") {
  const auto config = shipped();
  for (GameKind g : kAllGames)
    for (Difficulty d : {Difficulty::Small, Difficulty::Medium, Difficulty::Large})
      for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const TaskSpec t = sample_task(g, d, seed, config);
        CHECK(t.game() == g);
        CHECK(t.seed == seed);
        REQUIRE(validate(t).empty());
        CHECK_NOTHROW(make_game(t, 1));
        CHECK(load_task(save_task(t)) == t);
        CHECK(save_task(load_task(save_task(t))) == save_task(t));
        CHECK(t == sample_task(g, d, seed, config));
        for (const auto& [key, range] : config.at(g, d)) {
          const double v = sampled_field(t, key).get<double>();
          CHECK(v >= range.lo - 1e-9);
          CHECK(v <= range.hi + 1e-9);
        }
        CHECK(std::find(config.weather.begin(), config.weather.end(), t.weather()) != config.weather.end());
      }
}

TEST_CASE("weather changes nothing about play") {
  for (GameKind g : kAllGames) {
    TaskSpec a = default_task(g, 3);
    TaskSpec b = a;
    std::visit([](auto& p) { p.weather = "night"; }, b.params);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto ra = marlo::testing::play_random(a, seed).record;
      const auto rb = marlo::testing::play_random(b, seed).record;
      CHECK(ra.ticks == rb.ticks);
      CHECK(ra.result == rb.result);
    }
  }
}

TEST_CASE("task loading errors name the problem") {
  const std::string good = save_task(default_task(GameKind::MobChase, 1));
  CHECK(error_kind("{\n  \"game\": \n") == TaskError::Kind::Parse);
  try {
    load_task("{\n\"game\": \"mob_chase\",\n\"seed\": 1,\n\"params\": {,\n}");
  } catch (const TaskError& e) {
    CHECK(e.line() == 4);
  }
  json j = json::parse(good);
  j["params"]["colour"] = "red";
  CHECK(error_kind(j.dump()) == TaskError::Kind::Schema);
  try {
    load_task(j.dump());
  } catch (const TaskError& e) {
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
  }
  j = json::parse(good);
  j["params"]["width"] = "seven";
  CHECK(error_kind(j.dump()) == TaskError::Kind::Schema);
  j = json::parse(good);
  j.erase("seed");
  CHECK(error_kind(j.dump()) == TaskError::Kind::Schema);
  j = json::parse(good);
  j["game"] = "tetris";
  CHECK(error_kind(j.dump()) == TaskError::Kind::Schema);
  j = json::parse(good);
  j["spec_version"] = 2;
  CHECK(error_kind(j.dump()) == TaskError::Kind::Version);
}

TEST_CASE("invalid parameters fail before tick 0 with every violation listed") {
  TaskSpec t = default_task(GameKind::MobChase);
  auto& p = std::get<mob_chase::Params>(t.params);
  p.agents = 1;
  p.flee_bias = 2;
  const auto v = validate(t);
  CHECK(v.size() == 2);
  try {
    make_game(t, 0);
    FAIL("expected InvalidTask");
  } catch (const InvalidTask& e) {
    CHECK(e.violations() == v);
  }
}

TEST_CASE("agent counts and team layout") {
  CHECK(agent_count(default_task(GameKind::MobChase)) == 2);
  CHECK(agent_count(default_task(GameKind::BuildBattle)) == 4);
  CHECK(agent_count(default_task(GameKind::TreasureHunt)) == 4);
  CHECK(slot_teams(default_task(GameKind::TreasureHunt)) == std::vector<int>{0, 0, 1, 1});
  CHECK(slot_teams(default_task(GameKind::MobChase)) == std::vector<int>{0, 0});
}

TEST_CASE("difficulty config is strict") {
  const std::string path = default_difficulty_config_path();
  std::ifstream in(path);
  const json base = json::parse(in);
  CHECK_NOTHROW(difficulty_config_from_json(base));
  auto expect_field = [](const json& j, const std::string& field) {
    try {
      difficulty_config_from_json(j);
      FAIL("expected FieldError for " << field);
    } catch (const FieldError& e) {
      CHECK(e.field() == field);
    }
  };
  json j = base;
  j["config_version"] = 9;
  expect_field(j, "config_version");
  j = base;
  j["mob_chase"]["small"]["width"] = json::array({9, 5});
  expect_field(j, "mob_chase.small.width");
  j = base;
  j["mob_chase"]["small"].erase("exits");
  expect_field(j, "mob_chase.small.exits");
  j = base;
  j["treasure_hunt"]["huge"] = json::object();
  expect_field(j, "treasure_hunt.huge");
  j = base;
  j["build_battle"]["small"]["speed"] = json::array({1, 2});
  expect_field(j, "build_battle.small.speed");
}

TEST_CASE("impossible ranges are reported rather than looping") {
  auto config = shipped();
  auto& set = config.ranges[static_cast<std::size_t>(GameKind::MobChase)][0];
  set["width"] = {3, 3};
  set["height"] = {3, 3};
  set["agents"] = {4, 4};
  CHECK_THROWS_AS(sample_task(GameKind::MobChase, Difficulty::Small, 1, config), std::runtime_error);
  CHECK(parse_difficulty("medium") == Difficulty::Medium);
  CHECK_FALSE(parse_difficulty("insane"));
}
