#include "marlo/task/sampler.hpp"

#include "marlo/core/json_util.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#ifndef MARLO_CONFIG_DIR
#define MARLO_CONFIG_DIR "config"
#endif

namespace marlo {
namespace {

using nlohmann::json;

constexpr std::array kDifficultyNames{"small", "medium", "large"};

const std::map<GameKind, std::vector<std::string_view>>& required_keys() {
  static const std::map<GameKind, std::vector<std::string_view>> keys{
      {GameKind::MobChase, {"width", "height", "agents", "exits", "flee_bias", "tick_limit", "observation_radius"}},
      {GameKind::BuildBattle, {"team_size", "width", "height", "depth", "palette_size", "fill", "tick_limit"}},
      {GameKind::TreasureHunt,
       {"width", "height", "rooms", "room_min", "room_max", "collectors_per_team", "fighters_per_team", "foes",
        "foe_hp", "agent_hp", "sight_radius", "observation_radius", "tick_limit"}},
  };
  return keys;
}

std::vector<std::string> string_list(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw FieldError(field, "expected a non-empty list of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw FieldError(field, "expected a non-empty list of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

class Draw {
 public:
  Draw(const DifficultyConfig::RangeSet& r, Rng& rng) : ranges_(r), rng_(rng) {}
  int integer(std::string_view key) { return integer_at_least(key, std::numeric_limits<int>::min()); }
  int integer_at_least(std::string_view key, int floor) {
    const Range& r = ranges_.find(key)->second;
    const int lo = std::max(static_cast<int>(std::ceil(r.lo)), floor);
    const int hi = std::max(static_cast<int>(std::floor(r.hi)), lo);
    return rng_.uniform_int(lo, hi);
  }
  double real(std::string_view key) {
    const Range& r = ranges_.find(key)->second;
    const double v = r.lo + (r.hi - r.lo) * rng_.unit();
    return std::round(v * 100.0) / 100.0;
  }

 private:
  const DifficultyConfig::RangeSet& ranges_;
  Rng& rng_;
};

TaskSpec draw(GameKind game, const DifficultyConfig& config, Difficulty difficulty, Rng& rng) {
  Draw d(config.at(game, difficulty), rng);
  TaskSpec t;
  switch (game) {
    case GameKind::MobChase: {
      mob_chase::Params p;
      p.width = d.integer("width");
      p.height = d.integer("height");
      p.agents = d.integer("agents");
      p.exits = d.integer("exits");
      p.flee_bias = d.real("flee_bias");
      p.tick_limit = d.integer("tick_limit");
      p.observation_radius = d.integer("observation_radius");
      p.weather = rng.pick(config.weather);
      t.params = p;
      break;
    }
    case GameKind::BuildBattle: {
      build_battle::Params p;
      p.team_size = d.integer("team_size");
      p.blueprint_dims = {d.integer("width"), d.integer("height"), d.integer("depth")};
      const int palette = std::min<int>(d.integer("palette_size"), static_cast<int>(config.blocks.size()));
      std::vector<std::string> pool = config.blocks;
      rng.shuffle(pool);
      p.palette.assign(pool.begin(), pool.begin() + palette);
      p.fill = d.real("fill");
      p.tick_limit = d.integer("tick_limit");
      p.weather = rng.pick(config.weather);
      t.params = p;
      break;
    }
    case GameKind::TreasureHunt: {
      treasure_hunt::Params p;
      p.width = d.integer("width");
      p.height = d.integer("height");
      p.rooms = d.integer("rooms");
      p.room_min = d.integer("room_min");
      p.room_max = d.integer_at_least("room_max", p.room_min);
      p.collectors_per_team = d.integer("collectors_per_team");
      p.fighters_per_team = d.integer("fighters_per_team");
      p.foes = d.integer("foes");
      p.foe_hp = d.integer("foe_hp");
      p.agent_hp = d.integer("agent_hp");
      p.sight_radius = d.integer("sight_radius");
      p.observation_radius = d.integer("observation_radius");
      p.tick_limit = d.integer("tick_limit");
      p.weather = rng.pick(config.weather);
      t.params = p;
      break;
    }
  }
  return t;
}

}  // namespace

std::string_view to_string(Difficulty d) { return kDifficultyNames.at(static_cast<std::size_t>(d)); }

std::optional<Difficulty> parse_difficulty(std::string_view s) {
  for (std::size_t i = 0; i < kDifficultyNames.size(); ++i)
    if (s == kDifficultyNames[i]) return static_cast<Difficulty>(i);
  return std::nullopt;
}

DifficultyConfig difficulty_config_from_json(const json& j) {
  using namespace json_util;
  if (!j.is_object()) throw FieldError("config", "expected an object");
  DifficultyConfig c;
  c.config_version = static_cast<int>(get_int(j, "config_version"));
  if (c.config_version != kDifficultyConfigVersion)
    throw FieldError("config_version", "unsupported version " + std::to_string(c.config_version));
  reject_unknown(j, {"config_version", "weather", "mob_chase", "build_battle", "treasure_hunt"});
  c.weather = string_list(require(j, "weather"), "weather");

  for (const auto& [game, keys] : required_keys()) {
    const std::string gname(to_string(game));
    const json& g = require(j, gname);
    if (!g.is_object()) throw FieldError(gname, "expected an object");
    for (const auto& [key, value] : g.items()) {
      if (game == GameKind::BuildBattle && key == "blocks") continue;
      if (!parse_difficulty(key)) throw FieldError(gname + "." + key, "unknown field");
    }
    if (game == GameKind::BuildBattle) c.blocks = string_list(require(g, "blocks", gname), gname + ".blocks");
    for (std::size_t di = 0; di < kDifficultyNames.size(); ++di) {
      const std::string dname = gname + "." + kDifficultyNames[di];
      const json& level = require(g, kDifficultyNames[di], gname);
      if (!level.is_object()) throw FieldError(dname, "expected an object");
      auto& set = c.ranges[static_cast<std::size_t>(game)][di];
      for (const auto& [key, value] : level.items()) {
        const std::string field = dname + "." + key;
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw FieldError(field, "unknown field");
        if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
          throw FieldError(field, "expected [lo, hi]");
        Range r{value[0].get<double>(), value[1].get<double>()};
        if (r.lo > r.hi) throw FieldError(field, "lo exceeds hi");
        set.emplace(key, r);
      }
      for (auto key : keys)
        if (!set.contains(key)) throw FieldError(dname + "." + std::string(key), "missing field");
    }
  }
  return c;
}

DifficultyConfig load_difficulty_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open difficulty config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw std::runtime_error("difficulty config '" + path + "': " + e.what());
  }
  return difficulty_config_from_json(j);
}

std::string default_difficulty_config_path() { return std::string(MARLO_CONFIG_DIR) + "/difficulty.json"; }

TaskSpec sample_task(GameKind game, Difficulty difficulty, std::uint64_t seed, const DifficultyConfig& config) {
  Rng rng = Rng::stream(seed, (static_cast<std::uint64_t>(game) << 8) | static_cast<std::uint64_t>(difficulty));
  constexpr int kAttempts = 256;
  for (int i = 0; i < kAttempts; ++i) {
    TaskSpec t = draw(game, config, difficulty, rng);
    t.seed = seed;
    if (validate(t).empty()) return t;
  }
  throw std::runtime_error("difficulty config yields no valid " + std::string(to_string(game)) + " task at " +
                           std::string(to_string(difficulty)));
}

}  // namespace marlo
