#include "marlo/engine/game.hpp"

#include "marlo/core/json_util.hpp"

namespace marlo {
namespace {

using nlohmann::json;
using namespace json_util;

Direction dir_field(const json& j) {
  const auto name = get_string(j, "dir", "action");
  auto d = parse_direction(name);
  if (!d) throw FieldError("action.dir", "expected one of N, E, S, W");
  return *d;
}

json to_wire(const mob_chase::Action& a) { return {{"name", mob_chase::to_string(a)}}; }

json to_wire(const build_battle::Action& a) {
  using K = build_battle::Action::Kind;
  switch (a.kind) {
    case K::Move: return {{"name", "Move"}, {"dir", to_string(a.dir)}};
    case K::Stay: return {{"name", "Stay"}};
    case K::Place: return {{"name", "Place"}, {"block", a.block}, {"dir", to_string(a.dir)}, {"z", a.z}};
    case K::Remove: return {{"name", "Remove"}, {"dir", to_string(a.dir)}, {"z", a.z}};
  }
  return {};
}

json to_wire(const treasure_hunt::Action& a) {
  using K = treasure_hunt::Action::Kind;
  switch (a.kind) {
    case K::Move: return {{"name", "Move"}, {"dir", to_string(a.dir)}};
    case K::Stay: return {{"name", "Stay"}};
    case K::Pickup: return {{"name", "Pickup"}};
    case K::Attack: return {{"name", "Attack"}, {"dir", to_string(a.dir)}};
  }
  return {};
}

template <class Traits>
class Instance final : public GameInstance {
 public:
  using State = typename Traits::State;

  Instance(State state, Rng env, int radius) : state_(std::move(state)), env_(env), radius_(radius) {}

  GameKind kind() const override { return Traits::kKind; }
  int num_agents() const override { return state_.num_agents(); }
  bool is_active(AgentId agent) const override { return Traits::active(state_, agent.index); }
  Observation observe(AgentId agent) const override { return Traits::observe(state_, agent.index, radius_); }

  StepOutcome step(const JointAction& actions) override {
    using A = typename Traits::Action;
    std::vector<std::optional<A>> typed(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (!actions[i]) continue;
      const A* a = std::get_if<A>(&*actions[i]);
      if (!a) throw std::invalid_argument("action does not belong to this game");
      typed[i] = *a;
    }
    return Traits::step(state_, typed, env_);
  }

  int tick() const override { return state_.tick; }
  int tick_limit() const override { return state_.tick_limit; }
  std::uint64_t state_hash() const override { return Traits::hash(state_); }
  json state_json() const override { return Traits::to_json(state_); }
  std::unique_ptr<GameInstance> clone() const override { return std::make_unique<Instance>(*this); }

 private:
  State state_;
  Rng env_;
  int radius_;
};

struct MobChaseTraits {
  static constexpr GameKind kKind = GameKind::MobChase;
  using State = mob_chase::State;
  using Action = mob_chase::Action;
  static bool active(const State& s, int i) { return s.active(i); }
  static Observation observe(const State& s, int i, int r) { return mob_chase::observe(s, i, r); }
  static StepOutcome step(State& s, const std::vector<std::optional<Action>>& a, Rng& rng) {
    return mob_chase::step(s, a, rng);
  }
  static std::uint64_t hash(const State& s) { return mob_chase::state_hash(s); }
  static json to_json(const State& s) { return mob_chase::to_json(s); }
};

struct BuildBattleTraits {
  static constexpr GameKind kKind = GameKind::BuildBattle;
  using State = build_battle::State;
  using Action = build_battle::Action;
  static bool active(const State&, int) { return true; }
  static Observation observe(const State& s, int i, int) { return build_battle::observe(s, i); }
  static StepOutcome step(State& s, const std::vector<std::optional<Action>>& a, Rng& rng) {
    return build_battle::step(s, a, rng);
  }
  static std::uint64_t hash(const State& s) { return build_battle::state_hash(s); }
  static json to_json(const State& s) { return build_battle::to_json(s); }
};

struct TreasureHuntTraits {
  static constexpr GameKind kKind = GameKind::TreasureHunt;
  using State = treasure_hunt::State;
  using Action = treasure_hunt::Action;
  static bool active(const State& s, int i) { return s.alive[static_cast<std::size_t>(i)]; }
  static Observation observe(const State& s, int i, int r) { return treasure_hunt::observe(s, i, r); }
  static StepOutcome step(State& s, const std::vector<std::optional<Action>>& a, Rng& rng) {
    return treasure_hunt::step(s, a, rng);
  }
  static std::uint64_t hash(const State& s) { return treasure_hunt::state_hash(s); }
  static json to_json(const State& s) { return treasure_hunt::to_json(s); }
};

}  // namespace

Action noop_action(GameKind game) {
  switch (game) {
    case GameKind::MobChase: return mob_chase::kNoop;
    case GameKind::BuildBattle: return build_battle::kNoop;
    case GameKind::TreasureHunt: return treasure_hunt::kNoop;
  }
  return mob_chase::kNoop;
}

json action_to_json(const Action& a) {
  return std::visit([](const auto& x) { return to_wire(x); }, a);
}

Action action_from_json(GameKind game, const json& j) {
  if (!j.is_object()) throw FieldError("action", "expected an object");
  const std::string name = get_string(j, "name", "action");
  switch (game) {
    case GameKind::MobChase: {
      reject_unknown(j, {"name"}, "action");
      auto a = mob_chase::parse_action(name);
      if (!a) throw FieldError("action.name", "unknown Mob Chase action '" + name + "'");
      return *a;
    }
    case GameKind::BuildBattle: {
      using build_battle::Action;
      if (name == "Stay") {
        reject_unknown(j, {"name"}, "action");
        return Action::stay();
      }
      if (name == "Move") {
        reject_unknown(j, {"name", "dir"}, "action");
        return Action::move(dir_field(j));
      }
      if (name == "Place") {
        reject_unknown(j, {"name", "block", "dir", "z"}, "action");
        return Action::place(get_string(j, "block", "action"), dir_field(j),
                             static_cast<int>(get_int(j, "z", "action")));
      }
      if (name == "Remove") {
        reject_unknown(j, {"name", "dir", "z"}, "action");
        return Action::remove(dir_field(j), static_cast<int>(get_int(j, "z", "action")));
      }
      throw FieldError("action.name", "unknown Build Battle action '" + name + "'");
    }
    case GameKind::TreasureHunt: {
      using treasure_hunt::Action;
      if (name == "Stay") {
        reject_unknown(j, {"name"}, "action");
        return Action::stay();
      }
      if (name == "Pickup") {
        reject_unknown(j, {"name"}, "action");
        return Action::pickup();
      }
      if (name == "Move") {
        reject_unknown(j, {"name", "dir"}, "action");
        return Action::move(dir_field(j));
      }
      if (name == "Attack") {
        reject_unknown(j, {"name", "dir"}, "action");
        return Action::attack(dir_field(j));
      }
      throw FieldError("action.name", "unknown Treasure Hunt action '" + name + "'");
    }
  }
  throw FieldError("action", "unknown game");
}

json observation_to_json(const Observation& o) {
  return std::visit([](const auto& x) { return to_json(x); }, o);
}

Observation observation_from_json(GameKind game, const json& j) {
  switch (game) {
    case GameKind::MobChase: return mob_chase::observation_from_json(j);
    case GameKind::BuildBattle: return build_battle::observation_from_json(j);
    case GameKind::TreasureHunt: return treasure_hunt::observation_from_json(j);
  }
  throw FieldError("view", "unknown game");
}

std::uint64_t episode_seed(const TaskSpec& task, std::uint64_t match_seed) {
  return derive_seed(task.seed, match_seed);
}

std::unique_ptr<GameInstance> make_game(const TaskSpec& task, std::uint64_t match_seed) {
  if (auto v = validate(task); !v.empty()) throw InvalidTask(std::move(v));
  const std::uint64_t seed = episode_seed(task, match_seed);
  Rng init_rng = Rng::stream(seed, salt::kInit);
  Rng env = Rng::stream(seed, salt::kEnvironment);
  switch (task.game()) {
    case GameKind::MobChase: {
      const auto& p = std::get<mob_chase::Params>(task.params);
      return std::make_unique<Instance<MobChaseTraits>>(mob_chase::init(p, init_rng), env, p.observation_radius);
    }
    case GameKind::BuildBattle: {
      const auto& p = std::get<build_battle::Params>(task.params);
      return std::make_unique<Instance<BuildBattleTraits>>(build_battle::init(p, init_rng), env, 0);
    }
    case GameKind::TreasureHunt: {
      const auto& p = std::get<treasure_hunt::Params>(task.params);
      return std::make_unique<Instance<TreasureHuntTraits>>(treasure_hunt::init(p, init_rng), env,
                                                            p.observation_radius);
    }
  }
  throw std::logic_error("make_game: unknown game");
}

}  // namespace marlo
