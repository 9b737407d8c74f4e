// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "desk.hpp"
#include "support.hpp"

#include "marlo/games/build_battle.hpp"
#include "marlo/games/mob_chase.hpp"
#include "marlo/games/treasure_hunt.hpp"
#include "marlo/protocol/client.hpp"
#include "marlo/protocol/server.hpp"
#include "marlo/task/sampler.hpp"

#include <chrono>
#include <deque>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

using namespace marlo;
using namespace std::chrono_literals;
using baselines::BaselineKind;
using marlo::testing::Lineup;

namespace {

using Seconds = std::chrono::duration<double>;

/// Collects failed expectations; a criterion passes when none are recorded.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 10) failures.push_back(what);
    if (!ok && failures.size() == 10) failures.push_back("...");
  }
};

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failed_criteria = 0;

void report(int id, const std::string& name, double limit_s, const std::function<Outcome(Check&)>& body) {
  Check check;
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    out = body(check);
  } catch (const std::exception& e) {
    check.failures.push_back(std::string("exception: ") + e.what());
  }
  const double elapsed = Seconds(std::chrono::steady_clock::now() - t0).count();
  const bool pass = out.ok && check.failures.empty() && elapsed < limit_s;
  if (!pass) ++failed_criteria;
  std::ostringstream line;
  line << (pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << "  (" << std::fixed << std::setprecision(2)
       << elapsed << " s, limit " << limit_s << " s)";
  if (!out.detail.empty()) line << "  " << out.detail;
  std::cout << line.str() << std::endl;
  for (const auto& f : check.failures) std::cout << "      " << f << std::endl;
}

std::string cps(const std::vector<Centipoints>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i].value());
  return s + "]";
}

std::vector<Centipoints> cp(std::initializer_list<int> v) {
  std::vector<Centipoints> out;
  for (int x : v) out.emplace_back(x);
  return out;
}

// ---------------------------------------------------------------- criterion 1

Outcome reward_constants(Check& c) {
  {
    using Action = mob_chase::Action;
    using State = mob_chase::State;
    using Joint = std::vector<std::optional<Action>>;
    Rng rng(1);
    State s = testing::meadow(5, 5, {{4, 3}}, {{2, 2}, {1, 3}}, {1, 1});
    auto cap = step(s, Joint{Action::MoveNorth, Action::MoveNorth}, rng);
    c.expect(cap.termination == Termination::Capture && cap.rewards == cp({100, 100}),
             "mob chase capture pays " + cps(cap.rewards));

    State three = testing::meadow(5, 5, {{0, 2}}, {{0, 2}, {2, 1}, {3, 3}}, {1, 1});
    auto ex = step(three, Joint{Action::UseExit, Action::Stay, Action::Stay}, rng);
    c.expect(ex.rewards == cp({20, 0, 0}), "mob chase exit pays " + cps(ex.rewards));
    three.mob = {1, 1};
    three.agent_pos[2] = {1, 2};
    auto late = step(three, Joint{std::nullopt, Action::Stay, Action::Stay}, rng);
    c.expect(late.termination == Termination::Capture && late.rewards == cp({0, 100, 100}),
             "mob chase capture after an exit pays " + cps(late.rewards));
  }
  {
    using Action = build_battle::Action;
    using State = build_battle::State; using Params = build_battle::Params;
    using Joint = std::vector<std::optional<Action>>;
    Params p;
    p.team_size = 1;
    p.blueprint_dims = {3, 3, 2};
    p.palette = {"stone", "dirt"};
    p.blueprint = {"stone", "dirt", "stone", "empty", "stone", "empty", "dirt", "stone", "dirt",
                   "empty", "stone", "empty", "empty", "empty", "empty", "empty", "empty", "empty"};
    State s = init(p, 1);
    s.agent_pos = {{0, 1}, {0, 1}};
    Rng rng(0);
    auto place = step(s, Joint{Action::place("stone", Direction::East), Action::place("dirt", Direction::East)}, rng);
    c.expect(place.rewards == cp({20, -20}), "build battle correct/wrong placement pays " + cps(place.rewards));
    auto remove = step(s, Joint{Action::remove(Direction::East), Action::remove(Direction::East)}, rng);
    c.expect(remove.rewards == cp({-20, 20}), "build battle correct/wrong removal pays " + cps(remove.rewards));
  }
  {
    using Action = treasure_hunt::Action;
    using State = treasure_hunt::State; using Params = treasure_hunt::Params; using Tile = treasure_hunt::Tile;
    using Joint = std::vector<std::optional<Action>>;
    Params p;
    p.foes = 0;
    auto stay_all = [](const State& s) { return Joint(static_cast<std::size_t>(s.num_agents()), Action::stay()); };
    int carriers = 0;
    for (int carrier = 0; carrier < 4; ++carrier) {
      State s = init(p, 10 + static_cast<std::uint64_t>(carrier));
      if (s.role[static_cast<std::size_t>(carrier)] != treasure_hunt::Role::Collector) continue;
      ++carriers;
      const int team = s.team_of[static_cast<std::size_t>(carrier)];
      std::vector<Centipoints> pick_want, exit_want;
      for (int t : s.team_of) {
        pick_want.emplace_back(t == team ? 25 : -25);
        exit_want.emplace_back(t == team ? 50 : -50);
      }
      s.agent_pos[static_cast<std::size_t>(carrier)] = s.map.treasure;
      Joint j = stay_all(s);
      j[static_cast<std::size_t>(carrier)] = Action::pickup();
      Rng rng(0);
      auto pick = step(s, j, rng);
      c.expect(pick.rewards == pick_want, "treasure pickup pays " + cps(pick.rewards));
      s.agent_pos[static_cast<std::size_t>(carrier)] = s.map.exit;
      auto out = step(s, stay_all(s), rng);
      c.expect(out.termination == Termination::TreasureExit && out.rewards == exit_want,
               "treasure exit pays " + cps(out.rewards));
    }
    c.expect(carriers == 2, "expected one collector per team");
    for (int victim = 0; victim < 4; ++victim) {
      State s = init(p, 20);
      const auto v = static_cast<std::size_t>(victim);
      s.hp[v] = 1;
      // A lone floor cell far from the others with one free neighbour for the foe.
      std::optional<Cell> foe_cell;
      for (std::size_t i = 0; i < s.map.tiles.size() && !foe_cell; ++i) {
        const Cell here = s.map.shape.cell(i);
        if (s.map.tiles[i] != Tile::Floor || here == s.map.treasure) continue;
        bool far = true;
        for (std::size_t k = 0; k < s.agent_pos.size(); ++k) far = far && (k == v || manhattan(s.agent_pos[k], here) > 3);
        if (!far) continue;
        for (Direction d : kDirections) {
          const Cell n = neighbor(here, d);
          if (s.map.walkable(n) && n != s.map.exit) {
            foe_cell = n;
            s.agent_pos[v] = here;
            break;
          }
        }
      }
      c.expect(foe_cell.has_value(), "no isolated cell for the death scenario");
      if (!foe_cell) continue;
      s.foes.push_back({0, *foe_cell, 1});
      Rng rng(0);
      auto out = step(s, stay_all(s), rng);
      std::vector<Centipoints> want;
      for (int t : s.team_of) want.emplace_back(t == s.team_of[v] ? -100 : 0);
      c.expect(out.termination == Termination::Death && out.rewards == want, "death pays " + cps(out.rewards));
    }
  }
  return {true, ""};
}

// ---------------------------------------------------------------- criterion 2

// The mob can step onto any neighbouring cell that is not fence and not occupied by an active agent.
bool mob_has_no_legal_move(const mob_chase::State& s) {
  const int dx[] = {0, 1, 0, -1};
  const int dy[] = {-1, 0, 1, 0};
  for (int k = 0; k < 4; ++k) {
    const int x = s.mob.x + dx[k], y = s.mob.y + dy[k];
    if (x < 0 || y < 0 || x >= s.shape.width || y >= s.shape.height) continue;
    if (s.cells[static_cast<std::size_t>(y * s.shape.width + x)] == mob_chase::Terrain::Fence) continue;
    bool held = false;
    for (std::size_t i = 0; i < s.agent_pos.size(); ++i)
      held = held || (s.status[i] == mob_chase::AgentStatus::Active && s.agent_pos[i] == Cell{x, y});
    if (!held) return false;
  }
  return true;
}

Outcome capture_oracle(Check& c) {
  const int w = 6, h = 6;  // fence ring around a 4x4 meadow
  std::vector<Cell> inner;
  for (int y = 1; y < h - 1; ++y)
    for (int x = 1; x < w - 1; ++x) inner.push_back({x, y});
  std::vector<std::vector<Cell>> exit_layouts{{}};
  for (int i = 1; i < w - 1; ++i)
    for (Cell gap : {Cell{i, 0}, Cell{i, h - 1}, Cell{0, i}, Cell{w - 1, i}}) exit_layouts.push_back({gap});
  long configs = 0, captured = 0;
  for (const auto& exits : exit_layouts)
    for (Cell mob : inner) {
      std::vector<Cell> spots;
      for (Cell x : inner)
        if (x != mob) spots.push_back(x);
      spots.insert(spots.end(), exits.begin(), exits.end());
      const int n = static_cast<int>(spots.size());
      // Every set of 0..3 distinct agent cells: index n stands for "no agent".
      for (int a = 0; a <= n; ++a)
        for (int b = a == n ? n : a + 1; b <= n; ++b)
          for (int d = b == n ? n : b + 1; d <= n; ++d) {
            std::vector<Cell> agents;
            for (int k : {a, b, d})
              if (k < n) agents.push_back(spots[static_cast<std::size_t>(k)]);
            const auto s = testing::meadow(w, h, exits, agents, mob);
            const bool want = mob_has_no_legal_move(s);
            c.expect(mob_chase::is_captured(s, mob_chase::CaptureRule::Surround) == want,
                     "mismatch: mob (" + std::to_string(mob.x) + "," + std::to_string(mob.y) + ") with " +
                         std::to_string(agents.size()) + " agents");
            captured += want;
            ++configs;
          }
    }
  return {captured > 0, std::to_string(configs) + " configurations, " + std::to_string(captured) + " captured"};
}

// ---------------------------------------------------------------- criterion 3

int phi_from_scratch(const build_battle::State& s, int team) {
  int phi = 0;
  const auto& region = s.regions[static_cast<std::size_t>(team)];
  for (std::size_t i = 0; i < region.size(); ++i)
    if (region[i] != build_battle::kEmpty) phi += region[i] == s.blueprint.cells[i] ? 1 : -1;
  return phi;
}

build_battle::Action random_build_action(Rng& rng, const build_battle::State& s) {
  using build_battle::Action;
  const int z = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(s.blueprint.dims.d)));
  switch (rng.uniform(4)) {
    case 0: return Action::move(kDirections[rng.uniform(4)]);
    case 1: return Action::stay();
    case 2: return Action::place(rng.pick(s.palette), kDirections[rng.uniform(4)], z);
    default: return Action::remove(kDirections[rng.uniform(4)], z);
  }
}

Outcome potential_identity(Check& c) {
  const auto config = load_difficulty_config(default_difficulty_config_path());
  const Difficulty levels[] = {Difficulty::Small, Difficulty::Medium, Difficulty::Large};
  long events = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    TaskSpec task = sample_task(GameKind::BuildBattle, levels[k % 3], k, config);
    auto p = std::get<build_battle::Params>(task.params);
    p.tick_limit = 200;
    build_battle::State s = build_battle::init(p, k);
    const int phi0[] = {phi_from_scratch(s, 0), phi_from_scratch(s, 1)};
    Rng rng(derive_seed(k, 77));
    std::int64_t earned[2] = {0, 0};
    for (int t = 0; t < 200; ++t) {
      std::vector<std::optional<build_battle::Action>> joint;
      for (int i = 0; i < s.num_agents(); ++i) joint.push_back(random_build_action(rng, s));
      const auto out = build_battle::step(s, joint, rng);
      for (int i = 0; i < s.num_agents(); ++i)
        earned[s.team_of[static_cast<std::size_t>(i)]] += out.rewards[static_cast<std::size_t>(i)].value();
      events += static_cast<long>(out.events.size());
      if (out.done) break;
    }
    for (int team = 0; team < 2; ++team)
      c.expect(earned[team] == 20 * (phi_from_scratch(s, team) - phi0[team]),
               "trajectory " + std::to_string(k) + " team " + std::to_string(team) + ": earned " +
                   std::to_string(earned[team]) + " centipoints");
  }
  return {events > 0, "1000 trajectories, " + std::to_string(events) + " block events"};
}

// ---------------------------------------------------------------- criterion 4

Outcome replay_determinism(Check& c) {
  const auto config = load_difficulty_config(default_difficulty_config_path());
  const GameKind games[] = {GameKind::MobChase, GameKind::BuildBattle, GameKind::TreasureHunt};
  const Difficulty levels[] = {Difficulty::Small, Difficulty::Medium, Difficulty::Large};
  long ticks = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const TaskSpec task = sample_task(games[k % 3], levels[(k / 3) % 3], 1000 + k, config);
    const std::uint64_t seed = derive_seed(k, 4);
    const auto first = testing::play_random(task, seed);
    const auto second = testing::play_random(task, seed);
    const auto label = "match " + std::to_string(k);
    c.expect(verify_replay(first.record), label + " fails verify_replay");
    c.expect(verify_replay(read_replay(write_replay(first.record))), label + " fails verify_replay after a round trip");
    c.expect(testing::hash_trace(first.record) == testing::hash_trace(second.record), label + " hash trace differs");
    c.expect(write_replay(first.record) == write_replay(second.record), label + " replay text differs");
    ticks += first.result.ticks_elapsed;
  }
  return {true, "100 matches, " + std::to_string(ticks) + " ticks"};
}

// ---------------------------------------------------------------- criterion 5

std::vector<Centipoints> expected_event_vector(EventKind kind, int team, const std::vector<int>& team_of) {
  std::vector<Centipoints> out;
  for (int t : team_of) {
    switch (kind) {
      case EventKind::Pickup: out.emplace_back(t == team ? 25 : -25); break;
      case EventKind::TreasureExit: out.emplace_back(t == team ? 50 : -50); break;
      case EventKind::Death: out.emplace_back(t == team ? -100 : 0); break;
      default: out.emplace_back(0);
    }
  }
  return out;
}

int flood_fill_components(const treasure_hunt::DungeonMap& m) {
  std::vector<bool> seen(m.tiles.size(), false);
  int components = 0;
  for (std::size_t start = 0; start < m.tiles.size(); ++start) {
    if (m.tiles[start] == treasure_hunt::Tile::Wall || seen[start]) continue;
    ++components;
    std::deque<std::size_t> q{start};
    seen[start] = true;
    while (!q.empty()) {
      const auto i = q.front();
      q.pop_front();
      const int x = static_cast<int>(i) % m.shape.width, y = static_cast<int>(i) / m.shape.width;
      for (auto [nx, ny] : {std::pair{x, y - 1}, {x + 1, y}, {x, y + 1}, {x - 1, y}}) {
        if (nx < 0 || ny < 0 || nx >= m.shape.width || ny >= m.shape.height) continue;
        const auto j = static_cast<std::size_t>(ny * m.shape.width + nx);
        if (m.tiles[j] == treasure_hunt::Tile::Wall || seen[j]) continue;
        seen[j] = true;
        q.push_back(j);
      }
    }
  }
  return components;
}

Outcome treasure_zero_sum(Check& c) {
  const auto config = load_difficulty_config(default_difficulty_config_path());
  const Difficulty levels[] = {Difficulty::Small, Difficulty::Medium, Difficulty::Large};
  long pickups = 0, exits = 0, deaths = 0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    const TaskSpec task = sample_task(GameKind::TreasureHunt, levels[k % 3], 2000 + k, config);
    auto game = make_game(task, k);
    const auto teams = slot_teams(task);
    const int n = game->num_agents();
    // Scripted hunters on one side make pickups and exits common; the other side plays at random.
    std::vector<std::unique_ptr<baselines::Controller>> ctl;
    for (int i = 0; i < n; ++i)
      ctl.push_back(baselines::make_controller(teams[static_cast<std::size_t>(i)] == static_cast<int>(k % 2)
                                                   ? BaselineKind::HunterScripted
                                                   : BaselineKind::Random));
    Rng rng(derive_seed(k, 5));
    std::int64_t pickup_sum = 0, exit_sum = 0;
    for (;;) {
      JointAction joint(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        if (game->is_active(AgentId{i}))
          joint[static_cast<std::size_t>(i)] = ctl[static_cast<std::size_t>(i)]->act(game->observe(AgentId{i}), rng);
      const auto out = game->step(joint);
      std::vector<Centipoints> accounted(static_cast<std::size_t>(n));
      for (const auto& e : out.events) {
        const auto v = expected_event_vector(e.kind, e.team, teams);
        for (int i = 0; i < n; ++i) accounted[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)];
        if (e.kind == EventKind::Pickup) {
          pickup_sum += testing::sum_cp(v);
          ++pickups;
        } else if (e.kind == EventKind::TreasureExit) {
          exit_sum += testing::sum_cp(v);
          ++exits;
        } else if (e.kind == EventKind::Death) {
          ++deaths;
        }
      }
      c.expect(out.rewards == accounted, "episode " + std::to_string(k) + " tick rewards " + cps(out.rewards) +
                                             " differ from its events " + cps(accounted));
      if (out.done) break;
    }
    c.expect(pickup_sum == 0 && exit_sum == 0, "episode " + std::to_string(k) + " pickup/exit rewards do not cancel");
  }
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const TaskSpec task = sample_task(GameKind::TreasureHunt, levels[k % 3], 5000 + k, config);
    const auto map = treasure_hunt::generate_dungeon(std::get<treasure_hunt::Params>(task.params), k);
    c.expect(flood_fill_components(map) == 1 && map.at(map.exit) == treasure_hunt::Tile::Exit &&
                 map.at(map.treasure) != treasure_hunt::Tile::Wall,
             "dungeon " + std::to_string(k) + " is not one connected region");
  }
  return {pickups > 0 && exits > 0, "500 episodes: " + std::to_string(pickups) + " pickups, " + std::to_string(exits) +
                                        " exits, " + std::to_string(deaths) + " deaths; 1000 dungeons"};
}

// ---------------------------------------------------------------- criterion 6

// Mean per-episode margin of `strong` over `weak` on one task, both side assignments, same seeds.
double margin(const TaskSpec& task, BaselineKind strong, BaselineKind weak, int seeds, int& wins, int& losses) {
  const auto teams = slot_teams(task);
  const bool by_slot = task.game() == GameKind::MobChase;
  std::int64_t total = 0;
  for (int seed = 0; seed < seeds; ++seed)
    for (int side = 0; side < 2; ++side) {
      Lineup l;
      std::vector<bool> strong_slot;
      for (std::size_t i = 0; i < teams.size(); ++i) {
        const int group = by_slot ? static_cast<int>(i % 2) : teams[i];
        strong_slot.push_back(group == side);
        l.add(std::make_unique<baselines::BaselineSource>(group == side ? strong : weak));
      }
      const auto out = testing::play(task, l, static_cast<std::uint64_t>(seed));
      std::int64_t diff = 0;
      for (std::size_t i = 0; i < teams.size(); ++i)
        diff += (strong_slot[i] ? 1 : -1) * out.result.total_rewards[i].value();
      total += diff;
      wins += diff > 0;
      losses += diff < 0;
    }
  return static_cast<double>(total) / (2.0 * seeds * 100.0);
}

double desk_seconds = 0;

Outcome desk_tournament(Check& c) {
  const auto probe = testing::desk_bracket(0);
  std::ostringstream detail;
  detail << std::setprecision(3);
  for (const auto& t : probe.tasks) {
    const GameKind g = t.spec.game();
    const auto strong = probe.entries.back().controllers.at(g);
    const auto weak = probe.entries.front().controllers.at(g);
    int wins = 0, losses = 0;
    const double m = margin(t.spec, strong, weak, 100, wins, losses);
    c.expect(m > 0 && wins > losses, t.name + ": scripted controller does not dominate random (margin " +
                                          std::to_string(m) + ", " + std::to_string(wins) + "-" + std::to_string(losses) + ")");
    detail << t.name << " margin " << m << " (" << wins << "-" << losses << "), ";
  }

  const auto t0 = std::chrono::steady_clock::now();
  int champion = 0;
  long matches = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto cfg = testing::desk_bracket(seed);
    const auto r = tournament::run_tournament(cfg);
    champion += r.champion == testing::kDeskChampion;
    matches += static_cast<long>(r.matches.size());
    std::map<std::tuple<int, int, std::string>, std::int64_t> brute;
    for (const auto& pm : r.matches)
      for (const auto& tick : pm.record.ticks)
        for (std::size_t i = 0; i < tick.rewards.size(); ++i)
          brute[{pm.assignment.stage, pm.assignment.league, pm.assignment.slot_entry[i]}] += tick.rewards[i].value();
    for (const auto& stage : r.stages)
      for (const auto& table : stage.tables)
        for (const auto& id : table.members)
          c.expect(table.totals.at(id).value() == brute[{table.stage, table.league, id}],
                   "seed " + std::to_string(seed) + " league total for " + id + " differs from its match records");
  }
  desk_seconds = Seconds(std::chrono::steady_clock::now() - t0).count();
  detail << "champion " << testing::kDeskChampion << " in " << champion << "/20 tournaments, " << matches << " matches";
  return {champion >= 19, detail.str()};
}

// ---------------------------------------------------------------- criterion 7

Outcome remote_faults(Check& c) {
  using namespace protocol;
  const int ticks = 8;
  TaskSpec task = default_task(GameKind::MobChase, 2);
  std::get<mob_chase::Params>(task.params).tick_limit = ticks;
  NetConfig net;
  net.listen = {"127.0.0.1", 0};
  net.action_timeout = 80ms;
  net.handshake_timeout = 5s;
  MatchServer server(task, {SlotAssignment::remote(), SlotAssignment::remote()}, net, 11);
  auto served = std::async(std::launch::async, [&] { return server.run(); });
  const Endpoint ep{"127.0.0.1", server.port()};
  auto silent = std::async(std::launch::async, [&] {
    Client client = Client::connect(ep, "silent");
    return run_agent(client, [](const Observation&, int) { return std::nullopt; });
  });
  std::this_thread::sleep_for(50ms);
  auto garbled = std::async(std::launch::async, [&] {
    Client client = Client::connect(ep, "garbled");
    bool sent_garbage = false;
    return run_agent(client, [&](const Observation&, int tick) -> std::optional<Action> {
      if (tick == 3 && !sent_garbage) {
        sent_garbage = true;
        client.send_raw("{\"type\":\"action\",\"payload\":\n");
        return std::nullopt;
      }
      return Action{mob_chase::Action::Stay};
    });
  });
  const ServeReport rep = served.get();
  silent.get();
  garbled.get();

  c.expect(rep.result.ticks_elapsed == ticks, "match ended early at tick " + std::to_string(rep.result.ticks_elapsed));
  c.expect(verify_replay(rep.record), "served match fails verify_replay");
  const int quiet = rep.sessions.at(0).entry_name == "silent" ? 0 : 1;
  const int noisy = 1 - quiet;
  int timeouts_logged = 0, substitutions = 0;
  for (int t = 1; t <= ticks; ++t) {
    const auto& rec = rep.record.ticks.at(static_cast<std::size_t>(t - 1));
    c.expect(rec.provenance[static_cast<std::size_t>(quiet)] == ActionProvenance::Timeout,
             "tick " + std::to_string(t) + " silent slot not recorded as timeout");
    c.expect(rec.actions[static_cast<std::size_t>(quiet)] == Action{mob_chase::kNoop},
             "tick " + std::to_string(t) + " silent slot action is not the no-op");
    const auto want = "tick " + std::to_string(t) + " slot " + std::to_string(quiet) + " timeout: no-op substituted";
    timeouts_logged += static_cast<int>(std::count(rep.log.begin(), rep.log.end(), want));
    const auto p = rec.provenance[static_cast<std::size_t>(noisy)];
    if (p != ActionProvenance::Received) {
      ++substitutions;
      c.expect(t == 3 && p == ActionProvenance::Error, "unexpected substitution for the garbled slot at tick " + std::to_string(t));
      c.expect(rec.actions[static_cast<std::size_t>(noisy)] == Action{mob_chase::kNoop}, "garbled frame not replaced by the no-op");
    }
  }
  bool malformed_logged = false;
  for (const auto& line : rep.log)
    malformed_logged = malformed_logged || (line.rfind("tick 3 slot " + std::to_string(noisy), 0) == 0);
  c.expect(timeouts_logged == ticks, "timeouts logged on " + std::to_string(timeouts_logged) + " of " + std::to_string(ticks) + " ticks");
  c.expect(substitutions == 1 && malformed_logged, "malformed frame not substituted and logged exactly once");
  c.expect(rep.sessions[static_cast<std::size_t>(noisy)].malformed_frames == 1, "malformed frame count is not 1");
  return {true, std::to_string(timeouts_logged) + " timeouts logged, " + std::to_string(substitutions) + " malformed substitution"};
}

// ---------------------------------------------------------------- criterion 8

Outcome throughput(Check& c) {
  TaskSpec task = default_task(GameKind::MobChase, 8);
  auto& p = std::get<mob_chase::Params>(task.params);
  p.width = p.height = 7;
  p.agents = 2;
  long ticks = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 0; ticks < 100000; ++seed) {
    auto lineup = Lineup::of({BaselineKind::GreedyChaser, BaselineKind::ExitSeeker});
    ticks += testing::play(task, lineup, seed).result.ticks_elapsed;
  }
  const double rate = static_cast<double>(ticks) / Seconds(std::chrono::steady_clock::now() - t0).count();
  c.expect(rate >= 5000, "mob chase runs at " + std::to_string(rate) + " ticks/s");
  c.expect(desk_seconds > 0 && desk_seconds < 300, "desk tournaments took " + std::to_string(desk_seconds) + " s");
  std::ostringstream d;
  d << std::fixed << std::setprecision(0) << rate << " ticks/s on 7x7 mob chase; 20 desk tournaments in "
    << std::setprecision(2) << desk_seconds << " s";
  return {true, d.str()};
}

}  // namespace

int main() {
  report(1, "reward constants", 1, reward_constants);
  report(2, "capture equals the no-legal-move oracle on every 4x4 meadow", 10, capture_oracle);
  report(3, "block rewards equal 0.2 x potential change", 30, potential_identity);
  report(4, "random matches verify and replay identically", 60, replay_determinism);
  report(5, "treasure rewards cancel and dungeons are connected", 60, treasure_zero_sum);
  report(6, "dominant entry wins the desk tournament", 300, desk_tournament);
  report(7, "remote timeouts and malformed frames become logged no-ops", 30, remote_faults);
  report(8, "throughput", 60, throughput);
  std::cout << (failed_criteria == 0 ? "all criteria passed" : std::to_string(failed_criteria) + " criteria failed")
            << std::endl;
  return failed_criteria == 0 ? 0 : 1;
}
