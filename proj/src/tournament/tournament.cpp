#include "marlo/tournament/tournament.hpp"

#include "marlo/core/hash.hpp"
#include "marlo/core/json_util.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace marlo::tournament {
namespace {

using nlohmann::json;

constexpr std::uint64_t kSeatingSalt = 0x5ea7;
constexpr std::uint64_t kRankSalt = 0x7a9c;
constexpr std::uint64_t kAdvanceSalt = 0xad7a;

std::uint64_t id_key(std::uint64_t seed, const std::string& id) {
  Fnv1a64 h;
  h.u64(seed).str(id);
  return mix64(h.digest());
}

std::string game_name(GameKind g) { return std::string(to_string(g)); }

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<std::vector<std::string>> initial_leagues(const BracketConfig& config) {
  std::vector<std::string> ids;
  for (const auto& e : config.entries) ids.push_back(e.id);
  ids = sorted(std::move(ids));
  Rng rng = Rng::stream(config.base_seed, kSeatingSalt);
  rng.shuffle(ids);
  const StageConfig& s = config.stages.front();
  std::vector<std::vector<std::string>> leagues(static_cast<std::size_t>(s.leagues));
  for (std::size_t i = 0; i < ids.size(); ++i) leagues[i / static_cast<std::size_t>(s.league_size)].push_back(ids[i]);
  return leagues;
}

const Entry& find_entry(const BracketConfig& config, const std::string& id) {
  for (const auto& e : config.entries)
    if (e.id == id) return e;
  throw std::out_of_range("no entry '" + id + "'");
}

std::string points(Centipoints c) { return c.to_decimal(); }

}  // namespace

Entry Entry::uniform(std::string id, BaselineKind k) {
  Entry e{std::move(id), {}};
  for (GameKind g : {GameKind::MobChase, GameKind::BuildBattle, GameKind::TreasureHunt}) e.controllers[g] = k;
  return e;
}

BaselineKind Entry::controller_for(GameKind g) const {
  auto it = controllers.find(g);
  if (it == controllers.end()) throw std::out_of_range("entry '" + id + "' has no controller for " + game_name(g));
  return it->second;
}

void validate(const BracketConfig& c) {
  if (c.entries.empty()) fail("no entries");
  std::set<std::string> ids;
  for (const auto& e : c.entries) {
    if (e.id.empty()) fail("entry with an empty id");
    if (!ids.insert(e.id).second) fail("duplicate entry id '" + e.id + "'");
  }
  if (c.tasks.empty()) fail("no tasks");
  std::set<GameKind> games;
  for (const auto& t : c.tasks) {
    if (auto v = validate(t.spec); !v.empty()) fail("task '" + t.name + "': " + v.front());
    if (t.spec.game() == GameKind::MobChase && agent_count(t.spec) < 2)
      fail("task '" + t.name + "': mob_chase pairings need at least 2 agents");
    games.insert(t.spec.game());
    for (const auto& e : c.entries) {
      auto it = e.controllers.find(t.spec.game());
      if (it == e.controllers.end()) fail("entry '" + e.id + "' has no controller for " + game_name(t.spec.game()));
      if (!baselines::supports(it->second, t.spec.game()))
        fail("entry '" + e.id + "': baseline '" + std::string(baselines::to_string(it->second)) + "' cannot play " +
             game_name(t.spec.game()));
    }
  }
  if (games.size() != 3) fail("tasks must cover mob_chase, build_battle and treasure_hunt");
  if (c.stages.empty()) fail("no stages");
  if (c.workers < 1) fail("workers must be at least 1");
  for (std::size_t i = 0; i < c.stages.size(); ++i) {
    const StageConfig& s = c.stages[i];
    const std::string where = "stage " + std::to_string(i + 1) + ": ";
    if (s.leagues < 1) fail(where + "leagues must be at least 1");
    if (s.league_size < 2) fail(where + "league_size must be at least 2");
    if (s.episodes_per_pairing < 2 || s.episodes_per_pairing % 2 != 0)
      fail(where + "episodes_per_pairing must be even and at least 2");
    const bool last = i + 1 == c.stages.size();
    if (!last && (s.promote_k < 1 || s.promote_k >= s.league_size))
      fail(where + "promote_k must be in [1, league_size)");
    if (last && s.leagues != 1) fail(where + "the final stage must be a single league");
    const int incoming = i == 0 ? static_cast<int>(c.entries.size())
                                : c.stages[i - 1].leagues * c.stages[i - 1].promote_k;
    if (incoming != s.leagues * s.league_size)
      fail(where + std::to_string(incoming) + " entries cannot fill " + std::to_string(s.leagues) + " leagues of " +
           std::to_string(s.league_size));
  }
}

BracketConfig bracket_from_json(const json& j, const std::filesystem::path& base_dir) {
  using namespace json_util;
  if (!j.is_object()) fail("bracket config must be an object");
  BracketConfig c;
  try {
    reject_unknown(j, {"config_version", "base_seed", "workers", "entries", "tasks", "stages"});
    if (get_int(j, "config_version") != 1) fail("unsupported bracket config_version");
    c.base_seed = get_u64(j, "base_seed");
    if (j.contains("workers")) c.workers = static_cast<int>(get_int(j, "workers"));
    for (const auto& e : require(j, "entries")) {
      reject_unknown(e, {"id", "controller"}, "entries[]");
      Entry entry;
      entry.id = get_string(e, "id", "entries[]");
      const json& ctl = require(e, "controller", "entries[]");
      auto parse_kind = [&](const json& v, const std::string& field) {
        if (!v.is_string()) throw FieldError(field, "expected a baseline name");
        const auto name = v.get<std::string>();
        if (name == "remote")
          fail("entry '" + entry.id + "': remote controllers are served one match at a time with `marlo serve`; "
               "tournaments run baseline entries");
        auto k = baselines::parse_baseline(name);
        if (!k) throw FieldError(field, "unknown baseline '" + name + "'");
        return *k;
      };
      if (ctl.is_string()) {
        const BaselineKind k = parse_kind(ctl, "entries[].controller");
        for (GameKind g : {GameKind::MobChase, GameKind::BuildBattle, GameKind::TreasureHunt})
          if (baselines::supports(k, g)) entry.controllers[g] = k;
      } else if (ctl.is_object()) {
        for (const auto& [game, v] : ctl.items()) {
          auto g = parse_game(game);
          if (!g) throw FieldError("entries[].controller." + game, "unknown game");
          entry.controllers[*g] = parse_kind(v, "entries[].controller." + game);
        }
      } else {
        throw FieldError("entries[].controller", "expected a baseline name or a per-game object");
      }
      c.entries.push_back(std::move(entry));
    }
    for (const auto& t : require(j, "tasks")) {
      if (t.is_string()) {
        const std::filesystem::path p = base_dir / t.get<std::string>();
        c.tasks.push_back({p.stem().string(), load_task_file(p.string())});
      } else {
        reject_unknown(t, {"name", "task"}, "tasks[]");
        c.tasks.push_back({get_string(t, "name", "tasks[]"), task_from_json(require(t, "task", "tasks[]"))});
      }
    }
    for (const auto& s : require(j, "stages")) {
      reject_unknown(s, {"leagues", "league_size", "promote_k", "episodes_per_pairing"}, "stages[]");
      StageConfig st;
      st.leagues = static_cast<int>(get_int(s, "leagues", "stages[]"));
      st.league_size = static_cast<int>(get_int(s, "league_size", "stages[]"));
      if (s.contains("promote_k")) st.promote_k = static_cast<int>(get_int(s, "promote_k", "stages[]"));
      st.episodes_per_pairing = static_cast<int>(get_int(s, "episodes_per_pairing", "stages[]"));
      c.stages.push_back(st);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }
  validate(c);
  return c;
}

BracketConfig load_bracket(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open bracket config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("bracket config '" + path.string() + "': " + e.what());
  }
  return bracket_from_json(j, path.parent_path());
}

std::vector<MatchAssignment> schedule_league(const std::vector<std::string>& members, const BracketConfig& config,
                                             int stage, int league) {
  const auto m = sorted(members);
  const StageConfig& st = config.stages.at(static_cast<std::size_t>(stage));
  if (m.size() < 2) fail("a league needs at least 2 entries");
  const int half = st.episodes_per_pairing / 2;
  std::vector<MatchAssignment> out;
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = a + 1; b < m.size(); ++b) {
      for (std::size_t t = 0; t < config.tasks.size(); ++t) {
        const TaskSpec& task = config.tasks[t].spec;
        const int n = agent_count(task);
        const auto teams = slot_teams(task);
        for (int e = 0; e < st.episodes_per_pairing; ++e) {
          MatchAssignment ma;
          ma.stage = stage;
          ma.league = league;
          ma.first = m[a];
          ma.second = m[b];
          ma.task = t;
          ma.episode = e;
          // Both halves of a pairing replay the same seeds with sides swapped.
          Fnv1a64 h;
          h.u64(config.base_seed).i32(stage).i32(league).str(ma.first).str(ma.second).u64(t).i32(e % half);
          ma.seed = h.digest();
          const bool first_leads = e < half;
          for (int i = 0; i < n; ++i) {
            const bool lead_slot = task.game() == GameKind::MobChase ? i % 2 == 0 : teams[static_cast<std::size_t>(i)] == 0;
            ma.slot_entry.push_back(lead_slot == first_leads ? ma.first : ma.second);
          }
          out.push_back(std::move(ma));
        }
      }
    }
  }
  return out;
}

LeagueTable empty_table(int stage, int league, const std::vector<std::string>& members, const BracketConfig& config) {
  LeagueTable t;
  t.stage = stage;
  t.league = league;
  t.members = sorted(members);
  for (const auto& task : config.tasks) t.task_names.push_back(task.name);
  for (const auto& id : t.members) {
    t.per_task[id].assign(config.tasks.size(), Centipoints{});
    t.totals[id] = Centipoints{};
    for (const auto& other : t.members)
      if (other != id) t.head_to_head[id][other] = Centipoints{};
  }
  return t;
}

void accumulate(LeagueTable& table, const MatchAssignment& m, const EpisodeResult& result) {
  for (std::size_t i = 0; i < m.slot_entry.size(); ++i) {
    const std::string& id = m.slot_entry[i];
    const std::string& opponent = id == m.first ? m.second : m.first;
    const Centipoints r = result.total_rewards.at(i);
    table.per_task.at(id).at(m.task) += r;
    table.totals.at(id) += r;
    table.head_to_head.at(id).at(opponent) += r;
  }
  ++table.matches;
}

void rank(LeagueTable& table, std::uint64_t seed) {
  std::vector<std::string> order = table.members;
  std::stable_sort(order.begin(), order.end(),
                   [&](const std::string& a, const std::string& b) { return table.totals.at(a) > table.totals.at(b); });
  table.notes.clear();
  std::vector<std::string> ranking;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && table.totals.at(order[j]) == table.totals.at(order[i])) ++j;
    std::vector<std::string> group(order.begin() + static_cast<std::ptrdiff_t>(i), order.begin() + static_cast<std::ptrdiff_t>(j));
    if (group.size() > 1) {
      std::map<std::string, Centipoints> h2h;
      for (const auto& a : group)
        for (const auto& b : group)
          if (a != b) h2h[a] += table.head_to_head.at(a).at(b);
      std::sort(group.begin(), group.end(), [&](const std::string& a, const std::string& b) {
        if (h2h[a] != h2h[b]) return h2h[a] > h2h[b];
        return id_key(seed, a) < id_key(seed, b);
      });
      std::string names;
      for (const auto& g : group) names += (names.empty() ? "" : ", ") + g;
      bool drawn = false;
      for (std::size_t k = 0; k + 1 < group.size(); ++k) drawn |= h2h[group[k]] == h2h[group[k + 1]];
      table.notes.push_back("tie at " + points(table.totals.at(group.front())) + " between " + names + ": resolved by " +
                            (drawn ? "head-to-head, then seeded draw" : "head-to-head"));
    }
    ranking.insert(ranking.end(), group.begin(), group.end());
    i = j;
  }
  table.ranking = std::move(ranking);
}

std::vector<std::vector<std::string>> advance(const std::vector<LeagueTable>& stage_tables, const StageConfig& stage,
                                              const StageConfig& next, std::uint64_t seed, int stage_index) {
  const int pooled = static_cast<int>(stage_tables.size()) * stage.promote_k;
  if (pooled != next.leagues * next.league_size)
    fail(std::to_string(pooled) + " promoted entries cannot fill " + std::to_string(next.leagues) + " leagues of " +
         std::to_string(next.league_size));
  Rng rng = Rng::stream(derive_seed(seed, kAdvanceSalt), static_cast<std::uint64_t>(stage_index));
  std::vector<std::string> pool;
  for (int r = 0; r < stage.promote_k; ++r) {
    std::vector<std::string> tier;
    for (const auto& t : stage_tables) tier.push_back(t.ranking.at(static_cast<std::size_t>(r)));
    rng.shuffle(tier);
    pool.insert(pool.end(), tier.begin(), tier.end());
  }
  std::vector<std::vector<std::string>> leagues(static_cast<std::size_t>(next.leagues));
  const auto width = static_cast<std::size_t>(next.leagues);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const std::size_t row = i / width;
    const std::size_t col = i % width;
    leagues[row % 2 == 0 ? col : width - 1 - col].push_back(pool[i]);
  }
  return leagues;
}

TournamentResult run_tournament(const BracketConfig& config, const RunOptions& options) {
  validate(config);
  TournamentResult result;
  auto leagues = initial_leagues(config);
  for (std::size_t s = 0; s < config.stages.size(); ++s) {
    const int stage = static_cast<int>(s);
    std::vector<MatchAssignment> schedule;
    StageResult sr;
    for (std::size_t l = 0; l < leagues.size(); ++l) {
      auto part = schedule_league(leagues[l], config, stage, static_cast<int>(l));
      schedule.insert(schedule.end(), part.begin(), part.end());
      sr.tables.push_back(empty_table(stage, static_cast<int>(l), leagues[l], config));
    }

    std::vector<EpisodeOutput> outputs(schedule.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
      for (std::size_t i = next++; i < schedule.size(); i = next++) {
        try {
          const MatchAssignment& m = schedule[i];
          const TaskSpec& task = config.tasks[m.task].spec;
          std::vector<std::unique_ptr<baselines::BaselineSource>> owned;
          std::vector<ActionSource*> sources;
          for (const auto& id : m.slot_entry) {
            owned.push_back(std::make_unique<baselines::BaselineSource>(find_entry(config, id).controller_for(task.game())));
            sources.push_back(owned.back().get());
          }
          EpisodeOptions eo;
          eo.match_id = "s" + std::to_string(m.stage + 1) + "-l" + std::to_string(m.league + 1) + "-" + m.first + "-" +
                        m.second + "-" + config.tasks[m.task].name + "-e" + std::to_string(m.episode + 1);
          outputs[i] = run_episode(task, sources, m.seed, eo);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const int n_workers = std::max(1, std::min<int>(config.workers, static_cast<int>(schedule.size())));
    if (n_workers == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 0; i < schedule.size(); ++i) {
      accumulate(sr.tables[static_cast<std::size_t>(schedule[i].league)], schedule[i], outputs[i].result);
      if (options.keep_records) result.matches.push_back({schedule[i], std::move(outputs[i].record)});
    }
    for (auto& t : sr.tables)
      rank(t, derive_seed(config.base_seed, kRankSalt + 1000 * static_cast<std::uint64_t>(stage) + static_cast<std::uint64_t>(t.league)));

    const bool last = s + 1 == config.stages.size();
    if (last) {
      result.champion = sr.tables.front().ranking.front();
    } else {
      leagues = advance(sr.tables, config.stages[s], config.stages[s + 1], config.base_seed, stage);
    }
    result.stages.push_back(std::move(sr));
  }
  return result;
}

json to_json(const LeagueTable& t) {
  json rows = json::array();
  for (std::size_t r = 0; r < t.ranking.size(); ++r) {
    const std::string& id = t.ranking[r];
    json per_task = json::object();
    for (std::size_t k = 0; k < t.task_names.size(); ++k) per_task[t.task_names[k]] = t.per_task.at(id)[k].value();
    json h2h = json::object();
    for (const auto& [other, c] : t.head_to_head.at(id)) h2h[other] = c.value();
    rows.push_back({{"rank", r + 1},
                    {"entry", id},
                    {"total_centipoints", t.totals.at(id).value()},
                    {"total", t.totals.at(id).to_decimal()},
                    {"per_task_centipoints", per_task},
                    {"head_to_head_centipoints", h2h}});
  }
  return {{"stage", t.stage + 1}, {"league", t.league + 1}, {"matches", t.matches},
          {"tasks", t.task_names}, {"rows", rows},          {"tie_breaks", t.notes}};
}

std::string render_table(const LeagueTable& t) {
  std::ostringstream out;
  out << "stage " << t.stage + 1 << " league " << t.league + 1 << " (" << t.matches << " matches)\n";
  std::size_t w = 5;
  for (const auto& id : t.members) w = std::max(w, id.size());
  out << std::left << std::setw(6) << "rank" << std::setw(static_cast<int>(w) + 2) << "entry" << std::right
      << std::setw(10) << "total";
  for (const auto& name : t.task_names) out << std::setw(static_cast<int>(std::max<std::size_t>(name.size(), 8)) + 2) << name;
  out << '\n';
  for (std::size_t r = 0; r < t.ranking.size(); ++r) {
    const std::string& id = t.ranking[r];
    out << std::left << std::setw(6) << r + 1 << std::setw(static_cast<int>(w) + 2) << id << std::right << std::setw(10)
        << t.totals.at(id).to_decimal();
    for (std::size_t k = 0; k < t.task_names.size(); ++k)
      out << std::setw(static_cast<int>(std::max<std::size_t>(t.task_names[k].size(), 8)) + 2)
          << t.per_task.at(id)[k].to_decimal();
    out << '\n';
  }
  for (const auto& n : t.notes) out << "note: " << n << '\n';
  return out.str();
}

json bracket_report(const TournamentResult& r, const BracketConfig& config) {
  json stages = json::array();
  for (std::size_t s = 0; s < r.stages.size(); ++s) {
    json leagues = json::array();
    const bool last = s + 1 == r.stages.size();
    for (const auto& t : r.stages[s].tables) {
      json promoted = json::array();
      if (!last)
        for (int k = 0; k < config.stages[s].promote_k; ++k) promoted.push_back(t.ranking.at(static_cast<std::size_t>(k)));
      leagues.push_back({{"league", t.league + 1}, {"members", t.members}, {"ranking", t.ranking}, {"promoted", promoted}});
    }
    stages.push_back({{"stage", s + 1}, {"leagues", leagues}});
  }
  json tasks = json::array();
  for (const auto& t : config.tasks) tasks.push_back({{"name", t.name}, {"game", to_string(t.spec.game())}});
  return {{"base_seed", config.base_seed}, {"tasks", tasks}, {"stages", stages}, {"champion", r.champion}};
}

std::string render_bracket(const TournamentResult& r) {
  std::ostringstream out;
  for (const auto& s : r.stages) {
    for (const auto& t : s.tables) out << render_table(t) << '\n';
  }
  out << "champion: " << r.champion << '\n';
  return out.str();
}

void write_reports(const TournamentResult& r, const BracketConfig& config, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "replays");
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    out << text;
  };
  for (const auto& s : r.stages)
    for (const auto& t : s.tables) {
      const std::string stem = "stage" + std::to_string(t.stage + 1) + "_league" + std::to_string(t.league + 1);
      write(dir / (stem + ".json"), to_json(t).dump(2) + "\n");
      write(dir / (stem + ".txt"), render_table(t));
    }
  write(dir / "bracket.json", bracket_report(r, config).dump(2) + "\n");
  write(dir / "bracket.txt", render_bracket(r));
  for (const auto& m : r.matches) {
    const auto& a = m.assignment;
    const std::string name = "s" + std::to_string(a.stage + 1) + "-l" + std::to_string(a.league + 1) + "-" + a.first +
                             "-" + a.second + "-" + config.tasks[a.task].name + "-e" + std::to_string(a.episode + 1) +
                             ".replay";
    write(dir / "replays" / name, write_replay(m.record));
  }
}

}  // namespace marlo::tournament
