#include "marlo/baselines/baselines.hpp"
#include "marlo/core/json_util.hpp"
#include "marlo/protocol/server.hpp"
#include "marlo/task/sampler.hpp"
#include "marlo/tournament/tournament.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace marlo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Bad input: task files, flags, configs.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void diagnose(std::string_view kind, const std::string& message) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << std::endl;
}

void echo_config(const json& effective) { std::cout << json{{"effective_config", effective}}.dump() << '\n'; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

TaskSpec read_task(const std::string& path) {
  try {
    return load_task(read_file(path));
  } catch (const TaskError& e) {
    std::string where = path;
    if (e.line() > 0) where += ":" + std::to_string(e.line());
    throw UsageError(where + ": " + e.what());
  }
}

json scores_json(const std::vector<Centipoints>& scores) {
  json out = json::array();
  for (Centipoints c : scores) out.push_back(c.points());
  return out;
}

json result_json(const TaskSpec& task, std::uint64_t seed, const EpisodeResult& r) {
  return {{"game", to_string(task.game())},
          {"seed", seed},
          {"termination", to_string(r.termination)},
          {"ticks", r.ticks_elapsed},
          {"scores", scores_json(r.total_rewards)},
          {"scores_centipoints", [&] {
             json cp = json::array();
             for (Centipoints c : r.total_rewards) cp.push_back(c.value());
             return cp;
           }()}};
}

// ---- play ---------------------------------------------------------------

struct PlayArgs {
  std::string task;
  std::string agents;
  std::uint64_t seed = 0;
  std::string replay;
  std::string listen = "127.0.0.1:0";
  int action_timeout_ms = 100;
  int handshake_timeout_ms = 30000;
};

int play(const PlayArgs& a) {
  const TaskSpec task = read_task(a.task);
  const auto names = split(a.agents, ',');
  if (static_cast<int>(names.size()) != agent_count(task))
    throw UsageError("task needs " + std::to_string(agent_count(task)) + " agents, --agents lists " +
                     std::to_string(names.size()));
  std::vector<protocol::SlotAssignment> slots;
  bool any_remote = false;
  for (const auto& n : names) {
    try {
      slots.push_back(protocol::parse_slot_assignment(n));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    any_remote |= slots.back().is_remote();
    if (slots.back().baseline && !baselines::supports(*slots.back().baseline, task.game()))
      throw UsageError("baseline '" + n + "' cannot play " + std::string(to_string(task.game())));
  }
  echo_config({{"command", "play"}, {"task", a.task}, {"agents", names}, {"seed", a.seed}});

  EpisodeResult result;
  MatchRecord record;
  if (any_remote) {
    protocol::NetConfig net;
    net.listen = protocol::parse_endpoint(a.listen);
    net.action_timeout = std::chrono::milliseconds(a.action_timeout_ms);
    net.handshake_timeout = std::chrono::milliseconds(a.handshake_timeout_ms);
    protocol::MatchServer server(task, slots, net, a.seed);
    std::cerr << json{{"listening", "127.0.0.1:" + std::to_string(server.port())}}.dump() << std::endl;
    auto report = server.run();
    result = report.result;
    record = std::move(report.record);
  } else {
    std::vector<std::unique_ptr<baselines::BaselineSource>> owned;
    std::vector<ActionSource*> sources;
    for (const auto& s : slots) {
      owned.push_back(std::make_unique<baselines::BaselineSource>(*s.baseline));
      sources.push_back(owned.back().get());
    }
    auto out = run_episode(task, sources, a.seed);
    result = out.result;
    record = std::move(out.record);
  }
  if (!a.replay.empty()) write_file(a.replay, write_replay(record));
  std::cout << json{{"result", result_json(task, a.seed, result)}}.dump() << '\n';
  return kExitOk;
}

// ---- serve --------------------------------------------------------------

struct ServeArgs {
  std::string task;
  std::string slots;
  std::uint64_t seed = 0;
  std::string listen = "127.0.0.1:7420";
  int action_timeout_ms = 100;
  int handshake_timeout_ms = 60000;
  std::string token;
  std::string replay;
};

int serve(const ServeArgs& a) {
  const TaskSpec task = read_task(a.task);
  std::vector<protocol::SlotAssignment> slots;
  const auto names = a.slots.empty() ? std::vector<std::string>(static_cast<std::size_t>(agent_count(task)), "remote")
                                     : split(a.slots, ',');
  for (const auto& n : names) {
    try {
      slots.push_back(protocol::parse_slot_assignment(n));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  protocol::NetConfig net;
  try {
    net.listen = protocol::parse_endpoint(a.listen);
  } catch (const protocol::NetError& e) {
    throw UsageError(e.what());
  }
  net.action_timeout = std::chrono::milliseconds(a.action_timeout_ms);
  net.handshake_timeout = std::chrono::milliseconds(a.handshake_timeout_ms);
  if (!a.token.empty()) net.token = a.token;
  std::unique_ptr<protocol::MatchServer> server;
  try {
    server = std::make_unique<protocol::MatchServer>(task, slots, net, a.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  echo_config({{"command", "serve"},
               {"task", a.task},
               {"slots", names},
               {"seed", a.seed},
               {"listen", net.listen.host + ":" + std::to_string(server->port())},
               {"action_timeout_ms", a.action_timeout_ms},
               {"handshake_timeout_ms", a.handshake_timeout_ms},
               {"match_id", server->match_id()}});
  std::cout.flush();
  auto report = server->run();
  for (const auto& line : report.log) std::cerr << line << '\n';
  json sessions = json::array();
  for (const auto& s : report.sessions)
    sessions.push_back({{"slot", s.slot},
                        {"entry_name", s.entry_name},
                        {"state", protocol::to_string(s.state)},
                        {"missed_ticks", s.missed_ticks},
                        {"malformed_frames", s.malformed_frames},
                        {"substitutions", s.substitutions}});
  if (!a.replay.empty()) write_file(a.replay, write_replay(report.record));
  std::cout << json{{"result", result_json(task, a.seed, report.result)}, {"sessions", sessions}}.dump() << '\n';
  return kExitOk;
}

// ---- taskgen ------------------------------------------------------------

struct TaskgenArgs {
  std::string game;
  std::string difficulty = "small";
  std::uint64_t seed = 0;
  std::string config;
  std::string out;
  std::vector<std::string> validate;
};

int taskgen(const TaskgenArgs& a) {
  if (!a.validate.empty()) {
    int bad = 0;
    for (const auto& path : a.validate) {
      try {
        const TaskSpec t = read_task(path);
        auto v = marlo::validate(t);
        std::cout << json{{"file", path}, {"ok", v.empty()}, {"violations", v}}.dump() << '\n';
        bad += v.empty() ? 0 : 1;
      } catch (const UsageError& e) {
        std::cout << json{{"file", path}, {"ok", false}, {"violations", {e.what()}}}.dump() << '\n';
        ++bad;
      }
    }
    return bad == 0 ? kExitOk : kExitRuntime;
  }
  if (a.game.empty()) throw UsageError("taskgen needs --game (or --validate FILE...)");
  const auto game = parse_game(a.game);
  if (!game) throw UsageError("unknown game '" + a.game + "'");
  const auto difficulty = parse_difficulty(a.difficulty);
  if (!difficulty) throw UsageError("unknown difficulty '" + a.difficulty + "'");
  const std::string config_path = a.config.empty() ? default_difficulty_config_path() : a.config;
  DifficultyConfig config;
  try {
    config = load_difficulty_config(config_path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const TaskSpec t = sample_task(*game, *difficulty, a.seed, config);
  const std::string text = save_task(t);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file(a.out, text);
    std::cout << json{{"effective_config",
                       {{"command", "taskgen"}, {"game", a.game}, {"difficulty", a.difficulty}, {"seed", a.seed},
                        {"config", config_path}}},
                      {"wrote", a.out}}
                     .dump()
              << '\n';
  }
  return kExitOk;
}

// ---- tournament ---------------------------------------------------------

struct TournamentArgs {
  std::string config;
  std::string out;
  int workers = 0;  // 0 = from env or config
  std::optional<std::uint64_t> seed;
};

int tournament_cmd(const TournamentArgs& a, bool workers_given) {
  tournament::BracketConfig config;
  try {
    config = tournament::load_bracket(a.config);
    if (a.seed) config.base_seed = *a.seed;
    if (workers_given) config.workers = a.workers;
    tournament::validate(config);
  } catch (const tournament::ConfigError& e) {
    throw UsageError(e.what());
  }
  json entries = json::array();
  for (const auto& e : config.entries) {
    json ctl = json::object();
    for (const auto& [g, k] : e.controllers) ctl[std::string(to_string(g))] = baselines::to_string(k);
    entries.push_back({{"id", e.id}, {"controller", ctl}});
  }
  echo_config({{"command", "tournament"},
               {"config", a.config},
               {"base_seed", config.base_seed},
               {"workers", config.workers},
               {"entries", entries},
               {"out", a.out}});
  const auto result = tournament::run_tournament(config, {!a.out.empty()});
  if (!a.out.empty()) tournament::write_reports(result, config, a.out);
  std::cout << tournament::render_bracket(result);
  return kExitOk;
}

// ---- replay-verify ------------------------------------------------------

int replay_verify(const std::vector<std::string>& files) {
  int failures = 0;
  for (const auto& path : files) {
    json line = {{"file", path}};
    try {
      const MatchRecord rec = read_replay(read_file(path));
      const bool ok = verify_replay(rec);
      line["ok"] = ok;
      failures += ok ? 0 : 1;
    } catch (const UnsupportedRecord& e) {
      line["ok"] = false;
      line["unsupported"] = e.what();
      ++failures;
    } catch (const std::exception& e) {
      line["ok"] = false;
      line["error"] = e.what();
      ++failures;
    }
    std::cout << line.dump() << '\n';
  }
  return failures == 0 ? kExitOk : kExitRuntime;
}

// ---- bench --------------------------------------------------------------

struct BenchArgs {
  std::string game = "all";
  std::uint64_t seed = 1;
  int min_ticks = 50000;
};

int bench(const BenchArgs& a) {
  std::vector<GameKind> games;
  if (a.game == "all") {
    games = {GameKind::MobChase, GameKind::BuildBattle, GameKind::TreasureHunt};
  } else if (auto g = parse_game(a.game)) {
    games = {*g};
  } else {
    throw UsageError("unknown game '" + a.game + "'");
  }
  echo_config({{"command", "bench"}, {"game", a.game}, {"seed", a.seed}, {"min_ticks", a.min_ticks}});
  for (GameKind g : games) {
    const TaskSpec task = default_task(g);
    baselines::BaselineKind k = baselines::BaselineKind::Random;
    if (g == GameKind::MobChase) k = baselines::BaselineKind::GreedyChaser;
    if (g == GameKind::BuildBattle) k = baselines::BaselineKind::GreedyBuilder;
    if (g == GameKind::TreasureHunt) k = baselines::BaselineKind::HunterScripted;
    long ticks = 0;
    int episodes = 0;
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t s = a.seed; ticks < a.min_ticks; ++s) {
      std::vector<std::unique_ptr<baselines::BaselineSource>> owned;
      std::vector<ActionSource*> sources;
      for (int i = 0; i < agent_count(task); ++i) {
        owned.push_back(std::make_unique<baselines::BaselineSource>(k));
        sources.push_back(owned.back().get());
      }
      ticks += run_episode(task, sources, s).result.ticks_elapsed;
      ++episodes;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << json{{"game", to_string(g)},
                      {"baseline", baselines::to_string(k)},
                      {"episodes", episodes},
                      {"ticks", ticks},
                      {"ticks_per_second", static_cast<long>(static_cast<double>(ticks) / secs)}}
                     .dump()
              << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"marlo: multi-agent grid game arena"};
  app.require_subcommand(1);

  PlayArgs play_args;
  auto* play_cmd = app.add_subcommand("play", "Run one match with baselines and/or remote agents");
  play_cmd->add_option("--task", play_args.task, "Task file")->required();
  play_cmd->add_option("--agents", play_args.agents, "Comma-separated controller per slot (baseline name or remote)")->required();
  play_cmd->add_option("--seed", play_args.seed, "Match seed");
  play_cmd->add_option("--replay", play_args.replay, "Write the match record here");
  play_cmd->add_option("--listen", play_args.listen, "Listener for remote slots")->envname("MARLO_ARENA_ADDR");
  play_cmd->add_option("--action-timeout-ms", play_args.action_timeout_ms)->envname("MARLO_ARENA_ACTION_TIMEOUT_MS");

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Serve one match to remote agents");
  serve_cmd->add_option("--task", serve_args.task, "Task file")->required();
  serve_cmd->add_option("--slots", serve_args.slots, "Comma-separated remote|baseline per slot (default all remote)");
  serve_cmd->add_option("--seed", serve_args.seed, "Match seed");
  serve_cmd->add_option("--listen", serve_args.listen, "host:port")->envname("MARLO_ARENA_ADDR");
  serve_cmd->add_option("--action-timeout-ms", serve_args.action_timeout_ms)->envname("MARLO_ARENA_ACTION_TIMEOUT_MS");
  serve_cmd->add_option("--handshake-timeout-ms", serve_args.handshake_timeout_ms);
  serve_cmd->add_option("--token", serve_args.token, "Require this token in hello");
  serve_cmd->add_option("--replay", serve_args.replay, "Write the match record here");

  TaskgenArgs taskgen_args;
  auto* taskgen_cmd = app.add_subcommand("taskgen", "Sample or validate task files");
  taskgen_cmd->add_option("--game", taskgen_args.game, "mob_chase | build_battle | treasure_hunt");
  taskgen_cmd->add_option("--difficulty", taskgen_args.difficulty, "small | medium | large");
  taskgen_cmd->add_option("--seed", taskgen_args.seed);
  taskgen_cmd->add_option("--config", taskgen_args.config, "Difficulty ranges file");
  taskgen_cmd->add_option("--out", taskgen_args.out, "Write here instead of stdout");
  taskgen_cmd->add_option("--validate", taskgen_args.validate, "Validate these task files instead");

  TournamentArgs tournament_args;
  std::uint64_t tournament_seed = 0;
  auto* tournament_cmd_app = app.add_subcommand("tournament", "Run a bracket config");
  tournament_cmd_app->add_option("--config", tournament_args.config, "Bracket config")->required();
  tournament_cmd_app->add_option("--out", tournament_args.out, "Results directory");
  auto* workers_opt = tournament_cmd_app->add_option("--workers", tournament_args.workers)->envname("MARLO_ARENA_WORKERS");
  auto* seed_opt = tournament_cmd_app->add_option("--seed", tournament_seed, "Override base_seed");

  std::vector<std::string> replay_files;
  auto* verify_cmd = app.add_subcommand("replay-verify", "Re-simulate replay files");
  verify_cmd->add_option("files", replay_files, "Replay files")->required();

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Headless ticks/second per game");
  bench_cmd->add_option("--game", bench_args.game, "all or a game id");
  bench_cmd->add_option("--seed", bench_args.seed);
  bench_cmd->add_option("--ticks", bench_args.min_ticks, "Minimum ticks per game");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    diagnose("usage", e.what());
    return kExitUsage;
  }

  try {
    if (*play_cmd) return play(play_args);
    if (*serve_cmd) return serve(serve_args);
    if (*taskgen_cmd) return taskgen(taskgen_args);
    if (*tournament_cmd_app) {
      if (*seed_opt) tournament_args.seed = tournament_seed;
      return tournament_cmd(tournament_args, workers_opt->count() > 0 || std::getenv("MARLO_ARENA_WORKERS") != nullptr);
    }
    if (*verify_cmd) return replay_verify(replay_files);
    if (*bench_cmd) return bench(bench_args);
  } catch (const UsageError& e) {
    diagnose("config", e.what());
    return kExitUsage;
  } catch (const InvalidTask& e) {
    diagnose("invalid_task", e.what());
    return kExitUsage;
  } catch (const FieldError& e) {
    diagnose("config", e.what());
    return kExitUsage;
  } catch (const protocol::MatchAborted& e) {
    diagnose("match_aborted", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    diagnose("runtime", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
