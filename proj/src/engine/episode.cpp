#include "marlo/engine/episode.hpp"

#include "marlo/core/hash.hpp"
#include "marlo/core/json_util.hpp"

#include <sstream>

namespace marlo {
namespace {

using nlohmann::json;

}  // namespace

std::string default_match_id(const TaskSpec& task, std::uint64_t seed) {
  return std::string(to_string(task.game())) + "-" + hash_to_hex(episode_seed(task, seed));
}

std::string_view to_string(ActionProvenance p) {
  switch (p) {
    case ActionProvenance::Received: return "ok";
    case ActionProvenance::Timeout: return "timeout";
    case ActionProvenance::Error: return "error";
    case ActionProvenance::Dropped: return "dropped";
    case ActionProvenance::Failed: return "failed";
    case ActionProvenance::Inactive: return "inactive";
  }
  return "?";
}

std::optional<ActionProvenance> parse_provenance(std::string_view s) {
  for (auto p : {ActionProvenance::Received, ActionProvenance::Timeout, ActionProvenance::Error,
                 ActionProvenance::Dropped, ActionProvenance::Failed, ActionProvenance::Inactive})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

EpisodeOutput run_episode(const TaskSpec& task, std::span<ActionSource* const> sources, std::uint64_t seed,
                          const EpisodeOptions& options) {
  auto game = make_game(task, seed);
  const int n = game->num_agents();
  if (static_cast<int>(sources.size()) != n)
    throw std::invalid_argument("run_episode: task declares " + std::to_string(n) + " agent slots, got " +
                                std::to_string(sources.size()) + " controllers");
  const GameKind kind = task.game();
  const std::uint64_t eseed = episode_seed(task, seed);
  const std::string match_id = options.match_id.empty() ? default_match_id(task, seed) : options.match_id;

  EpisodeOutput out;
  MatchRecord& record = out.record;
  record.task = task;
  record.seed = seed;
  record.initial_state_hash = game->state_hash();
  out.result.total_rewards.assign(static_cast<std::size_t>(n), Centipoints{});

  for (int i = 0; i < n; ++i) {
    EpisodeContext ctx{AgentId{i}, &task, n, derive_seed(eseed, salt::agent(i)), match_id};
    sources[static_cast<std::size_t>(i)]->begin_episode(ctx);
  }

  const Action noop = noop_action(kind);
  std::vector<Observation> observations(static_cast<std::size_t>(n));
  bool done = false;
  while (!done) {
    const int tick = game->tick() + 1;
    TickRecord rec;
    rec.actions.assign(static_cast<std::size_t>(n), std::nullopt);
    rec.provenance.assign(static_cast<std::size_t>(n), ActionProvenance::Inactive);
    std::vector<bool> active(static_cast<std::size_t>(n));
    std::vector<bool> failed(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
      const auto slot = static_cast<std::size_t>(i);
      active[slot] = game->is_active(AgentId{i});
      if (!active[slot]) continue;
      observations[slot] = game->observe(AgentId{i});
      try {
        sources[slot]->begin_tick({tick, AgentId{i}, &observations[slot], out.result.total_rewards[slot]});
      } catch (const std::exception&) {
        failed[slot] = true;
      }
    }

    const auto deadline = Clock::now() + options.action_timeout;
    for (int i = 0; i < n; ++i) {
      const auto slot = static_cast<std::size_t>(i);
      if (!active[slot]) continue;
      ActionReply reply = ActionReply::substitute(ActionProvenance::Failed);
      if (!failed[slot]) {
        try {
          reply = sources[slot]->poll_action(deadline);
        } catch (const std::exception&) {
          reply = ActionReply::substitute(ActionProvenance::Failed);
        }
      }
      if (reply.action && game_of(*reply.action) != kind) reply = ActionReply::substitute(ActionProvenance::Error);
      rec.actions[slot] = reply.action ? *reply.action : noop;
      rec.provenance[slot] = reply.action ? ActionProvenance::Received : reply.provenance;
      if (rec.provenance[slot] == ActionProvenance::Received && !reply.action)
        rec.provenance[slot] = ActionProvenance::Failed;
    }

    StepOutcome outcome = game->step(rec.actions);
    rec.rewards = outcome.rewards;
    rec.state_hash = game->state_hash();
    for (int i = 0; i < n; ++i) out.result.total_rewards[static_cast<std::size_t>(i)] += outcome.rewards[static_cast<std::size_t>(i)];
    done = outcome.done;
    if (done) {
      out.result.termination = outcome.termination.value_or(Termination::Timeout);
    }
    record.ticks.push_back(std::move(rec));

    for (int i = 0; i < n; ++i) {
      const auto slot = static_cast<std::size_t>(i);
      if (!active[slot]) continue;
      try {
        sources[slot]->end_tick(tick, outcome.rewards[slot], done);
      } catch (const std::exception&) {
      }
    }
  }
  out.result.ticks_elapsed = game->tick();
  record.result = out.result;
  for (ActionSource* s : sources) {
    try {
      s->end_episode(out.result);
    } catch (const std::exception&) {
    }
  }
  return out;
}

std::string write_replay(const MatchRecord& record) {
  std::ostringstream out;
  json header = {{"format_version", record.format_version},
                 {"game", to_string(record.task.game())},
                 {"task", to_json(record.task)},
                 {"seed", record.seed},
                 {"hash", kHashAlgorithmId},
                 {"initial_state_hash", hash_to_hex(record.initial_state_hash)}};
  out << header.dump() << '\n';
  for (std::size_t t = 0; t < record.ticks.size(); ++t) {
    const TickRecord& rec = record.ticks[t];
    json actions = json::array();
    for (const auto& a : rec.actions) actions.push_back(a ? action_to_json(*a) : json(nullptr));
    json rewards = json::array();
    for (Centipoints r : rec.rewards) rewards.push_back(r.value());
    json sources = json::array();
    for (ActionProvenance p : rec.provenance) sources.push_back(to_string(p));
    json line = {{"tick", t + 1},
                 {"actions", actions},
                 {"rewards", rewards},
                 {"state_hash", hash_to_hex(rec.state_hash)},
                 {"sources", sources}};
    out << line.dump() << '\n';
  }
  json totals = json::array();
  for (Centipoints r : record.result.total_rewards) totals.push_back(r.value());
  json result = {{"result",
                  {{"termination", to_string(record.result.termination)},
                   {"ticks_elapsed", record.result.ticks_elapsed},
                   {"total_rewards", totals}}}};
  out << result.dump() << '\n';
  return out.str();
}

MatchRecord read_replay(std::string_view text) {
  using namespace json_util;
  std::vector<std::string> lines;
  {
    std::string current;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(std::move(current));
        current.clear();
      } else {
        current += c;
      }
    }
    if (!current.empty()) lines.push_back(std::move(current));
  }
  if (lines.size() < 2) throw ReplayFormatError(1, "replay needs a header and a result line");

  auto parse_line = [&](std::size_t i) {
    try {
      return json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      throw ReplayFormatError(static_cast<int>(i + 1), e.what());
    }
  };

  MatchRecord record;
  const json header = parse_line(0);
  try {
    record.format_version = static_cast<int>(get_int(header, "format_version", "header"));
    if (record.format_version != kReplayFormatVersion)
      throw UnsupportedRecord("unsupported replay format_version " + std::to_string(record.format_version));
    const std::string game = get_string(header, "game", "header");
    if (!parse_game(game)) throw UnsupportedRecord("unsupported game id '" + game + "'");
    const std::string algo = get_string(header, "hash", "header");
    if (algo != kHashAlgorithmId) throw UnsupportedRecord("unsupported hash algorithm '" + algo + "'");
    reject_unknown(header, {"format_version", "game", "task", "seed", "hash", "initial_state_hash"}, "header");
    record.task = task_from_json(require(header, "task", "header"));
    if (to_string(record.task.game()) != game) throw FieldError("header.game", "does not match the task");
    record.seed = get_u64(header, "seed", "header");
    record.initial_state_hash = hash_from_hex(get_string(header, "initial_state_hash", "header"));
  } catch (const UnsupportedRecord&) {
    throw;
  } catch (const std::exception& e) {
    throw ReplayFormatError(1, e.what());
  }

  const GameKind kind = record.task.game();
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    const json line = parse_line(i);
    try {
      reject_unknown(line, {"tick", "actions", "rewards", "state_hash", "sources"}, "tick");
      if (get_int(line, "tick", "tick") != static_cast<std::int64_t>(i)) throw FieldError("tick", "out of sequence");
      TickRecord rec;
      for (const auto& a : require(line, "actions", "tick"))
        rec.actions.push_back(a.is_null() ? std::nullopt : std::optional<Action>(action_from_json(kind, a)));
      for (const auto& r : require(line, "rewards", "tick")) {
        if (!r.is_number_integer()) throw FieldError("rewards", "expected integer centipoints");
        rec.rewards.emplace_back(r.get<std::int64_t>());
      }
      rec.state_hash = hash_from_hex(get_string(line, "state_hash", "tick"));
      for (const auto& s : require(line, "sources", "tick")) {
        auto p = parse_provenance(s.get<std::string>());
        if (!p) throw FieldError("sources", "unknown action source tag");
        rec.provenance.push_back(*p);
      }
      record.ticks.push_back(std::move(rec));
    } catch (const ReplayFormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw ReplayFormatError(static_cast<int>(i + 1), e.what());
    }
  }

  const json last = parse_line(lines.size() - 1);
  try {
    reject_unknown(last, {"result"});
    const json& r = require(last, "result");
    reject_unknown(r, {"termination", "ticks_elapsed", "total_rewards"}, "result");
    auto term = parse_termination(get_string(r, "termination", "result"));
    if (!term) throw FieldError("result.termination", "unknown termination");
    record.result.termination = *term;
    record.result.ticks_elapsed = static_cast<int>(get_int(r, "ticks_elapsed", "result"));
    for (const auto& v : require(r, "total_rewards", "result")) record.result.total_rewards.emplace_back(v.get<std::int64_t>());
  } catch (const std::exception& e) {
    throw ReplayFormatError(static_cast<int>(lines.size()), e.what());
  }
  return record;
}

bool verify_replay(const MatchRecord& record) {
  if (record.format_version != kReplayFormatVersion)
    throw UnsupportedRecord("unsupported replay format_version " + std::to_string(record.format_version));
  std::unique_ptr<GameInstance> game;
  try {
    game = make_game(record.task, record.seed);
  } catch (const InvalidTask&) {
    return false;
  }
  if (game->state_hash() != record.initial_state_hash) return false;
  const auto n = static_cast<std::size_t>(game->num_agents());
  std::vector<Centipoints> totals(n);
  bool done = false;
  std::optional<Termination> termination;
  for (const TickRecord& rec : record.ticks) {
    if (done || rec.actions.size() != n || rec.rewards.size() != n) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (rec.actions[i].has_value() != game->is_active(AgentId{static_cast<int>(i)})) return false;
    StepOutcome outcome;
    try {
      outcome = game->step(rec.actions);
    } catch (const std::invalid_argument&) {
      return false;
    }
    if (outcome.rewards != rec.rewards || game->state_hash() != rec.state_hash) return false;
    for (std::size_t i = 0; i < n; ++i) totals[i] += outcome.rewards[i];
    done = outcome.done;
    termination = outcome.termination;
  }
  return done && termination == record.result.termination && totals == record.result.total_rewards &&
         game->tick() == record.result.ticks_elapsed &&
         static_cast<int>(record.ticks.size()) == record.result.ticks_elapsed;
}

}  // namespace marlo
