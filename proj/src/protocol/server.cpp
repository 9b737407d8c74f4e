#include "marlo/protocol/server.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

namespace marlo::protocol {
namespace {

using namespace std::chrono_literals;

struct BadFrame {
  std::string what;
};
using Inbound = std::variant<Message, BadFrame>;

class Session {
 public:
  Session(Socket sock, LineReader reader, int slot, std::string entry_name)
      : sock_(std::move(sock)), reader_(std::move(reader)) {
    stats_.slot = slot;
    stats_.entry_name = std::move(entry_name);
  }
  ~Session() { stop(); }

  void start() {
    stats_.state = SessionState::InEpisode;
    thread_ = std::thread([this] { read_loop(); });
  }

  void stop() {
    stopping_ = true;
    sock_.shutdown();
    if (thread_.joinable()) thread_.join();
  }

  /// Flushes, then gives the peer a moment to hang up so trailing frames are not reset.
  void finish(std::chrono::milliseconds linger) {
    sock_.shutdown_write();
    {
      std::unique_lock lock(mu_);
      cv_.wait_for(lock, linger, [&] { return dropped_; });
    }
    stop();
  }

  void send(const Message& m) {
    std::lock_guard lock(write_mu_);
    if (!sock_.send_all(encode(m))) mark_dropped();
  }

  std::optional<Inbound> wait(Clock::time_point deadline) {
    std::unique_lock lock(mu_);
    cv_.wait_until(lock, deadline, [&] { return !inbox_.empty() || dropped_; });
    if (inbox_.empty()) return std::nullopt;
    Inbound v = std::move(inbox_.front());
    inbox_.pop_front();
    return v;
  }

  /// Discards frames left over from earlier ticks.
  void drain() {
    std::lock_guard lock(mu_);
    inbox_.clear();
  }

  bool dropped() {
    std::lock_guard lock(mu_);
    return dropped_;
  }

  SessionStats& stats() { return stats_; }

 private:
  void mark_dropped() {
    std::lock_guard lock(mu_);
    dropped_ = true;
    cv_.notify_all();
  }

  void push(Inbound v) {
    std::lock_guard lock(mu_);
    inbox_.push_back(std::move(v));
    cv_.notify_all();
  }

  void read_loop() {
    while (!stopping_) {
      auto r = reader_.next(sock_, 200ms);
      if (std::holds_alternative<LineReader::Timeout>(r)) continue;
      if (std::holds_alternative<LineReader::Closed>(r)) {
        mark_dropped();
        return;
      }
      if (std::holds_alternative<LineReader::Oversize>(r)) {
        push(BadFrame{"field 'frame': exceeds 1 MiB"});
        continue;
      }
      try {
        Message m = decode(std::get<std::string>(r));
        if (m.type == MessageType::Ping) {
          send(pong(m.payload.value("nonce", std::int64_t{0})));
          continue;
        }
        if (m.type == MessageType::Pong) continue;
        push(std::move(m));
      } catch (const DecodeError& e) {
        push(BadFrame{e.what()});
      }
    }
  }

  Socket sock_;
  LineReader reader_;
  SessionStats stats_;
  std::thread thread_;
  std::atomic<bool> stopping_{false};
  std::mutex write_mu_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Inbound> inbox_;
  bool dropped_ = false;
};

class RemoteSource final : public ActionSource {
 public:
  RemoteSource(Session& session, std::string match_id, GameKind game, std::vector<std::string>& log)
      : session_(session), match_id_(std::move(match_id)), game_(game), log_(log) {}

  void begin_tick(const TickContext& ctx) override {
    tick_ = ctx.tick;
    session_.drain();
    session_.send(observation(match_id_, ctx.tick, ctx.agent.index, observation_to_json(*ctx.observation), ctx.score_so_far));
  }

  ActionReply poll_action(Clock::time_point deadline) override {
    auto& st = session_.stats();
    for (;;) {
      auto in = session_.wait(deadline);
      if (!in) {
        const bool gone = session_.dropped();
        if (gone) st.state = SessionState::Dropped;
        return substitute(gone ? ActionProvenance::Dropped : ActionProvenance::Timeout, {});
      }
      if (auto* bad = std::get_if<BadFrame>(&*in)) {
        ++st.malformed_frames;
        session_.send(error(code::kBadFrame, bad->what));
        return substitute(ActionProvenance::Error, bad->what);
      }
      const Message& m = std::get<Message>(*in);
      if (m.type != MessageType::Action) {
        session_.send(error(code::kUnexpected, "expected an action frame, got " + std::string(to_string(m.type))));
        continue;
      }
      if (m.payload["tick"].get<std::int64_t>() != tick_) continue;  // late answer to an earlier tick
      if (m.payload["match_id"] != match_id_) {
        ++st.malformed_frames;
        session_.send(error(code::kBadAction, "field 'payload.match_id': unknown match"));
        return substitute(ActionProvenance::Error, "wrong match_id");
      }
      try {
        return ActionReply::ok(action_from_json(game_, m.payload["action"]));
      } catch (const std::exception& e) {
        ++st.malformed_frames;
        session_.send(error(code::kBadAction, e.what()));
        return substitute(ActionProvenance::Error, e.what());
      }
    }
  }

  void end_tick(int tick, Centipoints reward, bool done) override {
    session_.send(step_result(tick, reward, done));
  }

  void end_episode(const EpisodeResult& result) override {
    const auto slot = static_cast<std::size_t>(session_.stats().slot);
    session_.send(episode_end(match_id_, to_string(result.termination), result.ticks_elapsed, result.total_rewards.at(slot)));
  }

 private:
  ActionReply substitute(ActionProvenance why, const std::string& detail) {
    auto& st = session_.stats();
    if (why == ActionProvenance::Timeout || why == ActionProvenance::Dropped) ++st.missed_ticks;
    ++st.substitutions;
    std::string line = "tick " + std::to_string(tick_) + " slot " + std::to_string(st.slot) + " " +
                       std::string(to_string(why)) + ": no-op substituted";
    if (!detail.empty()) line += " (" + detail + ")";
    log_.push_back(std::move(line));
    return ActionReply::substitute(why);
  }

  Session& session_;
  std::string match_id_;
  GameKind game_;
  std::vector<std::string>& log_;
  int tick_ = 0;
};

/// Refuses connections arriving after every slot is taken.
class LateRefuser {
 public:
  explicit LateRefuser(const Socket& listener) : listener_(listener) {
    thread_ = std::thread([this] {
      while (!stop_) {
        auto c = accept_client(listener_, 50ms);
        if (!c) continue;
        c->send_all(encode(error(code::kMatchFull, "all agent slots are taken")));
        c->shutdown();
      }
    });
  }
  ~LateRefuser() {
    stop_ = true;
    thread_.join();
  }
  LateRefuser(const LateRefuser&) = delete;
  LateRefuser& operator=(const LateRefuser&) = delete;

 private:
  const Socket& listener_;
  std::atomic<bool> stop_{false};
  std::thread thread_;
};

void refuse(Socket& s, std::string_view c, const std::string& message) {
  s.send_all(encode(error(c, message)));
  s.shutdown();
}

}  // namespace

SlotAssignment parse_slot_assignment(std::string_view s) {
  if (s == "remote") return SlotAssignment::remote();
  if (auto k = baselines::parse_baseline(s)) return SlotAssignment::with(*k);
  throw std::invalid_argument("unknown slot controller '" + std::string(s) + "' (expected remote or a baseline name)");
}

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::Handshaking: return "handshaking";
    case SessionState::Ready: return "ready";
    case SessionState::InEpisode: return "in_episode";
    case SessionState::Dropped: return "dropped";
  }
  return "?";
}

MatchServer::MatchServer(TaskSpec task, std::vector<SlotAssignment> slots, NetConfig config, std::uint64_t seed)
    : task_(std::move(task)), slots_(std::move(slots)), config_(std::move(config)), seed_(seed) {
  if (auto v = validate(task_); !v.empty()) throw InvalidTask(std::move(v));
  if (static_cast<int>(slots_.size()) != agent_count(task_))
    throw std::invalid_argument("task declares " + std::to_string(agent_count(task_)) + " agent slots, got " +
                                std::to_string(slots_.size()) + " assignments");
  for (const auto& s : slots_)
    if (s.baseline && !baselines::supports(*s.baseline, task_.game()))
      throw std::invalid_argument("baseline '" + std::string(baselines::to_string(*s.baseline)) + "' cannot play " +
                                  std::string(to_string(task_.game())));
  listener_ = listen_tcp(config_.listen);
  port_ = local_port(listener_);
  match_id_ = default_match_id(task_, seed_);
}

MatchServer::~MatchServer() = default;

ServeReport MatchServer::run() {
  ServeReport report;
  const int n = static_cast<int>(slots_.size());
  std::vector<std::unique_ptr<Session>> sessions(static_cast<std::size_t>(n));
  std::vector<int> open_slots;
  for (int i = 0; i < n; ++i)
    if (slots_[static_cast<std::size_t>(i)].is_remote()) open_slots.push_back(i);

  const auto handshake_deadline = Clock::now() + config_.handshake_timeout;
  std::size_t next_open = 0;
  while (next_open < open_slots.size()) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(handshake_deadline - Clock::now());
    if (left <= 0ms) {
      for (auto& s : sessions)
        if (s) s->send(error(code::kHandshakeTimeout, "not every remote slot connected in time"));
      throw MatchAborted("handshake timeout: " + std::to_string(next_open) + " of " +
                         std::to_string(open_slots.size()) + " remote slots filled");
    }
    auto conn = accept_client(listener_, left);
    if (!conn) continue;
    LineReader reader(kMaxFrameBytes);
    auto r = reader.next(*conn, std::min(left, std::chrono::milliseconds(2000)));
    auto* line = std::get_if<std::string>(&r);
    if (!line) {
      refuse(*conn, code::kBadFrame, "expected a hello frame");
      continue;
    }
    Message m;
    try {
      m = decode(*line);
    } catch (const DecodeError& e) {
      refuse(*conn, code::kBadFrame, e.what());
      continue;
    }
    if (m.type != MessageType::Hello) {
      refuse(*conn, code::kUnexpected, "expected hello");
      continue;
    }
    if (m.protocol_version != kProtocolVersion) {
      refuse(*conn, code::kUnsupportedVersion,
             "server speaks protocol_version " + std::to_string(kProtocolVersion) + ", client sent " +
                 std::to_string(m.protocol_version.value_or(0)));
      continue;
    }
    if (config_.token && m.payload.value("token", std::string{}) != *config_.token) {
      refuse(*conn, code::kUnauthorized, "bad or missing token");
      continue;
    }
    const int slot = open_slots[next_open++];
    auto session = std::make_unique<Session>(std::move(*conn), std::move(reader), slot,
                                             m.payload["entry_name"].get<std::string>());
    session->send(welcome(slot, match_id_, to_string(task_.game()), n, to_json(task_),
                          static_cast<int>(config_.action_timeout.count())));
    report.log.push_back("slot " + std::to_string(slot) + " <- '" + session->stats().entry_name + "'");
    sessions[static_cast<std::size_t>(slot)] = std::move(session);
  }

  LateRefuser refuser(listener_);
  std::vector<std::unique_ptr<ActionSource>> owned;
  std::vector<ActionSource*> sources;
  for (int i = 0; i < n; ++i) {
    const auto slot = static_cast<std::size_t>(i);
    if (sessions[slot]) {
      sessions[slot]->start();
      owned.push_back(std::make_unique<RemoteSource>(*sessions[slot], match_id_, task_.game(), report.log));
    } else {
      owned.push_back(std::make_unique<baselines::BaselineSource>(*slots_[slot].baseline));
    }
    sources.push_back(owned.back().get());
  }

  EpisodeOptions options;
  options.action_timeout = config_.action_timeout;
  options.match_id = match_id_;
  EpisodeOutput out = run_episode(task_, sources, seed_, options);

  const Message end = match_end(match_id_, out.result.total_rewards);
  for (auto& s : sessions) {
    if (!s) continue;
    const bool was_dropped = s->dropped();
    s->send(end);
    s->finish(1000ms);
    s->stats().state = was_dropped ? SessionState::Dropped : SessionState::Ready;
    report.sessions.push_back(s->stats());
  }
  report.result = out.result;
  report.record = std::move(out.record);
  return report;
}

}  // namespace marlo::protocol
