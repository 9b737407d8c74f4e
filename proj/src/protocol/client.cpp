#include "marlo/protocol/client.hpp"

namespace marlo::protocol {

Client Client::connect(const Endpoint& server, const std::string& entry_name, std::optional<std::string> token,
                       int protocol_version, std::chrono::milliseconds timeout) {
  Client c(connect_tcp(server, timeout));
  c.send(hello(entry_name, std::move(token), protocol_version));
  auto m = c.receive(timeout);
  if (!m) throw ClientError("timeout", "no welcome within " + std::to_string(timeout.count()) + " ms");
  if (m->type == MessageType::Error)
    throw ClientError(m->payload["code"].get<std::string>(), m->payload["message"].get<std::string>());
  if (m->type != MessageType::Welcome)
    throw ClientError(std::string(code::kUnexpected), "expected welcome, got " + std::string(to_string(m->type)));
  c.welcome_ = m->payload;
  c.slot_ = m->payload["agent_slot"].get<int>();
  c.match_id_ = m->payload["match_id"].get<std::string>();
  const auto game = parse_game(m->payload["game"].get<std::string>());
  if (!game) throw ClientError("unsupported_game", "server offered unknown game");
  c.game_ = *game;
  return c;
}

std::optional<Message> Client::receive(std::chrono::milliseconds timeout) {
  auto r = reader_.next(sock_, timeout);
  if (std::holds_alternative<LineReader::Timeout>(r)) return std::nullopt;
  if (std::holds_alternative<LineReader::Closed>(r)) throw ClientError("closed", "server closed the connection");
  if (std::holds_alternative<LineReader::Oversize>(r)) throw ClientError(std::string(code::kBadFrame), "oversize frame from server");
  try {
    return decode(std::get<std::string>(r));
  } catch (const DecodeError& e) {
    throw ClientError(std::string(code::kBadFrame), e.what());
  }
}

void Client::send(const Message& m) { send_raw(encode(m)); }

void Client::send_raw(std::string_view bytes) {
  if (!sock_.send_all(bytes)) throw ClientError("closed", "server closed the connection");
}

void Client::send_action(int tick, const Action& a) { send(action(match_id_, tick, action_to_json(a))); }

AgentRun run_agent(Client& client, const AgentPolicy& policy, std::chrono::milliseconds idle_timeout) {
  AgentRun run;
  for (;;) {
    auto m = client.receive(idle_timeout);
    if (!m) throw ClientError("timeout", "server went quiet");
    switch (m->type) {
      case MessageType::Observation: {
        const int tick = m->payload["tick"].get<int>();
        const Observation obs = observation_from_json(client.game(), m->payload["view"]);
        if (auto a = policy(obs, tick)) client.send_action(tick, *a);
        break;
      }
      case MessageType::StepResult:
        run.cumulative += points_field(m->payload, "reward");
        run.ticks = m->payload["tick"].get<int>();
        break;
      case MessageType::MatchEnd:
        for (const auto& s : m->payload["scores"]) run.match_scores.push_back(Centipoints::from_points(s.get<double>()));
        return run;
      case MessageType::Error:
        run.errors.push_back(*m);
        break;
      default:
        break;
    }
  }
}

}  // namespace marlo::protocol
