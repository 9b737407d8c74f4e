#include "marlo/protocol/message.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace marlo::protocol {
namespace {

using nlohmann::json;

constexpr std::array kTypeNames{"hello",      "welcome",   "observation", "action", "step_result",
                                "episode_end", "match_end", "error",       "ping",   "pong"};

enum class Kind { Int, Number, String, Bool, Object, Array };

struct Field {
  std::string_view name;
  Kind kind;
  bool required = true;
};

const std::vector<Field>& schema(MessageType t) {
  static const std::array<std::vector<Field>, kTypeNames.size()> table{{
      {{"entry_name", Kind::String}, {"token", Kind::String, false}},
      {{"agent_slot", Kind::Int},
       {"match_id", Kind::String},
       {"game", Kind::String},
       {"num_agents", Kind::Int},
       {"task", Kind::Object},
       {"action_timeout_ms", Kind::Int}},
      {{"match_id", Kind::String},
       {"tick", Kind::Int},
       {"agent_slot", Kind::Int},
       {"view", Kind::Object},
       {"score_so_far", Kind::Number}},
      {{"match_id", Kind::String}, {"tick", Kind::Int}, {"action", Kind::Object}},
      {{"tick", Kind::Int}, {"reward", Kind::Number}, {"done", Kind::Bool}},
      {{"match_id", Kind::String}, {"termination", Kind::String}, {"ticks_elapsed", Kind::Int}, {"total_reward", Kind::Number}},
      {{"match_id", Kind::String}, {"scores", Kind::Array}},
      {{"code", Kind::String}, {"message", Kind::String}},
      {{"nonce", Kind::Int, false}},
      {{"nonce", Kind::Int, false}},
  }};
  return table.at(static_cast<std::size_t>(t));
}

bool matches(const json& v, Kind k) {
  switch (k) {
    case Kind::Int: return v.is_number_integer();
    case Kind::Number: return v.is_number();
    case Kind::String: return v.is_string();
    case Kind::Bool: return v.is_boolean();
    case Kind::Object: return v.is_object();
    case Kind::Array: return v.is_array();
  }
  return false;
}

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Int: return "integer";
    case Kind::Number: return "number";
    case Kind::String: return "string";
    case Kind::Bool: return "boolean";
    case Kind::Object: return "object";
    case Kind::Array: return "array";
  }
  return "?";
}

bool carries_version(MessageType t) { return t == MessageType::Hello || t == MessageType::Welcome; }

double points(Centipoints c) { return static_cast<double>(c.value()) / 100.0; }

}  // namespace

std::string_view to_string(MessageType t) { return kTypeNames.at(static_cast<std::size_t>(t)); }

std::optional<MessageType> parse_message_type(std::string_view s) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i)
    if (s == kTypeNames[i]) return static_cast<MessageType>(i);
  return std::nullopt;
}

std::string encode(const Message& m) {
  json j = {{"type", to_string(m.type)}, {"payload", m.payload}};
  if (m.protocol_version) j["protocol_version"] = *m.protocol_version;
  // dump() escapes control characters, so the frame has no interior newline.
  std::string out = j.dump();
  out += '\n';
  return out;
}

Message decode(std::string_view frame) {
  if (frame.size() > kMaxFrameBytes) throw DecodeError("frame", "exceeds 1 MiB");
  if (!frame.empty() && frame.back() == '\n') frame.remove_suffix(1);
  if (!frame.empty() && frame.back() == '\r') frame.remove_suffix(1);
  if (frame.find('\n') != std::string_view::npos) throw DecodeError("frame", "contains more than one line");
  json j;
  try {
    j = json::parse(frame);
  } catch (const json::parse_error& e) {
    throw DecodeError("frame", std::string("not a structured object: ") + e.what());
  }
  if (!j.is_object()) throw DecodeError("frame", "expected an object");
  for (const auto& [key, value] : j.items())
    if (key != "type" && key != "payload" && key != "protocol_version") throw DecodeError(key, "unknown field");
  if (!j.contains("type") || !j["type"].is_string()) throw DecodeError("type", "missing or not a string");
  const auto type = parse_message_type(j["type"].get<std::string>());
  if (!type) throw DecodeError("type", "unknown message type '" + j["type"].get<std::string>() + "'");

  Message m;
  m.type = *type;
  if (carries_version(m.type)) {
    if (!j.contains("protocol_version") || !j["protocol_version"].is_number_integer())
      throw DecodeError("protocol_version", "missing or not an integer");
    m.protocol_version = j["protocol_version"].get<int>();
  } else if (j.contains("protocol_version")) {
    throw DecodeError("protocol_version", "only allowed on hello and welcome");
  }
  if (!j.contains("payload") || !j["payload"].is_object()) throw DecodeError("payload", "missing or not an object");
  m.payload = j["payload"];

  const auto& fields = schema(m.type);
  for (const auto& [key, value] : m.payload.items()) {
    const bool known = std::any_of(fields.begin(), fields.end(), [&](const Field& f) { return f.name == key; });
    if (!known) throw DecodeError("payload." + key, "unknown field");
  }
  for (const Field& f : fields) {
    const std::string path = "payload." + std::string(f.name);
    auto it = m.payload.find(f.name);
    if (it == m.payload.end()) {
      if (f.required) throw DecodeError(path, "missing");
      continue;
    }
    if (!matches(*it, f.kind)) throw DecodeError(path, "expected " + std::string(kind_name(f.kind)));
  }
  return m;
}

Message hello(std::string_view entry_name, std::optional<std::string> token, int version) {
  Message m{MessageType::Hello, version, {{"entry_name", entry_name}}};
  if (token) m.payload["token"] = *token;
  return m;
}

Message welcome(int agent_slot, std::string_view match_id, std::string_view game, int num_agents, const json& task,
                int action_timeout_ms) {
  return {MessageType::Welcome,
          kProtocolVersion,
          {{"agent_slot", agent_slot},
           {"match_id", match_id},
           {"game", game},
           {"num_agents", num_agents},
           {"task", task},
           {"action_timeout_ms", action_timeout_ms}}};
}

Message observation(std::string_view match_id, int tick, int agent_slot, const json& view, Centipoints score_so_far) {
  return {MessageType::Observation,
          std::nullopt,
          {{"match_id", match_id}, {"tick", tick}, {"agent_slot", agent_slot}, {"view", view}, {"score_so_far", points(score_so_far)}}};
}

Message action(std::string_view match_id, int tick, const json& action) {
  return {MessageType::Action, std::nullopt, {{"match_id", match_id}, {"tick", tick}, {"action", action}}};
}

Message step_result(int tick, Centipoints reward, bool done) {
  return {MessageType::StepResult, std::nullopt, {{"tick", tick}, {"reward", points(reward)}, {"done", done}}};
}

Message episode_end(std::string_view match_id, std::string_view termination, int ticks_elapsed, Centipoints total) {
  return {MessageType::EpisodeEnd,
          std::nullopt,
          {{"match_id", match_id}, {"termination", termination}, {"ticks_elapsed", ticks_elapsed}, {"total_reward", points(total)}}};
}

Message match_end(std::string_view match_id, const std::vector<Centipoints>& scores) {
  json s = json::array();
  for (Centipoints c : scores) s.push_back(points(c));
  return {MessageType::MatchEnd, std::nullopt, {{"match_id", match_id}, {"scores", s}}};
}

Message error(std::string_view code, std::string_view message) {
  return {MessageType::Error, std::nullopt, {{"code", code}, {"message", message}}};
}

Message ping(std::int64_t nonce) { return {MessageType::Ping, std::nullopt, {{"nonce", nonce}}}; }
Message pong(std::int64_t nonce) { return {MessageType::Pong, std::nullopt, {{"nonce", nonce}}}; }

Centipoints points_field(const json& payload, std::string_view key) {
  const auto it = payload.find(key);
  if (it == payload.end() || !it->is_number()) throw DecodeError(std::string(key), "expected a number");
  return Centipoints::from_points(it->get<double>());
}

}  // namespace marlo::protocol
