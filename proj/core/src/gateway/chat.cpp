#include "counselforge/gateway/chat.hpp"

#include "counselforge/common/hashing.hpp"
#include "counselforge/gateway/errors.hpp"

namespace counselforge::gateway {

using nlohmann::json;

std::string_view to_string(Role role) {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

Role role_from_string(std::string_view name) {
  if (name == "system") return Role::system;
  if (name == "user") return Role::user;
  if (name == "assistant") return Role::assistant;
  throw InvalidRequest("unknown role: " + std::string(name));
}

std::string_view to_string(FinishReason reason) {
  switch (reason) {
    case FinishReason::stop: return "stop";
    case FinishReason::length: return "length";
    case FinishReason::error: return "error";
  }
  return "error";
}

FinishReason finish_reason_from_string(std::string_view name) {
  if (name == "stop") return FinishReason::stop;
  if (name == "length") return FinishReason::length;
  return FinishReason::error;
}

void validate(const ChatRequest& request) {
  if (request.messages.empty()) throw InvalidRequest("request has no messages");
  for (std::size_t i = 0; i < request.messages.size(); ++i) {
    const auto& m = request.messages[i];
    if (m.content.empty()) {
      throw InvalidRequest("message " + std::to_string(i) + " has empty content");
    }
    if (m.role == Role::system && i != 0) {
      throw InvalidRequest("system message must come first and appear once");
    }
  }
  if (!(request.temperature >= 0.0 && request.temperature <= 2.0)) {
    throw InvalidRequest("temperature outside [0, 2]");
  }
  if (request.max_tokens <= 0) throw InvalidRequest("max_tokens must be positive");
}

std::string fingerprint(const ChatRequest& request) {
  json canonical = request;  // nlohmann objects keep keys sorted
  return sha256_hex(canonical.dump());
}

void to_json(json& j, const ChatMessage& m) {
  j = json{{"role", to_string(m.role)}, {"content", m.content}};
}

void from_json(const json& j, ChatMessage& m) {
  m.role = role_from_string(j.at("role").get<std::string>());
  m.content = j.at("content").get<std::string>();
}

void to_json(json& j, const ChatRequest& r) {
  j = json{{"model_id", r.model_id},
           {"messages", r.messages},
           {"temperature", r.temperature},
           {"max_tokens", r.max_tokens},
           {"seed", r.seed ? json(*r.seed) : json(nullptr)}};
}

void from_json(const json& j, ChatRequest& r) {
  r.model_id = j.at("model_id").get<std::string>();
  r.messages = j.at("messages").get<std::vector<ChatMessage>>();
  r.temperature = j.at("temperature").get<double>();
  r.max_tokens = j.at("max_tokens").get<int>();
  if (j.contains("seed") && !j.at("seed").is_null()) {
    r.seed = j.at("seed").get<std::int64_t>();
  } else {
    r.seed.reset();
  }
}

void to_json(json& j, const ChatResponse& r) {
  j = json{{"content", r.content}, {"finish_reason", to_string(r.finish_reason)}};
}

void from_json(const json& j, ChatResponse& r) {
  r.content = j.at("content").get<std::string>();
  r.finish_reason =
      finish_reason_from_string(j.value("finish_reason", std::string("stop")));
  r.attempts = 1;
  r.latency = std::chrono::milliseconds{0};
}

}  // namespace counselforge::gateway
