#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace counselforge::gateway {

enum class Role { system, user, assistant };

std::string_view to_string(Role role);
Role role_from_string(std::string_view name);

struct ChatMessage {
  Role role = Role::user;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// Creative generation runs warm; judging runs at zero temperature.
inline constexpr double kGenerationTemperature = 0.9;
inline constexpr double kJudgeTemperature = 0.0;

struct ChatRequest {
  std::string model_id;
  std::vector<ChatMessage> messages;
  double temperature = kGenerationTemperature;
  int max_tokens = 1024;
  std::optional<std::int64_t> seed;

  friend bool operator==(const ChatRequest&, const ChatRequest&) = default;
};

enum class FinishReason { stop, length, error };

std::string_view to_string(FinishReason reason);
FinishReason finish_reason_from_string(std::string_view name);

struct ChatResponse {
  std::string content;
  FinishReason finish_reason = FinishReason::stop;
  int attempts = 1;
  std::chrono::milliseconds latency{0};
};

/// Throws InvalidRequest unless: messages non-empty, every content non-empty,
/// at most one system message and only in first position, temperature in
/// [0, 2], max_tokens > 0.
void validate(const ChatRequest& request);

/// SHA-256 over a canonical (key-sorted, compact) JSON serialization of the
/// request. Stable across runs and field orderings.
std::string fingerprint(const ChatRequest& request);

void to_json(nlohmann::json& j, const ChatMessage& m);
void from_json(const nlohmann::json& j, ChatMessage& m);
void to_json(nlohmann::json& j, const ChatRequest& r);
void from_json(const nlohmann::json& j, ChatRequest& r);
/// Only content and finish_reason are serialized; attempts and latency are
/// properties of one delivery, not of the response.
void to_json(nlohmann::json& j, const ChatResponse& r);
void from_json(const nlohmann::json& j, ChatResponse& r);

}  // namespace counselforge::gateway
