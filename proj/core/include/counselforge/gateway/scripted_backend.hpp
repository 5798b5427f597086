#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/gateway/transport.hpp"

namespace counselforge::gateway {

/// One canned behaviour. A rule applies when every present condition holds:
///  - `match`: substring of the request's concatenated message contents
///  - `message_count`: number of non-system messages in the request
/// Rules are tried in declaration order; the first applicable one answers.
struct ScriptRule {
  std::optional<std::string> match;
  std::optional<std::size_t> message_count;
  /// Served in order on successive hits; the last one repeats.
  std::vector<std::string> replies;
  /// The first `fail_times` hits answer with `fail_status` instead.
  int fail_times = 0;
  int fail_status = 503;
  FinishReason finish_reason = FinishReason::stop;
};

ScriptRule script_rule_from_json(const nlohmann::json& j);

struct ScriptedCall {
  std::chrono::steady_clock::time_point at;
  std::string fingerprint;
  std::optional<std::size_t> rule;
  int status = 0;
};

/// Deterministic in-process backend. Fixture file: JSON Lines of rules, e.g.
///   {"match": "persona 1 of 2", "reply": "{...}"}
///   {"message_count": 3, "replies": ["a", "b"], "fail_times": 1}
class ScriptedBackend final : public Transport {
 public:
  explicit ScriptedBackend(std::vector<ScriptRule> rules);
  static std::shared_ptr<ScriptedBackend> from_file(const std::filesystem::path& path);

  TransportReply send(const ChatRequest& request) override;

  std::vector<ScriptedCall> call_log() const;
  std::size_t call_count() const;

 private:
  struct RuleState {
    ScriptRule rule;
    std::size_t hits = 0;
  };
  mutable std::mutex mu_;
  std::vector<RuleState> rules_;
  std::vector<ScriptedCall> log_;
};

}  // namespace counselforge::gateway
