#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace counselforge::gateway {

enum class BackendKind { remote, scripted, replay };

std::string_view to_string(BackendKind kind);
BackendKind backend_kind_from_string(std::string_view name);

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_backoff{250};
  std::chrono::milliseconds max_backoff{8000};

  /// Delay before attempt `attempt + 1`, given `attempt` (1-based) just failed.
  std::chrono::milliseconds backoff_after(int attempt) const;
};

struct BackendConfig {
  BackendKind kind = BackendKind::scripted;
  /// Model id placed in requests built from this config.
  std::string model = "default";
  /// Full chat-completions URL (remote only).
  std::string endpoint;
  /// Name of the environment variable holding the API key (remote only).
  std::string auth_ref;
  /// Scripted rules or replay recording (scripted/replay only).
  std::filesystem::path fixture;
  /// Requests per second; 0 disables limiting.
  double rate_limit = 0.0;
  RetryPolicy retry;
  std::chrono::milliseconds timeout{60000};
};

/// Throws ConfigError when the config is incomplete for its kind.
void validate(const BackendConfig& config);

/// Fixture paths are resolved against `base_dir` when relative.
BackendConfig backend_config_from_json(const nlohmann::json& j,
                                       const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const BackendConfig& config);

}  // namespace counselforge::gateway
