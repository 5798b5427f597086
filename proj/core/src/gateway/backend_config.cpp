#include "counselforge/gateway/backend_config.hpp"

#include <algorithm>

#include "counselforge/common/errors.hpp"

namespace counselforge::gateway {

using nlohmann::json;

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::remote: return "remote";
    case BackendKind::scripted: return "scripted";
    case BackendKind::replay: return "replay";
  }
  return "scripted";
}

BackendKind backend_kind_from_string(std::string_view name) {
  if (name == "remote") return BackendKind::remote;
  if (name == "scripted") return BackendKind::scripted;
  if (name == "replay") return BackendKind::replay;
  throw ConfigError("unknown backend kind: " + std::string(name));
}

std::chrono::milliseconds RetryPolicy::backoff_after(int attempt) const {
  if (attempt < 1) attempt = 1;
  // Cap the shift so large attempt counts cannot overflow.
  const int shift = std::min(attempt - 1, 30);
  const auto raw = base_backoff.count() * (std::int64_t{1} << shift);
  return std::chrono::milliseconds{std::min<std::int64_t>(raw, max_backoff.count())};
}

void validate(const BackendConfig& config) {
  if (config.retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
  if (config.retry.base_backoff.count() < 0) throw ConfigError("retry.base_backoff must be >= 0");
  if (config.rate_limit < 0) throw ConfigError("rate_limit must be >= 0");
  switch (config.kind) {
    case BackendKind::remote:
      if (config.endpoint.empty()) throw ConfigError("remote backend requires endpoint");
      if (config.auth_ref.empty()) throw ConfigError("remote backend requires auth_ref");
      break;
    case BackendKind::scripted:
    case BackendKind::replay:
      if (config.fixture.empty()) {
        throw ConfigError(std::string(to_string(config.kind)) +
                          " backend requires a fixture path");
      }
      break;
  }
}

BackendConfig backend_config_from_json(const json& j,
                                       const std::filesystem::path& base_dir) {
  BackendConfig c;
  try {
    c.kind = backend_kind_from_string(j.at("kind").get<std::string>());
    c.model = j.value("model", c.model);
    c.endpoint = j.value("endpoint", std::string{});
    c.auth_ref = j.value("auth_ref", std::string{});
    if (j.contains("fixture")) {
      std::filesystem::path p = j.at("fixture").get<std::string>();
      c.fixture = (p.is_relative() && !base_dir.empty()) ? base_dir / p : p;
    }
    c.rate_limit = j.value("rate_limit", 0.0);
    c.timeout = std::chrono::milliseconds{j.value("timeout_ms", c.timeout.count())};
    if (j.contains("retry")) {
      const auto& r = j.at("retry");
      c.retry.max_attempts = r.value("max_attempts", c.retry.max_attempts);
      c.retry.base_backoff =
          std::chrono::milliseconds{r.value("base_backoff_ms", c.retry.base_backoff.count())};
      c.retry.max_backoff =
          std::chrono::milliseconds{r.value("max_backoff_ms", c.retry.max_backoff.count())};
    }
    if (j.contains("api_key")) {
      throw ConfigError("credentials must not appear in config; set auth_ref to an environment variable name");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("backend config: ") + e.what());
  }
  validate(c);
  return c;
}

json to_json(const BackendConfig& c) {
  json j{{"kind", to_string(c.kind)},
         {"model", c.model},
         {"rate_limit", c.rate_limit},
         {"timeout_ms", c.timeout.count()},
         {"retry",
          {{"max_attempts", c.retry.max_attempts},
           {"base_backoff_ms", c.retry.base_backoff.count()},
           {"max_backoff_ms", c.retry.max_backoff.count()}}}};
  if (!c.endpoint.empty()) j["endpoint"] = c.endpoint;
  if (!c.auth_ref.empty()) j["auth_ref"] = c.auth_ref;
  if (!c.fixture.empty()) j["fixture"] = c.fixture.string();
  return j;
}

}  // namespace counselforge::gateway
