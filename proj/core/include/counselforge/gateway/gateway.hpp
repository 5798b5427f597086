#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "counselforge/common/clock.hpp"
#include "counselforge/gateway/backend_config.hpp"
#include "counselforge/gateway/chat.hpp"
#include "counselforge/gateway/errors.hpp"
#include "counselforge/gateway/rate_limiter.hpp"
#include "counselforge/gateway/replay.hpp"
#include "counselforge/gateway/transport.hpp"

namespace counselforge::gateway {

/// Chat-completion front door shared by every pipeline stage. Owns the
/// transport for one BackendConfig plus its rate limiter, applies the retry
/// policy and optionally records every successful exchange. Thread-safe.
class Gateway {
 public:
  explicit Gateway(BackendConfig config,
                   MonotonicClock clock = system_monotonic_clock());
  Gateway(BackendConfig config, std::shared_ptr<Transport> transport,
          MonotonicClock clock = system_monotonic_clock());

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  /// Validates, rate-limits and sends `request`, retrying transient failures
  /// with exponential backoff. Throws InvalidRequest, TransientExhausted,
  /// PermanentRejection or FixtureMiss.
  ChatResponse complete(const ChatRequest& request);

  /// Starts appending every successful exchange to `fixture`.
  void record_to(const std::filesystem::path& fixture);

  const BackendConfig& config() const noexcept { return config_; }
  /// Transport invocations so far, including failed attempts.
  std::size_t backend_calls() const noexcept { return calls_.load(); }
  Transport& transport() noexcept { return *transport_; }

  /// Convenience for building a request against this backend's model.
  ChatRequest make_request(std::vector<ChatMessage> messages,
                           double temperature) const;

 private:
  BackendConfig config_;
  std::shared_ptr<Transport> transport_;
  MonotonicClock clock_;
  RateLimiter limiter_;
  std::atomic<std::size_t> calls_{0};
  std::mutex recorder_mu_;
  std::shared_ptr<FixtureRecorder> recorder_;
};

/// Builds the transport for `config` (reading fixtures, resolving the
/// credential from the environment).
std::shared_ptr<Transport> make_transport(const BackendConfig& config);

/// One-shot completion through a fresh gateway.
ChatResponse complete(const ChatRequest& request, const BackendConfig& config);

/// Sends `requests` in order through `config`'s backend, writing every
/// exchange to `fixture` (truncated first). Returns the responses.
std::vector<ChatResponse> record(std::span<const ChatRequest> requests,
                                 const BackendConfig& config,
                                 const std::filesystem::path& fixture);

/// Hands out one shared Gateway per distinct BackendConfig so rate limits and
/// scripted state are shared by every caller using the same backend.
class GatewayPool {
 public:
  explicit GatewayPool(MonotonicClock clock = system_monotonic_clock());

  std::shared_ptr<Gateway> get(const BackendConfig& config);
  /// Registers a pre-built gateway for `config` (tests, custom transports).
  void put(const BackendConfig& config, std::shared_ptr<Gateway> gateway);
  std::size_t total_backend_calls() const;

 private:
  static std::string key_of(const BackendConfig& config);
  MonotonicClock clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Gateway>> gateways_;
};

}  // namespace counselforge::gateway
