#include "counselforge/gateway/gateway.hpp"

#include <cstdlib>
#include <thread>

#include "counselforge/common/errors.hpp"
#include "counselforge/gateway/remote_backend.hpp"
#include "counselforge/gateway/scripted_backend.hpp"

namespace counselforge::gateway {

namespace {

std::string describe(const TransportReply& reply) {
  std::string s = reply.status == 0 ? "no response" : "HTTP " + std::to_string(reply.status);
  if (!reply.error.empty()) s += ": " + reply.error;
  return s;
}

}  // namespace

std::shared_ptr<Transport> make_transport(const BackendConfig& config) {
  validate(config);
  switch (config.kind) {
    case BackendKind::scripted:
      return ScriptedBackend::from_file(config.fixture);
    case BackendKind::replay:
      return std::make_shared<ReplayBackend>(config.fixture);
    case BackendKind::remote: {
      const char* key = std::getenv(config.auth_ref.c_str());
      if (key == nullptr || *key == '\0') {
        throw ConfigError("environment variable " + config.auth_ref +
                          " (auth_ref) is not set");
      }
      return std::make_shared<RemoteBackend>(config.endpoint, key, config.timeout);
    }
  }
  throw ConfigError("unsupported backend kind");
}

Gateway::Gateway(BackendConfig config, MonotonicClock clock)
    : Gateway(config, make_transport(config), std::move(clock)) {}

Gateway::Gateway(BackendConfig config, std::shared_ptr<Transport> transport,
                 MonotonicClock clock)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      clock_(std::move(clock)),
      limiter_(config_.rate_limit) {
  if (config_.retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
}

ChatResponse Gateway::complete(const ChatRequest& request) {
  validate(request);
  const auto started = clock_();
  const int max_attempts = config_.retry.max_attempts;
  for (int attempt = 1;; ++attempt) {
    limiter_.acquire();
    ++calls_;
    TransportReply reply = transport_->send(request);
    if (reply.malformed) throw PermanentRejection(describe(reply), reply.status);

    switch (classify_status(reply.status)) {
      case FailureClass::none: {
        ChatResponse response{std::move(reply.content), reply.finish_reason, attempt,
                              std::chrono::duration_cast<std::chrono::milliseconds>(
                                  clock_() - started)};
        std::shared_ptr<FixtureRecorder> recorder;
        {
          std::lock_guard lock(recorder_mu_);
          recorder = recorder_;
        }
        if (recorder) recorder->append(request, response);
        return response;
      }
      case FailureClass::permanent:
        throw PermanentRejection(describe(reply), reply.status);
      case FailureClass::transient:
        if (attempt >= max_attempts) {
          throw TransientExhausted("giving up after " + std::to_string(attempt) +
                                       " attempts: " + describe(reply),
                                   attempt);
        }
        std::this_thread::sleep_for(config_.retry.backoff_after(attempt));
        break;
    }
  }
}

void Gateway::record_to(const std::filesystem::path& fixture) {
  std::lock_guard lock(recorder_mu_);
  recorder_ = std::make_shared<FixtureRecorder>(fixture);
}

ChatRequest Gateway::make_request(std::vector<ChatMessage> messages,
                                  double temperature) const {
  ChatRequest r;
  r.model_id = config_.model;
  r.messages = std::move(messages);
  r.temperature = temperature;
  return r;
}

ChatResponse complete(const ChatRequest& request, const BackendConfig& config) {
  Gateway gw(config);
  return gw.complete(request);
}

std::vector<ChatResponse> record(std::span<const ChatRequest> requests,
                                 const BackendConfig& config,
                                 const std::filesystem::path& fixture) {
  std::error_code ec;
  std::filesystem::remove(fixture, ec);
  Gateway gw(config);
  gw.record_to(fixture);
  std::vector<ChatResponse> out;
  out.reserve(requests.size());
  for (const auto& r : requests) out.push_back(gw.complete(r));
  return out;
}

GatewayPool::GatewayPool(MonotonicClock clock) : clock_(std::move(clock)) {}

std::string GatewayPool::key_of(const BackendConfig& config) {
  return to_json(config).dump();
}

std::shared_ptr<Gateway> GatewayPool::get(const BackendConfig& config) {
  std::lock_guard lock(mu_);
  auto& slot = gateways_[key_of(config)];
  if (!slot) slot = std::make_shared<Gateway>(config, clock_);
  return slot;
}

void GatewayPool::put(const BackendConfig& config, std::shared_ptr<Gateway> gateway) {
  std::lock_guard lock(mu_);
  gateways_[key_of(config)] = std::move(gateway);
}

std::size_t GatewayPool::total_backend_calls() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [_, gw] : gateways_) n += gw->backend_calls();
  return n;
}

}  // namespace counselforge::gateway
