#include "counselforge/gateway/remote_backend.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "counselforge/gateway/errors.hpp"

namespace counselforge::gateway {

using nlohmann::json;

struct RemoteBackend::Impl {
  std::string base;  // scheme://host[:port]
  std::string path;
  std::string api_key;
  std::chrono::milliseconds timeout;
};

RemoteBackend::RemoteBackend(std::string endpoint, std::string api_key,
                             std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>()) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw InvalidRequest("endpoint must be an absolute URL: " + endpoint);
  }
  auto path_start = endpoint.find('/', scheme_end + 3);
  impl_->base = endpoint.substr(0, path_start);
  impl_->path = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
  impl_->api_key = std::move(api_key);
  impl_->timeout = timeout;
}

RemoteBackend::~RemoteBackend() = default;

TransportReply RemoteBackend::send(const ChatRequest& request) {
  json body{{"model", request.model_id},
            {"messages", request.messages},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens}};
  if (request.seed) body["seed"] = *request.seed;

  httplib::Client client(impl_->base);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(impl_->timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(impl_->timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  httplib::Headers headers{{"Authorization", "Bearer " + impl_->api_key}};

  auto res = client.Post(impl_->path, headers, body.dump(), "application/json");
  TransportReply reply;
  if (!res) {
    reply.status = 0;
    reply.error = httplib::to_string(res.error());
    return reply;
  }
  reply.status = res->status;
  if (res->status < 200 || res->status >= 300) {
    reply.error = res->body.substr(0, 512);
    return reply;
  }
  try {
    auto parsed = json::parse(res->body);
    const auto& choice = parsed.at("choices").at(0);
    reply.content = choice.at("message").at("content").get<std::string>();
    reply.finish_reason = finish_reason_from_string(
        choice.value("finish_reason", std::string("stop")));
  } catch (const json::exception& e) {
    reply.malformed = true;
    reply.error = std::string("malformed completion body: ") + e.what();
  }
  return reply;
}

}  // namespace counselforge::gateway
