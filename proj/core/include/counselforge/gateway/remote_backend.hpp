#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "counselforge/gateway/transport.hpp"

namespace counselforge::gateway {

/// HTTP(S) chat-completions client: POSTs {model, messages, temperature,
/// max_tokens[, seed]} and reads choices[0].message.content.
class RemoteBackend final : public Transport {
 public:
  RemoteBackend(std::string endpoint, std::string api_key,
                std::chrono::milliseconds timeout);
  ~RemoteBackend() override;

  TransportReply send(const ChatRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace counselforge::gateway
