#pragma once

#include <string>

#include "counselforge/gateway/chat.hpp"

namespace counselforge::gateway {

/// One delivery attempt's raw outcome. `status` follows HTTP semantics;
/// 0 means no response at all (connect failure, timeout).
struct TransportReply {
  int status = 200;
  std::string content;
  FinishReason finish_reason = FinishReason::stop;
  std::string error;
  /// Delivered but unreadable; never retried.
  bool malformed = false;
};

enum class FailureClass { none, transient, permanent };

/// 2xx: none. 0, 408, 425, 429, 5xx: transient. Everything else: permanent.
FailureClass classify_status(int status);

class Transport {
 public:
  virtual ~Transport() = default;
  /// May throw FixtureMiss; other failures are reported through the reply.
  virtual TransportReply send(const ChatRequest& request) = 0;
};

}  // namespace counselforge::gateway
