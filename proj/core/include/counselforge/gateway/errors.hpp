#pragma once

#include "counselforge/common/errors.hpp"

namespace counselforge::gateway {

class GatewayError : public Error {
 public:
  using Error::Error;
};

class InvalidRequest : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

/// Every attempt failed with a retryable condition.
class TransientExhausted : public GatewayError {
 public:
  TransientExhausted(const std::string& what, int attempts)
      : GatewayError(what), attempts_(attempts) {}
  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

/// Non-retryable failure: auth, malformed request or response.
class PermanentRejection : public GatewayError {
 public:
  PermanentRejection(const std::string& what, int status)
      : GatewayError(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// Scripted or replay backend has nothing for this request.
class FixtureMiss : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

}  // namespace counselforge::gateway
