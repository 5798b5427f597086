#pragma once

#include "counselforge/common/errors.hpp"

namespace counselforge::ingest {

/// Input does not match its declared format.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A session violates a SessionTranscript invariant.
class InvalidSession : public Error {
 public:
  using Error::Error;
};

/// Fewer than two turns, or speakers that do not alternate.
class AlternationError : public InvalidSession {
 public:
  using InvalidSession::InvalidSession;
};

class PatternError : public Error {
 public:
  using Error::Error;
};

}  // namespace counselforge::ingest
