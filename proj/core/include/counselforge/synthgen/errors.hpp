#pragma once

#include "counselforge/common/errors.hpp"

namespace counselforge::synthgen {

/// Model output did not fit the requested schema within the retry budget.
class GenerationParseError : public Error {
 public:
  using Error::Error;
};

class UnknownDistortion : public Error {
 public:
  using Error::Error;
};

/// Synthesized session turn count outside the configured bounds.
class LengthViolation : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

}  // namespace counselforge::synthgen
