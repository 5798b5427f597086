#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>

#include "counselforge/common/errors.hpp"

namespace counselforge::quality {

/// Judge output that does not follow the rubric's answer grammar.
class JudgeParseError : public Error {
 public:
  using Error::Error;
};

struct ScoreField {
  std::string key;
  double min = 0;
  double max = 10;
  /// 0 means integers only.
  int max_decimals = 0;
};

struct JudgeFields {
  std::map<std::string, double> scores;
  std::string rationale;
};

/// Strict reader for judge answers of the form
///   key: N <sep> key: N <sep> ... [rationale: free text]
/// where <sep> is any run of whitespace, ',', ';' or '/'. Every field in
/// `fields` must appear exactly once (keys are case-insensitive); a value may
/// carry a "/10" suffix. Unknown keys, duplicates, stray text, values with
/// too many decimals or out of range all throw JudgeParseError. Nothing is
/// ever defaulted.
JudgeFields parse_judge_fields(std::string_view output, std::span<const ScoreField> fields);

}  // namespace counselforge::quality
