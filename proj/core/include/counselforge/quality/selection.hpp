#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "counselforge/common/errors.hpp"
#include "counselforge/quality/scoring.hpp"

namespace counselforge::quality {

class UnscoredSession : public Error {
 public:
  using Error::Error;
};

/// Rank by mean of the three judge dimensions, then keep either the top `k`
/// or everything whose mean reaches `min_mean`.
struct SelectionPolicy {
  std::optional<std::size_t> top_k;
  std::optional<double> min_mean;
};

struct SelectionResult {
  /// Both lists are in rank order: mean descending, session_id ascending.
  std::vector<std::string> kept;
  std::vector<std::string> dropped;
};

/// `session_ids` is the corpus; every id needs an entry in `scores` or
/// UnscoredSession is thrown. Exactly one policy field must be set.
SelectionResult select_top(const std::vector<std::string>& session_ids,
                           const std::map<std::string, QualityScore>& scores,
                           const SelectionPolicy& policy);

}  // namespace counselforge::quality
