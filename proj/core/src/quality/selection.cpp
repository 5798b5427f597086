#include "counselforge/quality/selection.hpp"

#include <algorithm>

namespace counselforge::quality {

SelectionResult select_top(const std::vector<std::string>& session_ids,
                           const std::map<std::string, QualityScore>& scores,
                           const SelectionPolicy& policy) {
  if (policy.top_k.has_value() == policy.min_mean.has_value()) {
    throw PreconditionError("selection policy needs exactly one of top_k or min_mean");
  }
  struct Ranked {
    std::string id;
    double mean;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(session_ids.size());
  for (const auto& id : session_ids) {
    auto it = scores.find(id);
    if (it == scores.end()) throw UnscoredSession("session has no quality score: " + id);
    ranked.push_back(Ranked{id, it->second.mean()});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.mean != b.mean) return a.mean > b.mean;
    return a.id < b.id;
  });

  SelectionResult result;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const bool keep = policy.top_k ? i < *policy.top_k : ranked[i].mean >= *policy.min_mean;
    (keep ? result.kept : result.dropped).push_back(ranked[i].id);
  }
  return result;
}

}  // namespace counselforge::quality
