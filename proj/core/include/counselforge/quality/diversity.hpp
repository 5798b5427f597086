#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/ingest/session.hpp"

namespace counselforge::quality {

struct DiversityReport {
  std::size_t corpus_size = 0;
  double mean_pairwise_similarity = 0.0;
  /// 1 - mean_pairwise_similarity.
  double diversity = 1.0;
};

/// Mean 4-word-shingle Jaccard similarity over all unordered session pairs.
/// Needs at least two sessions (PreconditionError otherwise).
DiversityReport corpus_diversity(const std::vector<ingest::SessionTranscript>& corpus);

void to_json(nlohmann::json& j, const DiversityReport& r);

}  // namespace counselforge::quality
