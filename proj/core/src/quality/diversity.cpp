#include "counselforge/quality/diversity.hpp"

#include "counselforge/common/errors.hpp"
#include "counselforge/common/text.hpp"
#include "counselforge/ingest/dedup.hpp"

namespace counselforge::quality {

DiversityReport corpus_diversity(const std::vector<ingest::SessionTranscript>& corpus) {
  if (corpus.size() < 2) throw PreconditionError("corpus_diversity needs at least 2 sessions");
  std::vector<std::vector<std::string>> shingles;
  shingles.reserve(corpus.size());
  for (const auto& s : corpus) {
    shingles.push_back(text::word_shingles(ingest::session_text(s), ingest::kShingleWords));
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < shingles.size(); ++i) {
    for (std::size_t j = i + 1; j < shingles.size(); ++j) {
      sum += text::jaccard(shingles[i], shingles[j]);
      ++pairs;
    }
  }
  DiversityReport r;
  r.corpus_size = corpus.size();
  r.mean_pairwise_similarity = sum / static_cast<double>(pairs);
  r.diversity = 1.0 - r.mean_pairwise_similarity;
  return r;
}

void to_json(nlohmann::json& j, const DiversityReport& r) {
  j = nlohmann::json{{"corpus_size", r.corpus_size},
                     {"mean_pairwise_similarity", r.mean_pairwise_similarity},
                     {"diversity", r.diversity}};
}

}  // namespace counselforge::quality
