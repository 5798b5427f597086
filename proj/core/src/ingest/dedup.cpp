#include "counselforge/ingest/dedup.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "counselforge/common/errors.hpp"
#include "counselforge/common/text.hpp"

namespace counselforge::ingest {

DedupResult dedup(const std::vector<SessionTranscript>& corpus, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw PreconditionError("dedup threshold must be in (0, 1]");
  }
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus[a].session_id < corpus[b].session_id;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (corpus[order[i]].session_id == corpus[order[i - 1]].session_id) {
      throw PreconditionError("duplicate session_id in corpus: " + corpus[order[i]].session_id);
    }
  }

  DedupResult result;
  // Shingle -> positions (in result.kept) of kept sessions containing it.
  std::unordered_map<std::string, std::vector<std::size_t>> index;
  std::vector<std::size_t> kept_sizes;

  for (std::size_t idx : order) {
    const auto& session = corpus[idx];
    const auto shingles = text::word_shingles(session_text(session), kShingleWords);

    // Shared-shingle counts per kept session; pairs sharing nothing have
    // similarity 0 and can never reach a positive threshold.
    std::unordered_map<std::size_t, std::size_t> shared;
    for (const auto& sh : shingles) {
      auto it = index.find(sh);
      if (it == index.end()) continue;
      for (std::size_t k : it->second) ++shared[k];
    }
    std::set<std::size_t> candidates;
    for (const auto& [k, _] : shared) candidates.insert(k);

    bool duplicate = false;
    for (std::size_t k : candidates) {  // kept positions are already in id order
      const std::size_t inter = shared[k];
      const std::size_t uni = shingles.size() + kept_sizes[k] - inter;
      const double sim = static_cast<double>(inter) / static_cast<double>(uni);
      if (sim >= threshold) {
        result.dropped.push_back(
            DuplicateRecord{session.session_id, result.kept[k].session_id, sim});
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;

    const std::size_t pos = result.kept.size();
    result.kept.push_back(session);
    kept_sizes.push_back(shingles.size());
    for (const auto& sh : shingles) index[sh].push_back(pos);
  }
  return result;
}

}  // namespace counselforge::ingest
