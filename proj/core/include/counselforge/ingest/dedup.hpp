#pragma once

#include <string>
#include <vector>

#include "counselforge/ingest/session.hpp"

namespace counselforge::ingest {

struct DuplicateRecord {
  std::string dropped_id;
  std::string kept_id;
  double similarity = 0.0;

  friend bool operator==(const DuplicateRecord&, const DuplicateRecord&) = default;
};

struct DedupResult {
  std::vector<SessionTranscript> kept;
  std::vector<DuplicateRecord> dropped;
};

inline constexpr std::size_t kShingleWords = 4;

/// Near-duplicate removal by Jaccard similarity of 4-word shingles over each
/// session's text. Sessions are visited in session_id order; a session is
/// dropped when it reaches `threshold` against any already-kept session and
/// cites the first such session (in id order). Candidate pairs come from an
/// inverted shingle index, so sessions sharing nothing are never compared.
///
/// Preconditions: ids unique, threshold in (0, 1].
DedupResult dedup(const std::vector<SessionTranscript>& corpus, double threshold);

}  // namespace counselforge::ingest
