#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "counselforge/ingest/session.hpp"

namespace counselforge::ingest {

struct FilterLimits {
  std::size_t min_turns = 6;
  std::size_t min_chars_per_turn = 20;
  /// Share of characters inside [stage directions] or (asides).
  double max_non_dialogue_ratio = 0.2;
};

struct FilterVerdict {
  bool pass = true;
  /// "too_few_turns", "short_turn:<index>", "non_dialogue_ratio".
  std::vector<std::string> reasons;
};

double non_dialogue_ratio(const SessionTranscript& session);

FilterVerdict quality_filter(const SessionTranscript& session, const FilterLimits& limits = {});

/// Adds lightweight cue annotations: counselor question count, emotion terms
/// mentioned by the client, intervention cues used by the counselor.
void annotate(SessionTranscript& session);

}  // namespace counselforge::ingest
