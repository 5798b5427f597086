#pragma once

#include <map>
#include <string>

#include "counselforge/ingest/session.hpp"

namespace counselforge::ingest {

struct RawTranscript {
  std::string source_id;
  std::string title;
  std::string body;
};

enum class TranscriptFormat {
  /// Lines of "Speaker: text"; blank lines are ignored.
  speaker_lines,
  /// One SessionTranscript JSON object (corpus schema).
  structured,
};

/// Lowercased speaker label -> role.
using SpeakerAliases = std::map<std::string, Speaker>;

/// therapist/counselor/counsellor/assistant -> counselor,
/// patient/client/user -> client.
const SpeakerAliases& default_speaker_aliases();

/// Segments a raw transcript into an alternating real session. Consecutive
/// lines from the same speaker merge into one turn.
/// Throws FormatError (empty body, unlabeled line, unknown label, empty turn)
/// or AlternationError (fewer than two turns after merging).
SessionTranscript parse_transcript(const RawTranscript& raw,
                                   TranscriptFormat format,
                                   const SpeakerAliases& aliases = default_speaker_aliases());

}  // namespace counselforge::ingest
