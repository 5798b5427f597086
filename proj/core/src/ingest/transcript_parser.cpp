#include "counselforge/ingest/transcript_parser.hpp"

#include <cctype>

#include "counselforge/common/text.hpp"
#include "counselforge/ingest/errors.hpp"

namespace counselforge::ingest {

namespace {

constexpr std::size_t kMaxLabelLength = 40;

std::string strip_emphasis(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != '*') out += c;
  }
  return text::trim(out);
}

bool plausible_label(std::string_view label) {
  if (label.empty() || label.size() > kMaxLabelLength) return false;
  if (!std::isalpha(static_cast<unsigned char>(label.front()))) return false;
  for (char c : label) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == ' ' || c == '.' || c == '\'' || c == '-' || c == '_')) {
      return false;
    }
  }
  return true;
}

SessionTranscript parse_speaker_lines(const RawTranscript& raw,
                                      const SpeakerAliases& aliases) {
  std::vector<Turn> turns;
  std::size_t lineno = 0;
  for (auto& line : text::split(raw.body, '\n')) {
    ++lineno;
    const std::string trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    const auto colon = trimmed.find(':');
    const std::string label =
        colon == std::string::npos ? std::string{} : strip_emphasis(trimmed.substr(0, colon));
    if (!plausible_label(label)) {
      throw FormatError(raw.source_id + ":" + std::to_string(lineno) +
                        ": expected 'Speaker: text'");
    }
    auto alias = aliases.find(text::to_lower(label));
    if (alias == aliases.end()) {
      throw FormatError(raw.source_id + ":" + std::to_string(lineno) +
                        ": unknown speaker label '" + label + "'");
    }
    std::string body = trimmed.substr(colon + 1);
    const auto first = body.find_first_not_of("* \t");
    body = first == std::string::npos ? std::string{} : text::trim(body.substr(first));
    if (body.empty()) {
      throw FormatError(raw.source_id + ":" + std::to_string(lineno) + ": empty turn");
    }
    turns.push_back(Turn{turns.size(), alias->second, std::move(body)});
  }

  SessionTranscript session;
  session.session_id = raw.source_id;
  session.source = Source::real;
  session.turns = merge_consecutive(std::move(turns));
  session.provenance["source_id"] = raw.source_id;
  if (!raw.title.empty()) session.provenance["title"] = raw.title;
  return session;
}

SessionTranscript parse_structured(const RawTranscript& raw) {
  SessionTranscript session;
  try {
    session = nlohmann::json::parse(raw.body).get<SessionTranscript>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(raw.source_id + ": " + e.what());
  }
  if (session.session_id.empty()) session.session_id = raw.source_id;
  for (const auto& t : session.turns) {
    if (text::trim(t.text).empty()) throw FormatError(raw.source_id + ": empty turn");
  }
  session.turns = merge_consecutive(std::move(session.turns));
  session.provenance.emplace("source_id", raw.source_id);
  return session;
}

}  // namespace

const SpeakerAliases& default_speaker_aliases() {
  static const SpeakerAliases aliases{
      {"therapist", Speaker::counselor}, {"counselor", Speaker::counselor},
      {"counsellor", Speaker::counselor}, {"assistant", Speaker::counselor},
      {"patient", Speaker::client},       {"client", Speaker::client},
      {"user", Speaker::client},
  };
  return aliases;
}

SessionTranscript parse_transcript(const RawTranscript& raw, TranscriptFormat format,
                                   const SpeakerAliases& aliases) {
  if (text::trim(raw.body).empty()) throw FormatError(raw.source_id + ": empty body");
  SessionTranscript session = format == TranscriptFormat::speaker_lines
                                  ? parse_speaker_lines(raw, aliases)
                                  : parse_structured(raw);
  if (session.turns.size() < 2) {
    throw AlternationError(raw.source_id + ": a single speaker cannot form a dialogue");
  }
  validate_session(session);
  return session;
}

}  // namespace counselforge::ingest
