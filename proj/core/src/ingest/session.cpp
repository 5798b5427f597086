#include "counselforge/ingest/session.hpp"

#include "counselforge/common/jsonl.hpp"
#include "counselforge/common/text.hpp"
#include "counselforge/ingest/errors.hpp"

namespace counselforge::ingest {

using nlohmann::json;

std::string_view to_string(Speaker s) {
  return s == Speaker::counselor ? "counselor" : "client";
}

Speaker speaker_from_string(std::string_view s) {
  if (s == "counselor") return Speaker::counselor;
  if (s == "client") return Speaker::client;
  throw FormatError("unknown speaker: " + std::string(s));
}

std::string_view to_string(Source s) { return s == Source::real ? "real" : "synthetic"; }

Source source_from_string(std::string_view s) {
  if (s == "real") return Source::real;
  if (s == "synthetic") return Source::synthetic;
  throw FormatError("unknown source: " + std::string(s));
}

void validate_session(const SessionTranscript& session) {
  if (session.session_id.empty()) throw InvalidSession("session_id is empty");
  const auto& turns = session.turns;
  if (turns.size() < 2) {
    throw AlternationError(session.session_id + ": needs at least 2 turns, has " +
                           std::to_string(turns.size()));
  }
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (turns[i].index != i) {
      throw InvalidSession(session.session_id + ": turn indices not contiguous at " +
                           std::to_string(i));
    }
    if (text::trim(turns[i].text).empty()) {
      throw InvalidSession(session.session_id + ": turn " + std::to_string(i) +
                           " has empty text");
    }
    if (i > 0 && turns[i].speaker == turns[i - 1].speaker) {
      throw AlternationError(session.session_id + ": speakers do not alternate at turn " +
                             std::to_string(i));
    }
  }
}

bool is_valid_session(const SessionTranscript& session) noexcept {
  try {
    validate_session(session);
    return true;
  } catch (...) {
    return false;
  }
}

std::vector<Turn> merge_consecutive(std::vector<Turn> turns) {
  std::vector<Turn> out;
  out.reserve(turns.size());
  for (auto& t : turns) {
    if (!out.empty() && out.back().speaker == t.speaker) {
      out.back().text += '\n';
      out.back().text += t.text;
    } else {
      out.push_back(std::move(t));
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
  return out;
}

std::string session_text(const SessionTranscript& session) {
  std::string out;
  for (std::size_t i = 0; i < session.turns.size(); ++i) {
    if (i) out += '\n';
    out += session.turns[i].text;
  }
  return out;
}

std::string render_speaker_lines(const std::vector<Turn>& turns,
                                 std::string_view client_label,
                                 std::string_view counselor_label) {
  std::string out;
  for (const auto& t : turns) {
    out += t.speaker == Speaker::client ? client_label : counselor_label;
    out += ": ";
    // Keep one line per turn so the output re-parses to the same turns.
    for (char c : t.text) out += (c == '\n' || c == '\r') ? ' ' : c;
    out += '\n';
  }
  return out;
}

std::vector<QaPair> qa_pairs(const SessionTranscript& session) {
  std::vector<QaPair> pairs;
  const auto& turns = session.turns;
  for (std::size_t i = 0; i + 1 < turns.size(); ++i) {
    if (turns[i].speaker == Speaker::client && turns[i + 1].speaker == Speaker::counselor) {
      pairs.push_back(QaPair{i, turns[i].text, turns[i + 1].text});
    }
  }
  return pairs;
}

void to_json(json& j, const Turn& t) {
  j = json{{"index", t.index}, {"speaker", to_string(t.speaker)}, {"text", t.text}};
}

void from_json(const json& j, Turn& t) {
  t.index = j.at("index").get<std::size_t>();
  t.speaker = speaker_from_string(j.at("speaker").get<std::string>());
  t.text = j.at("text").get<std::string>();
}

void to_json(json& j, const SessionTranscript& s) {
  j = json{{"session_id", s.session_id},
           {"source", to_string(s.source)},
           {"turns", s.turns},
           {"annotations", s.annotations},
           {"provenance", s.provenance}};
}

void from_json(const json& j, SessionTranscript& s) {
  s.session_id = j.at("session_id").get<std::string>();
  s.source = source_from_string(j.at("source").get<std::string>());
  s.turns = j.at("turns").get<std::vector<Turn>>();
  s.annotations = j.value("annotations", std::map<std::string, std::string>{});
  s.provenance = j.value("provenance", std::map<std::string, std::string>{});
}

std::vector<SessionTranscript> read_corpus(const std::filesystem::path& path) {
  std::vector<SessionTranscript> corpus;
  for (const auto& row : read_jsonl(path)) {
    try {
      corpus.push_back(row.get<SessionTranscript>());
    } catch (const json::exception& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  }
  return corpus;
}

void write_corpus(const std::filesystem::path& path,
                  const std::vector<SessionTranscript>& corpus) {
  write_jsonl(path, to_json_rows(corpus));
}

}  // namespace counselforge::ingest
