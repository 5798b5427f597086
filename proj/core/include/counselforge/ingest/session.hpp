#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace counselforge::ingest {

enum class Speaker { counselor, client };
enum class Source { real, synthetic };

std::string_view to_string(Speaker s);
Speaker speaker_from_string(std::string_view s);
std::string_view to_string(Source s);
Source source_from_string(std::string_view s);

struct Turn {
  std::size_t index = 0;
  Speaker speaker = Speaker::client;
  std::string text;

  friend bool operator==(const Turn&, const Turn&) = default;
};

/// The pipeline's central record: an ordered, role-tagged conversation.
/// Invariants (checked by validate_session): at least two turns, speakers
/// strictly alternate, indices run 0..n-1, no empty turn text.
struct SessionTranscript {
  std::string session_id;
  Source source = Source::real;
  std::vector<Turn> turns;
  std::map<std::string, std::string> annotations;
  std::map<std::string, std::string> provenance;

  friend bool operator==(const SessionTranscript&, const SessionTranscript&) = default;
};

/// Throws AlternationError / InvalidSession on the first violated invariant.
void validate_session(const SessionTranscript& session);
bool is_valid_session(const SessionTranscript& session) noexcept;

/// Merges runs of same-speaker turns (texts joined by a newline) and
/// renumbers indices from 0.
std::vector<Turn> merge_consecutive(std::vector<Turn> turns);

/// Turn texts joined with newlines; the text dedup and diversity operate on.
std::string session_text(const SessionTranscript& session);

/// "Client: ..." / "Counselor: ..." lines, one per turn.
std::string render_speaker_lines(const std::vector<Turn>& turns,
                                 std::string_view client_label = "Client",
                                 std::string_view counselor_label = "Counselor");

struct QaPair {
  std::size_t question_turn;
  std::string question;
  std::string answer;
};

/// Client turn followed by the counselor's reply. A trailing client turn with
/// no reply is not included.
std::vector<QaPair> qa_pairs(const SessionTranscript& session);

void to_json(nlohmann::json& j, const Turn& t);
void from_json(const nlohmann::json& j, Turn& t);
void to_json(nlohmann::json& j, const SessionTranscript& s);
void from_json(const nlohmann::json& j, SessionTranscript& s);

/// Corpus JSON Lines: one SessionTranscript object per line.
std::vector<SessionTranscript> read_corpus(const std::filesystem::path& path);
void write_corpus(const std::filesystem::path& path,
                  const std::vector<SessionTranscript>& corpus);

}  // namespace counselforge::ingest
