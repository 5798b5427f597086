#include "counselforge/ingest/quality_filter.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string_view>

#include "counselforge/common/errors.hpp"
#include "counselforge/common/text.hpp"

namespace counselforge::ingest {

namespace {

std::size_t bracketed_chars(std::string_view s) {
  std::size_t n = 0;
  int depth = 0;
  for (char c : s) {
    if (c == '[' || c == '(') {
      ++depth;
      ++n;
    } else if ((c == ']' || c == ')') && depth > 0) {
      --depth;
      ++n;
    } else if (depth > 0) {
      ++n;
    }
  }
  return n;
}

constexpr std::array<std::string_view, 16> kEmotionTerms{
    "anxious", "anxiety", "overwhelmed", "guilt", "guilty", "sad",
    "angry", "frustrated", "hopeless", "scared", "afraid", "lonely",
    "ashamed", "worried", "stressed", "hopeful"};

constexpr std::array<std::string_view, 8> kInterventionCues{
    "evidence", "reframe", "another way", "journal",
    "what would you tell a friend", "homework", "notice", "breathe"};

}  // namespace

double non_dialogue_ratio(const SessionTranscript& session) {
  std::size_t total = 0, bracketed = 0;
  for (const auto& t : session.turns) {
    total += t.text.size();
    bracketed += bracketed_chars(t.text);
  }
  return total == 0 ? 0.0 : static_cast<double>(bracketed) / static_cast<double>(total);
}

FilterVerdict quality_filter(const SessionTranscript& session, const FilterLimits& limits) {
  if (limits.min_turns == 0 || limits.min_chars_per_turn == 0 ||
      !(limits.max_non_dialogue_ratio > 0.0)) {
    throw PreconditionError("filter limits must be positive");
  }
  FilterVerdict v;
  if (session.turns.size() < limits.min_turns) v.reasons.push_back("too_few_turns");
  for (const auto& t : session.turns) {
    if (text::trim(t.text).size() < limits.min_chars_per_turn) {
      v.reasons.push_back("short_turn:" + std::to_string(t.index));
    }
  }
  if (non_dialogue_ratio(session) > limits.max_non_dialogue_ratio) {
    v.reasons.push_back("non_dialogue_ratio");
  }
  v.pass = v.reasons.empty();
  return v;
}

void annotate(SessionTranscript& session) {
  std::size_t questions = 0;
  std::set<std::string> emotions;
  std::set<std::string> cues;
  for (const auto& t : session.turns) {
    const auto lower = text::to_lower(t.text);
    if (t.speaker == Speaker::counselor) {
      questions += static_cast<std::size_t>(std::count(t.text.begin(), t.text.end(), '?'));
      for (auto cue : kInterventionCues) {
        if (lower.find(cue) != std::string::npos) cues.emplace(cue);
      }
    } else {
      for (const auto& w : text::word_tokens(lower)) {
        if (std::find(kEmotionTerms.begin(), kEmotionTerms.end(), w) != kEmotionTerms.end()) {
          emotions.insert(w);
        }
      }
    }
  }
  session.annotations["counselor_questions"] = std::to_string(questions);
  session.annotations["emotional_indicators"] =
      text::join(std::vector<std::string>(emotions.begin(), emotions.end()), ",");
  session.annotations["therapist_interventions"] =
      text::join(std::vector<std::string>(cues.begin(), cues.end()), ",");
}

}  // namespace counselforge::ingest
