#include "counselforge/quality/scoring.hpp"

#include <array>

#include "counselforge/common/errors.hpp"
#include "counselforge/quality/judge_grammar.hpp"
#include "counselforge/synthgen/prompt_template.hpp"

namespace counselforge::quality {

using nlohmann::json;

namespace {

const std::array<ScoreField, 3> kSessionFields{{
    {"coherence", 1, 10, 0},
    {"realism", 1, 10, 0},
    {"therapeutic_value", 1, 10, 0},
}};

const std::array<ScoreField, 2> kItemFields{{
    {"correctness", 1, 10, 0},
    {"naturalness", 1, 10, 0},
}};

std::string ask_judge(gateway::Gateway& judge, std::string prompt) {
  auto request = judge.make_request({gateway::ChatMessage{gateway::Role::user, std::move(prompt)}},
                                    gateway::kJudgeTemperature);
  request.max_tokens = 512;
  return judge.complete(request).content;
}

}  // namespace

std::string_view to_string(FlagReason r) {
  switch (r) {
    case FlagReason::low_coherence: return "low_coherence";
    case FlagReason::low_realism: return "low_realism";
    case FlagReason::low_therapeutic_value: return "low_therapeutic_value";
    case FlagReason::unnatural_phrasing: return "unnatural_phrasing";
    case FlagReason::logical_error: return "logical_error";
    case FlagReason::technique_inconsistency: return "technique_inconsistency";
  }
  return "low_coherence";
}

FlagReason flag_reason_from_string(std::string_view s) {
  for (auto r : {FlagReason::low_coherence, FlagReason::low_realism,
                 FlagReason::low_therapeutic_value, FlagReason::unnatural_phrasing,
                 FlagReason::logical_error, FlagReason::technique_inconsistency}) {
    if (to_string(r) == s) return r;
  }
  throw PreconditionError("unknown flag reason: " + std::string(s));
}

QualityScore parse_session_judgement(std::string_view session_id, std::string_view output) {
  auto fields = parse_judge_fields(output, kSessionFields);
  return QualityScore{std::string(session_id), static_cast<int>(fields.scores.at("coherence")),
                      static_cast<int>(fields.scores.at("realism")),
                      static_cast<int>(fields.scores.at("therapeutic_value")),
                      std::move(fields.rationale)};
}

QualityScore judge_session(const ingest::SessionTranscript& session, std::string_view rubric,
                           gateway::Gateway& judge) {
  ingest::validate_session(session);
  const auto prompt = synthgen::render_template(
      rubric, {{"session", ingest::render_speaker_lines(session.turns)},
               {"session_id", session.session_id}});
  return parse_session_judgement(session.session_id, ask_judge(judge, prompt));
}

std::vector<Flag> flag_session(const QualityScore& score, const FlagThresholds& t) {
  std::vector<Flag> flags;
  auto check = [&](int value, int minimum, FlagReason reason, const char* name) {
    if (value < minimum) {
      flags.push_back(Flag{score.session_id, reason,
                           std::string(name) + " " + std::to_string(value) + " < " +
                               std::to_string(minimum)});
    }
  };
  check(score.coherence, t.coherence, FlagReason::low_coherence, "coherence");
  check(score.realism, t.realism, FlagReason::low_realism, "realism");
  check(score.therapeutic_value, t.therapeutic_value, FlagReason::low_therapeutic_value,
        "therapeutic_value");
  return flags;
}

ItemQuality parse_item_judgement(std::string_view item_id, std::string_view output) {
  auto fields = parse_judge_fields(output, kItemFields);
  return ItemQuality{std::string(item_id), static_cast<int>(fields.scores.at("correctness")),
                     static_cast<int>(fields.scores.at("naturalness")),
                     std::move(fields.rationale)};
}

ItemQuality judge_naturalness_correctness(const JudgedItem& item, std::string_view rubric,
                                          gateway::Gateway& judge) {
  std::string kind, id, body;
  if (const auto* p = std::get_if<synthgen::Persona>(&item)) {
    kind = "persona";
    id = p->persona_id;
    body = json(*p).dump(2);
  } else {
    const auto& s = std::get<synthgen::ScenarioSpec>(item);
    kind = "scenario";
    id = s.scenario_id;
    body = synthgen::render(s);
  }
  const auto prompt = synthgen::render_template(rubric, {{"kind", kind}, {"item", body}});
  return parse_item_judgement(id, ask_judge(judge, prompt));
}

void to_json(json& j, const QualityScore& s) {
  j = json{{"session_id", s.session_id},
           {"coherence", s.coherence},
           {"realism", s.realism},
           {"therapeutic_value", s.therapeutic_value},
           {"rationale", s.rationale}};
}

void from_json(const json& j, QualityScore& s) {
  s.session_id = j.at("session_id").get<std::string>();
  s.coherence = j.at("coherence").get<int>();
  s.realism = j.at("realism").get<int>();
  s.therapeutic_value = j.at("therapeutic_value").get<int>();
  s.rationale = j.value("rationale", std::string{});
}

void to_json(json& j, const Flag& f) {
  j = json{{"session_id", f.session_id}, {"reason", to_string(f.reason)}, {"detail", f.detail}};
}

void from_json(const json& j, Flag& f) {
  f.session_id = j.at("session_id").get<std::string>();
  f.reason = flag_reason_from_string(j.at("reason").get<std::string>());
  f.detail = j.value("detail", std::string{});
}

void to_json(json& j, const ItemQuality& q) {
  j = json{{"item_id", q.item_id},
           {"correctness", q.correctness},
           {"naturalness", q.naturalness},
           {"rationale", q.rationale}};
}

}  // namespace counselforge::quality
