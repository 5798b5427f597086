#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/gateway/gateway.hpp"
#include "counselforge/ingest/session.hpp"
#include "counselforge/synthgen/records.hpp"

namespace counselforge::quality {

struct QualityScore {
  std::string session_id;
  int coherence = 1;
  int realism = 1;
  int therapeutic_value = 1;
  std::string rationale;

  double mean() const noexcept { return (coherence + realism + therapeutic_value) / 3.0; }

  friend bool operator==(const QualityScore&, const QualityScore&) = default;
};

enum class FlagReason {
  low_coherence,
  low_realism,
  low_therapeutic_value,
  unnatural_phrasing,
  logical_error,
  technique_inconsistency,
};

std::string_view to_string(FlagReason r);
FlagReason flag_reason_from_string(std::string_view s);

struct Flag {
  std::string session_id;
  FlagReason reason = FlagReason::low_coherence;
  std::string detail;

  friend bool operator==(const Flag&, const Flag&) = default;
};

struct FlagThresholds {
  int coherence = 6;
  int realism = 6;
  int therapeutic_value = 6;
};

/// Parses "coherence: N / realism: N / therapeutic_value: N [/ rationale: ...]"
/// with every score an integer in [1, 10].
QualityScore parse_session_judgement(std::string_view session_id, std::string_view output);

/// Asks the judge (temperature 0) to score `session` with `rubric`, which must
/// contain {{session}}. Throws JudgeParseError on a non-conforming answer.
QualityScore judge_session(const ingest::SessionTranscript& session, std::string_view rubric,
                           gateway::Gateway& judge);

/// One flag per dimension strictly below its threshold.
std::vector<Flag> flag_session(const QualityScore& score, const FlagThresholds& thresholds = {});

struct ItemQuality {
  std::string item_id;
  int correctness = 1;
  int naturalness = 1;
  std::string rationale;
};

using JudgedItem = std::variant<synthgen::Persona, synthgen::ScenarioSpec>;

ItemQuality parse_item_judgement(std::string_view item_id, std::string_view output);

/// Correctness/naturalness of a persona or scenario; `rubric` uses {{kind}}
/// and {{item}}.
ItemQuality judge_naturalness_correctness(const JudgedItem& item, std::string_view rubric,
                                          gateway::Gateway& judge);

void to_json(nlohmann::json& j, const QualityScore& s);
void from_json(const nlohmann::json& j, QualityScore& s);
void to_json(nlohmann::json& j, const Flag& f);
void from_json(const nlohmann::json& j, Flag& f);
void to_json(nlohmann::json& j, const ItemQuality& q);

}  // namespace counselforge::quality
