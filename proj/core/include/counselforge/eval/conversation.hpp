#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/gateway/gateway.hpp"
#include "counselforge/ingest/session.hpp"
#include "counselforge/synthgen/records.hpp"

namespace counselforge::eval {

/// Token the patient simulator appends to its last message.
inline constexpr std::string_view kCloseMarker = "[END_SESSION]";

struct ModelUnderTest {
  std::string label;
  gateway::BackendConfig backend;
  std::string system_prompt;
};

enum class TerminatedBy { max_turns, patient_close, error };

std::string_view to_string(TerminatedBy t);
TerminatedBy terminated_by_from_string(std::string_view s);

struct LoggedTurn {
  std::size_t index = 0;
  ingest::Speaker speaker = ingest::Speaker::client;
  std::string text;
  std::int64_t latency_ms = 0;

  friend bool operator==(const LoggedTurn&, const LoggedTurn&) = default;
};

/// One simulated patient/counselor conversation. The patient always speaks
/// first and speakers alternate; at most 2 * max_turns turns.
struct ConversationLog {
  std::string run_id;
  std::string situation_id;
  std::string model_label;
  std::vector<LoggedTurn> turns;
  TerminatedBy terminated_by = TerminatedBy::max_turns;
  std::string error;

  friend bool operator==(const ConversationLog&, const ConversationLog&) = default;
};

struct SimulationOptions {
  std::string run_id = "run";
  /// Patient/counselor exchanges before the loop stops.
  std::size_t max_turns = 20;
  /// Patient system prompt; must contain {{situation}}.
  std::string patient_prompt;
  std::uint64_t seed = 42;
};

/// Runs the turn loop: patient, counselor, patient, ... The patient sees the
/// conversation with roles flipped (its own lines as assistant). Backend
/// failures end the loop with terminated_by=error and the message recorded;
/// they are not rethrown.
ConversationLog simulate_conversation(const synthgen::ScenarioSpec& situation,
                                      const ModelUnderTest& model,
                                      gateway::Gateway& counselor,
                                      gateway::Gateway& patient,
                                      const SimulationOptions& options);

/// Same, with fresh gateways built from the model and patient configs.
ConversationLog simulate_conversation(const synthgen::ScenarioSpec& situation,
                                      const ModelUnderTest& model,
                                      const gateway::BackendConfig& patient_backend,
                                      const SimulationOptions& options);

/// "Client: ..." / "Counselor: ..." lines.
std::string render_conversation(const ConversationLog& log);

struct ScorePair {
  std::string situation_id;
  std::string model_label;
  double empathy = 0.0;
  double relevance = 0.0;
  std::string judge_rationale;

  double combined() const noexcept { return (empathy + relevance) / 2.0; }
  friend bool operator==(const ScorePair&, const ScorePair&) = default;
};

/// A cell that produced no score, with the reason.
struct ScoreGap {
  std::string situation_id;
  std::string model_label;
  std::string reason;

  friend bool operator==(const ScoreGap&, const ScoreGap&) = default;
};

/// Strict "empathy: X / relevance: Y / rationale: ..." reader; values in
/// [0, 10] with at most two decimals. Throws quality::JudgeParseError.
ScorePair parse_conversation_judgement(std::string_view situation_id,
                                       std::string_view model_label, std::string_view output);

/// Zero-temperature judge call over the logged conversation. The log must be
/// non-empty and not an error log (PreconditionError).
ScorePair score_conversation(const ConversationLog& log, const synthgen::ScenarioSpec& situation,
                             gateway::Gateway& judge, std::string_view rubric);

void to_json(nlohmann::json& j, const LoggedTurn& t);
void from_json(const nlohmann::json& j, LoggedTurn& t);
void to_json(nlohmann::json& j, const ConversationLog& log);
void from_json(const nlohmann::json& j, ConversationLog& log);
void to_json(nlohmann::json& j, const ScorePair& s);
void from_json(const nlohmann::json& j, ScorePair& s);
void to_json(nlohmann::json& j, const ScoreGap& g);
void from_json(const nlohmann::json& j, ScoreGap& g);

}  // namespace counselforge::eval
