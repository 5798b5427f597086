#include "counselforge/eval/conversation.hpp"

#include <array>

#include "counselforge/common/errors.hpp"
#include "counselforge/common/random.hpp"
#include "counselforge/common/text.hpp"
#include "counselforge/quality/judge_grammar.hpp"
#include "counselforge/synthgen/prompt_template.hpp"

namespace counselforge::eval {

using gateway::ChatMessage;
using gateway::Role;
using nlohmann::json;

namespace {

constexpr std::string_view kKickoff = "(The counselor is ready. Begin the session.)";

const std::array<quality::ScoreField, 2> kConversationFields{{
    {"empathy", 0, 10, 2},
    {"relevance", 0, 10, 2},
}};

std::int64_t request_seed(std::uint64_t base, const std::string& key) {
  return static_cast<std::int64_t>(derive_seed(base, key) & 0x7fffffffULL);
}

std::string situation_text(const synthgen::ScenarioSpec& s) {
  return s.summary.empty() ? s.narrative : s.summary + "\n\n" + s.narrative;
}

}  // namespace

std::string_view to_string(TerminatedBy t) {
  switch (t) {
    case TerminatedBy::max_turns: return "max_turns";
    case TerminatedBy::patient_close: return "patient_close";
    case TerminatedBy::error: return "error";
  }
  return "error";
}

TerminatedBy terminated_by_from_string(std::string_view s) {
  for (auto t : {TerminatedBy::max_turns, TerminatedBy::patient_close, TerminatedBy::error}) {
    if (to_string(t) == s) return t;
  }
  throw PreconditionError("unknown termination: " + std::string(s));
}

ConversationLog simulate_conversation(const synthgen::ScenarioSpec& situation,
                                      const ModelUnderTest& model, gateway::Gateway& counselor,
                                      gateway::Gateway& patient,
                                      const SimulationOptions& options) {
  if (situation.scenario_id.empty()) throw PreconditionError("situation has no id");
  if (options.max_turns == 0) throw PreconditionError("max_turns must be at least 1");
  if (text::trim(model.system_prompt).empty()) {
    throw PreconditionError("model " + model.label + " has no system prompt");
  }
  const auto patient_system = synthgen::render_template(
      options.patient_prompt, {{"situation", situation_text(situation)}});

  ConversationLog log;
  log.run_id = options.run_id;
  log.situation_id = situation.scenario_id;
  log.model_label = model.label;
  log.terminated_by = TerminatedBy::max_turns;

  const std::string cell = situation.scenario_id + "|" + model.label;
  auto add_turn = [&](ingest::Speaker who, std::string text, std::chrono::milliseconds latency) {
    log.turns.push_back(
        LoggedTurn{log.turns.size(), who, std::move(text), static_cast<std::int64_t>(latency.count())});
  };

  try {
    for (std::size_t round = 0; round < options.max_turns; ++round) {
      std::vector<ChatMessage> pm{{Role::system, patient_system},
                                  {Role::user, std::string(kKickoff)}};
      for (const auto& t : log.turns) {
        pm.push_back({t.speaker == ingest::Speaker::client ? Role::assistant : Role::user, t.text});
      }
      auto preq = patient.make_request(std::move(pm), gateway::kGenerationTemperature);
      preq.seed = request_seed(options.seed, cell + "|patient|" + std::to_string(round));
      const auto preply = patient.complete(preq);

      std::string said = preply.content;
      bool closing = false;
      if (auto pos = said.find(kCloseMarker); pos != std::string::npos) {
        closing = true;
        said.erase(pos, kCloseMarker.size());
      }
      said = text::trim(said);
      if (said.empty() && !closing) throw gateway::GatewayError("patient returned an empty message");
      if (!said.empty()) add_turn(ingest::Speaker::client, said, preply.latency);
      if (closing) {
        log.terminated_by = TerminatedBy::patient_close;
        break;
      }

      std::vector<ChatMessage> cm{{Role::system, model.system_prompt}};
      for (const auto& t : log.turns) {
        cm.push_back({t.speaker == ingest::Speaker::client ? Role::user : Role::assistant, t.text});
      }
      auto creq = counselor.make_request(std::move(cm), gateway::kGenerationTemperature);
      creq.seed = request_seed(options.seed, cell + "|counselor|" + std::to_string(round));
      const auto creply = counselor.complete(creq);
      const auto answer = text::trim(creply.content);
      if (answer.empty()) throw gateway::GatewayError("counselor returned an empty message");
      add_turn(ingest::Speaker::counselor, answer, creply.latency);
    }
  } catch (const Error& e) {
    log.terminated_by = TerminatedBy::error;
    log.error = e.what();
  }
  return log;
}

ConversationLog simulate_conversation(const synthgen::ScenarioSpec& situation,
                                      const ModelUnderTest& model,
                                      const gateway::BackendConfig& patient_backend,
                                      const SimulationOptions& options) {
  gateway::Gateway counselor(model.backend);
  gateway::Gateway patient(patient_backend);
  return simulate_conversation(situation, model, counselor, patient, options);
}

std::string render_conversation(const ConversationLog& log) {
  std::string out;
  for (const auto& t : log.turns) {
    std::string line = t.text;
    for (auto& c : line) {
      if (c == '\n') c = ' ';
    }
    out += (t.speaker == ingest::Speaker::client ? "Client: " : "Counselor: ") + line + "\n";
  }
  return out;
}

ScorePair parse_conversation_judgement(std::string_view situation_id,
                                       std::string_view model_label, std::string_view output) {
  auto fields = quality::parse_judge_fields(output, kConversationFields);
  return ScorePair{std::string(situation_id), std::string(model_label),
                   fields.scores.at("empathy"), fields.scores.at("relevance"),
                   std::move(fields.rationale)};
}

ScorePair score_conversation(const ConversationLog& log, const synthgen::ScenarioSpec& situation,
                             gateway::Gateway& judge, std::string_view rubric) {
  if (log.terminated_by == TerminatedBy::error) {
    throw PreconditionError("error logs are not scored: " + log.situation_id);
  }
  if (log.turns.empty()) throw PreconditionError("empty conversation: " + log.situation_id);
  const auto prompt = synthgen::render_template(
      rubric, {{"situation", situation_text(situation)}, {"conversation", render_conversation(log)}});
  auto request = judge.make_request({ChatMessage{Role::user, prompt}}, gateway::kJudgeTemperature);
  request.max_tokens = 512;
  return parse_conversation_judgement(log.situation_id, log.model_label,
                                      judge.complete(request).content);
}

void to_json(json& j, const LoggedTurn& t) {
  j = json{{"index", t.index},
           {"speaker", ingest::to_string(t.speaker)},
           {"text", t.text},
           {"latency_ms", t.latency_ms}};
}

void from_json(const json& j, LoggedTurn& t) {
  t.index = j.at("index").get<std::size_t>();
  t.speaker = ingest::speaker_from_string(j.at("speaker").get<std::string>());
  t.text = j.at("text").get<std::string>();
  t.latency_ms = j.value("latency_ms", std::int64_t{0});
}

void to_json(json& j, const ConversationLog& log) {
  j = json{{"run_id", log.run_id},
           {"situation_id", log.situation_id},
           {"model_label", log.model_label},
           {"turns", log.turns},
           {"terminated_by", to_string(log.terminated_by)},
           {"error", log.error}};
}

void from_json(const json& j, ConversationLog& log) {
  log.run_id = j.at("run_id").get<std::string>();
  log.situation_id = j.at("situation_id").get<std::string>();
  log.model_label = j.at("model_label").get<std::string>();
  log.turns = j.at("turns").get<std::vector<LoggedTurn>>();
  log.terminated_by = terminated_by_from_string(j.at("terminated_by").get<std::string>());
  log.error = j.value("error", std::string{});
}

void to_json(json& j, const ScorePair& s) {
  j = json{{"situation_id", s.situation_id},
           {"model_label", s.model_label},
           {"empathy", s.empathy},
           {"relevance", s.relevance},
           {"judge_rationale", s.judge_rationale}};
}

void from_json(const json& j, ScorePair& s) {
  s.situation_id = j.at("situation_id").get<std::string>();
  s.model_label = j.at("model_label").get<std::string>();
  s.empathy = j.at("empathy").get<double>();
  s.relevance = j.at("relevance").get<double>();
  s.judge_rationale = j.value("judge_rationale", std::string{});
}

void to_json(json& j, const ScoreGap& g) {
  j = json{{"situation_id", g.situation_id}, {"model_label", g.model_label}, {"reason", g.reason}};
}

void from_json(const json& j, ScoreGap& g) {
  g.situation_id = j.at("situation_id").get<std::string>();
  g.model_label = j.at("model_label").get<std::string>();
  g.reason = j.at("reason").get<std::string>();
}

}  // namespace counselforge::eval
