#include "counselforge/synthgen/records.hpp"

#include "counselforge/common/errors.hpp"
#include "counselforge/common/text.hpp"
#include "counselforge/synthgen/errors.hpp"
#include "counselforge/synthgen/taxonomy.hpp"

namespace counselforge::synthgen {

using nlohmann::json;

void validate(const Persona& p) {
  if (p.persona_id.empty()) throw PreconditionError("persona_id is empty");
  if (p.age < 13 || p.age > 100) {
    throw PreconditionError(p.persona_id + ": age " + std::to_string(p.age) + " outside [13, 100]");
  }
  if (p.challenges.empty()) throw PreconditionError(p.persona_id + ": no challenges");
}

void validate(const ScenarioSpec& s) {
  if (s.scenario_id.empty()) throw PreconditionError("scenario_id is empty");
  if (s.persona_id.empty()) throw PreconditionError(s.scenario_id + ": persona_id is empty");
  const auto& taxonomy = DistortionTaxonomy::cbt();
  for (const auto& d : s.distortions) {
    if (!taxonomy.contains(d)) throw UnknownDistortion(s.scenario_id + ": " + d);
  }
  if (text::count_words(s.narrative) < kMinNarrativeWords) {
    throw PreconditionError(s.scenario_id + ": narrative shorter than " +
                            std::to_string(kMinNarrativeWords) + " words");
  }
}

std::string render(const ScenarioSpec& s) {
  std::string out;
  out += "Scenario id: " + s.scenario_id + "\n";
  out += "Summary: " + s.summary + "\n";
  out += "Cognitive Distortions: " +
         (s.distortions.empty() ? std::string("n/a") : text::join(s.distortions, ", ")) + "\n";
  out += "Scenario: " + s.narrative + "\n";
  return out;
}

FewShotExemplar make_exemplar(ingest::SessionTranscript session) {
  ingest::validate_session(session);
  auto curated = session.annotations.find("curated");
  const bool is_curated = curated != session.annotations.end() && curated->second == "true";
  if (session.source != ingest::Source::real && !is_curated) {
    throw PreconditionError(session.session_id + ": exemplars must be real or curated sessions");
  }
  std::string id = session.session_id;
  return FewShotExemplar{std::move(id), std::move(session)};
}

void to_json(json& j, const Persona& p) {
  j = json{{"persona_id", p.persona_id},
           {"age", p.age},
           {"occupation", p.occupation},
           {"cultural_background", p.cultural_background},
           {"challenges", p.challenges},
           {"traits", p.traits}};
}

void from_json(const json& j, Persona& p) {
  p.persona_id = j.value("persona_id", std::string{});
  p.age = j.at("age").get<int>();
  p.occupation = j.at("occupation").get<std::string>();
  p.cultural_background = j.at("cultural_background").get<std::string>();
  p.challenges = j.at("challenges").get<std::vector<std::string>>();
  p.traits = j.value("traits", std::vector<std::string>{});
}

void to_json(json& j, const ScenarioSpec& s) {
  j = json{{"scenario_id", s.scenario_id},
           {"persona_id", s.persona_id},
           {"summary", s.summary},
           {"distortions", s.distortions},
           {"narrative", s.narrative}};
}

void from_json(const json& j, ScenarioSpec& s) {
  s.scenario_id = j.at("scenario_id").get<std::string>();
  s.persona_id = j.at("persona_id").get<std::string>();
  s.summary = j.at("summary").get<std::string>();
  s.distortions = j.value("distortions", std::vector<std::string>{});
  s.narrative = j.at("narrative").get<std::string>();
}

}  // namespace counselforge::synthgen
