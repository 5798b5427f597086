#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/ingest/session.hpp"

namespace counselforge::synthgen {

struct Persona {
  std::string persona_id;
  int age = 0;
  std::string occupation;
  std::string cultural_background;
  std::vector<std::string> challenges;
  std::vector<std::string> traits;

  friend bool operator==(const Persona&, const Persona&) = default;
};

struct ScenarioSpec {
  std::string scenario_id;
  std::string persona_id;
  std::string summary;
  /// Canonical taxonomy names; may be empty.
  std::vector<std::string> distortions;
  std::string narrative;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

inline constexpr std::size_t kMinNarrativeWords = 100;

/// Throws PreconditionError: id empty, age outside [13, 100], no challenges.
void validate(const Persona& persona);
/// Throws PreconditionError / UnknownDistortion: ids empty, distortion not
/// canonical, narrative under 100 words.
void validate(const ScenarioSpec& scenario);

/// Pretty block used inside prompts.
std::string render(const ScenarioSpec& scenario);

/// A curated session shown to the generator as an example.
struct FewShotExemplar {
  std::string exemplar_id;
  ingest::SessionTranscript session;
};

/// Session must satisfy the transcript invariants and be real or carry the
/// annotation curated=true. Throws PreconditionError otherwise.
FewShotExemplar make_exemplar(ingest::SessionTranscript session);

void to_json(nlohmann::json& j, const Persona& p);
void from_json(const nlohmann::json& j, Persona& p);
void to_json(nlohmann::json& j, const ScenarioSpec& s);
void from_json(const nlohmann::json& j, ScenarioSpec& s);

}  // namespace counselforge::synthgen
