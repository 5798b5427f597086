#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "counselforge/gateway/gateway.hpp"
#include "counselforge/ingest/session.hpp"
#include "counselforge/synthgen/records.hpp"
#include "counselforge/synthgen/taxonomy.hpp"

namespace counselforge::synthgen {

struct GenerationOptions {
  std::uint64_t seed = 42;
  /// Extra attempts after a malformed generation.
  int parse_retries = 2;
  std::size_t parallelism = 1;
  int max_tokens = 1024;
};

struct PersonaConstraints {
  std::optional<int> min_age;
  std::optional<int> max_age;
  std::vector<std::string> themes;
};

/// Extracts the JSON object from model output, tolerating code fences or a
/// leading sentence. Throws GenerationParseError.
nlohmann::json extract_json_object(std::string_view output);

/// Parses one persona reply (without persona_id). Throws GenerationParseError.
Persona parse_persona(std::string_view output);

/// Accepts either the JSON object the scenario prompt asks for or the labeled
/// "Summary: / Cognitive Distortions: / Scenario:" text form. Ids are left
/// empty. Throws GenerationParseError or UnknownDistortion.
ScenarioSpec parse_scenario(std::string_view output);

/// Generates exactly `count` personas with ids p0001.. in order. Each reply is
/// parsed into the schema; a malformed reply, a constraint violation, or a
/// repeat of an earlier persona's (age, occupation, challenges) is retried
/// with a fresh attempt number, then surfaced as GenerationParseError.
std::vector<Persona> generate_personas(std::size_t count, const PersonaConstraints& constraints,
                                       gateway::Gateway& gateway,
                                       std::string_view prompt_template,
                                       const GenerationOptions& options = {});

struct ScenarioOptions : GenerationOptions {
  std::size_t scenarios_per_persona = 1;
};

/// One or more scenarios per persona, ids "<persona_id>-s<k>", returned sorted
/// by scenario_id. Themes are assigned round-robin (may be empty).
std::vector<ScenarioSpec> generate_scenarios(const std::vector<Persona>& personas,
                                             const std::vector<std::string>& themes,
                                             gateway::Gateway& gateway,
                                             std::string_view prompt_template,
                                             const ScenarioOptions& options = {});

struct SynthesisOptions {
  std::size_t max_exemplars = 3;
  std::size_t min_turns = 4;
  std::size_t max_turns = 40;
  std::uint64_t seed = 42;
  int parse_retries = 2;
  int max_tokens = 4096;
  /// Turns of each exemplar shown in the prompt.
  std::size_t exemplar_turns = 8;
};

/// Asks the model for a "Client:/Counselor:" dialogue and parses it with the
/// ingest parser. The result is a synthetic session "<scenario_id>-d1" that
/// opens with the client and whose provenance names the scenario, exemplars,
/// technique hints and seed. Throws GenerationParseError, AlternationError or
/// LengthViolation once retries are spent.
ingest::SessionTranscript synthesize_session(const ScenarioSpec& scenario,
                                             const std::vector<FewShotExemplar>& exemplars,
                                             const std::vector<std::string>& techniques,
                                             gateway::Gateway& gateway,
                                             std::string_view prompt_template,
                                             const SynthesisOptions& options = {});

}  // namespace counselforge::synthgen
