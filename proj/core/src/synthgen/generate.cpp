#include "counselforge/synthgen/generate.hpp"

#include <algorithm>
#include <exception>
#include <regex>
#include <tuple>

#include <fmt/format.h>

#include "counselforge/common/errors.hpp"
#include "counselforge/common/parallel.hpp"
#include "counselforge/common/random.hpp"
#include "counselforge/common/text.hpp"
#include "counselforge/ingest/errors.hpp"
#include "counselforge/ingest/transcript_parser.hpp"
#include "counselforge/synthgen/errors.hpp"
#include "counselforge/synthgen/prompt_template.hpp"

namespace counselforge::synthgen {

using nlohmann::json;
using gateway::ChatMessage;
using gateway::Role;

namespace {

std::int64_t request_seed(std::uint64_t base, std::string_view key) {
  return static_cast<std::int64_t>(derive_seed(base, key) & 0x7fffffffULL);
}

std::string ask(gateway::Gateway& gw, std::string prompt, int max_tokens, std::int64_t seed) {
  auto request = gw.make_request({ChatMessage{Role::user, std::move(prompt)}},
                                 gateway::kGenerationTemperature);
  request.max_tokens = max_tokens;
  request.seed = seed;
  return gw.complete(request).content;
}

// Runs attempt(1..retries+1) until one returns; malformed-output errors are
// retried, anything else propagates. The last malformed error is rethrown.
template <typename T, typename F>
T with_parse_retries(int retries, F&& attempt) {
  std::exception_ptr last;
  for (int a = 1; a <= retries + 1; ++a) {
    try {
      return attempt(a);
    } catch (const GenerationParseError&) {
      last = std::current_exception();
    } catch (const UnknownDistortion&) {
      last = std::current_exception();
    } catch (const LengthViolation&) {
      last = std::current_exception();
    } catch (const ingest::InvalidSession&) {
      last = std::current_exception();
    } catch (const ingest::FormatError& e) {
      last = std::make_exception_ptr(GenerationParseError(e.what()));
    }
  }
  std::rethrow_exception(last);
}

std::vector<std::string> string_list(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  const auto& v = j.at(key);
  if (v.is_string()) return {v.get<std::string>()};
  std::vector<std::string> out;
  for (const auto& e : v) {
    auto s = text::trim(e.get<std::string>());
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::string constraint_text(const PersonaConstraints& c) {
  std::string out;
  if (c.min_age || c.max_age) {
    out += "Age must be between " + std::to_string(c.min_age.value_or(13)) + " and " +
           std::to_string(c.max_age.value_or(100)) + ".";
  }
  if (!c.themes.empty()) {
    if (!out.empty()) out += ' ';
    out += "Their challenges should relate to one of: " + text::join(c.themes, "; ") + ".";
  }
  return out;
}

std::string persona_summary(const Persona& p) {
  return p.persona_id + ": " + std::to_string(p.age) + ", " + p.occupation + ", " +
         p.cultural_background + "; " + text::join(p.challenges, "; ");
}

std::string render_exemplars(const std::vector<FewShotExemplar>& exemplars, std::size_t turns) {
  if (exemplars.empty()) return "(none provided)";
  std::string out;
  for (std::size_t i = 0; i < exemplars.size(); ++i) {
    const auto& s = exemplars[i].session;
    std::vector<ingest::Turn> head(s.turns.begin(),
                                   s.turns.begin() + static_cast<std::ptrdiff_t>(
                                                         std::min(turns, s.turns.size())));
    out += "Example " + std::to_string(i + 1) + ":\n";
    out += ingest::render_speaker_lines(head);
    out += '\n';
  }
  return out;
}

}  // namespace

json extract_json_object(std::string_view output) {
  const auto open = output.find('{');
  const auto close = output.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw GenerationParseError("no JSON object in model output");
  }
  try {
    auto j = json::parse(output.substr(open, close - open + 1));
    if (!j.is_object()) throw GenerationParseError("model output is not a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw GenerationParseError(std::string("malformed JSON in model output: ") + e.what());
  }
}

Persona parse_persona(std::string_view output) {
  const auto j = extract_json_object(output);
  Persona p;
  try {
    if (!j.at("age").is_number_integer()) throw GenerationParseError("age must be an integer");
    p.age = j.at("age").get<int>();
    p.occupation = text::trim(j.at("occupation").get<std::string>());
    p.cultural_background = text::trim(j.at("cultural_background").get<std::string>());
    p.challenges = string_list(j, "challenges");
    p.traits = string_list(j, "traits");
  } catch (const json::exception& e) {
    throw GenerationParseError(std::string("persona fields: ") + e.what());
  }
  if (p.age < 13 || p.age > 100) throw GenerationParseError("persona age outside [13, 100]");
  if (p.occupation.empty()) throw GenerationParseError("persona occupation is empty");
  if (p.cultural_background.empty()) throw GenerationParseError("persona background is empty");
  if (p.challenges.empty()) throw GenerationParseError("persona has no challenges");
  return p;
}

ScenarioSpec parse_scenario(std::string_view output) {
  ScenarioSpec s;
  std::string distortion_field;
  const auto brace = output.find('{');
  const auto label = text::to_lower(output).find("summary");
  if (brace != std::string_view::npos && (label == std::string::npos || brace < label)) {
    const auto j = extract_json_object(output);
    try {
      s.summary = text::trim(j.at("summary").get<std::string>());
      s.narrative = text::trim(j.at("scenario").get<std::string>());
      const auto& d = j.at("cognitive_distortions");
      distortion_field = d.is_string() ? d.get<std::string>() : text::join(string_list(j, "cognitive_distortions"), ", ");
    } catch (const json::exception& e) {
      throw GenerationParseError(std::string("scenario fields: ") + e.what());
    }
  } else {
    static const std::regex kLabel(
        R"((^|\n)[ \t*\-•]*(summary|cognitive distortions|scenario)[ \t*]*:[ \t*]*)",
        std::regex::icase);
    std::vector<std::tuple<std::string, std::size_t, std::size_t>> marks;  // name, label start, body start
    const std::string text_copy(output);
    for (auto it = std::sregex_iterator(text_copy.begin(), text_copy.end(), kLabel);
         it != std::sregex_iterator(); ++it) {
      marks.emplace_back(text::to_lower((*it)[2].str()), static_cast<std::size_t>(it->position(0)),
                         static_cast<std::size_t>(it->position(0) + it->length(0)));
    }
    bool have_summary = false, have_distortions = false, have_scenario = false;
    for (std::size_t i = 0; i < marks.size(); ++i) {
      const auto& [name, _, body_start] = marks[i];
      const std::size_t end = i + 1 < marks.size() ? std::get<1>(marks[i + 1]) : text_copy.size();
      auto body = text::trim(text_copy.substr(body_start, end - body_start));
      if (name == "summary") {
        s.summary = body;
        have_summary = true;
      } else if (name == "cognitive distortions") {
        distortion_field = body;
        have_distortions = true;
      } else {
        s.narrative = body;
        have_scenario = true;
      }
    }
    if (!have_summary || !have_distortions || !have_scenario) {
      throw GenerationParseError("scenario output lacks Summary / Cognitive Distortions / Scenario");
    }
  }
  s.distortions = parse_distortion_labels(distortion_field);
  if (s.summary.empty()) throw GenerationParseError("scenario summary is empty");
  if (text::count_words(s.narrative) < kMinNarrativeWords) {
    throw GenerationParseError("scenario narrative shorter than " +
                               std::to_string(kMinNarrativeWords) + " words");
  }
  return s;
}

std::vector<Persona> generate_personas(std::size_t count, const PersonaConstraints& constraints,
                                       gateway::Gateway& gateway,
                                       std::string_view prompt_template,
                                       const GenerationOptions& options) {
  if (count == 0) throw PreconditionError("persona count must be at least 1");
  std::vector<Persona> personas;
  personas.reserve(count);
  const auto constraints_line = constraint_text(constraints);

  // Sequential: each prompt lists the personas already created.
  for (std::size_t i = 0; i < count; ++i) {
    const auto id = fmt::format("p{:04}", i + 1);
    std::string existing;
    for (const auto& p : personas) existing += "- " + persona_summary(p) + "\n";
    if (existing.empty()) existing = "(none yet)\n";

    auto persona = with_parse_retries<Persona>(options.parse_retries, [&](int attempt) {
      const auto prompt = render_template(prompt_template,
                                          {{"index", std::to_string(i + 1)},
                                           {"count", std::to_string(count)},
                                           {"constraints", constraints_line},
                                           {"existing", existing},
                                           {"attempt", std::to_string(attempt)}});
      auto p = parse_persona(ask(gateway, prompt, options.max_tokens,
                                 request_seed(options.seed, id + "#" + std::to_string(attempt))));
      if ((constraints.min_age && p.age < *constraints.min_age) ||
          (constraints.max_age && p.age > *constraints.max_age)) {
        throw GenerationParseError("persona age violates constraints");
      }
      for (const auto& other : personas) {
        if (other.age == p.age && other.occupation == p.occupation &&
            other.challenges == p.challenges) {
          throw GenerationParseError("persona repeats " + other.persona_id);
        }
      }
      p.persona_id = id;
      return p;
    });
    personas.push_back(std::move(persona));
  }
  return personas;
}

std::vector<ScenarioSpec> generate_scenarios(const std::vector<Persona>& personas,
                                             const std::vector<std::string>& themes,
                                             gateway::Gateway& gateway,
                                             std::string_view prompt_template,
                                             const ScenarioOptions& options) {
  if (personas.empty()) throw PreconditionError("generate_scenarios needs at least one persona");
  if (options.scenarios_per_persona == 0) throw PreconditionError("scenarios_per_persona must be >= 1");
  for (const auto& p : personas) validate(p);

  const std::size_t per = options.scenarios_per_persona;
  const std::string taxonomy = DistortionTaxonomy::cbt().render();
  auto scenarios = parallel_map<ScenarioSpec>(
      personas.size() * per, options.parallelism, [&](std::size_t cell) {
        const auto& persona = personas[cell / per];
        const std::size_t ordinal = cell % per + 1;
        const std::string scenario_id = persona.persona_id + "-s" + std::to_string(ordinal);
        const std::string theme = themes.empty() ? std::string("any") : themes[cell % themes.size()];
        return with_parse_retries<ScenarioSpec>(options.parse_retries, [&](int attempt) {
          const auto prompt = render_template(prompt_template,
                                              {{"persona_id", persona.persona_id},
                                               {"persona", json(persona).dump(2)},
                                               {"theme", theme},
                                               {"taxonomy", taxonomy},
                                               {"ordinal", std::to_string(ordinal)},
                                               {"attempt", std::to_string(attempt)}});
          auto s = parse_scenario(ask(gateway, prompt, options.max_tokens,
                                      request_seed(options.seed, scenario_id + "#" + std::to_string(attempt))));
          s.scenario_id = scenario_id;
          s.persona_id = persona.persona_id;
          return s;
        });
      });
  std::sort(scenarios.begin(), scenarios.end(),
            [](const ScenarioSpec& a, const ScenarioSpec& b) { return a.scenario_id < b.scenario_id; });
  return scenarios;
}

ingest::SessionTranscript synthesize_session(const ScenarioSpec& scenario,
                                             const std::vector<FewShotExemplar>& exemplars,
                                             const std::vector<std::string>& techniques,
                                             gateway::Gateway& gateway,
                                             std::string_view prompt_template,
                                             const SynthesisOptions& options) {
  validate(scenario);
  if (exemplars.size() > options.max_exemplars) {
    throw PreconditionError("at most " + std::to_string(options.max_exemplars) + " exemplars allowed");
  }
  if (options.min_turns < 2 || options.max_turns < options.min_turns) {
    throw PreconditionError("invalid session length bounds");
  }
  const std::string session_id = scenario.scenario_id + "-d1";
  const std::string exemplar_block = render_exemplars(exemplars, options.exemplar_turns);
  const std::string technique_list = techniques.empty() ? std::string("any suitable CBT technique")
                                                        : text::join(techniques, ", ");

  return with_parse_retries<ingest::SessionTranscript>(options.parse_retries, [&](int attempt) {
    const auto prompt = render_template(prompt_template,
                                        {{"scenario", render(scenario)},
                                         {"techniques", technique_list},
                                         {"exemplars", exemplar_block},
                                         {"min_turns", std::to_string(options.min_turns)},
                                         {"max_turns", std::to_string(options.max_turns)},
                                         {"attempt", std::to_string(attempt)}});
    const auto seed = request_seed(options.seed, session_id + "#" + std::to_string(attempt));
    const auto output = ask(gateway, prompt, options.max_tokens, seed);

    auto session = ingest::parse_transcript(
        ingest::RawTranscript{session_id, scenario.summary, output},
        ingest::TranscriptFormat::speaker_lines);
    if (session.turns.front().speaker != ingest::Speaker::client) {
      throw ingest::AlternationError(session_id + ": synthesized session must open with the client");
    }
    const auto n = session.turns.size();
    if (n < options.min_turns || n > options.max_turns) {
      throw LengthViolation(session_id + ": " + std::to_string(n) + " turns outside [" +
                            std::to_string(options.min_turns) + ", " +
                            std::to_string(options.max_turns) + "]");
    }
    session.source = ingest::Source::synthetic;
    session.provenance.clear();
    std::vector<std::string> exemplar_ids;
    for (const auto& e : exemplars) exemplar_ids.push_back(e.exemplar_id);
    session.provenance["scenario_id"] = scenario.scenario_id;
    session.provenance["persona_id"] = scenario.persona_id;
    session.provenance["exemplar_ids"] = text::join(exemplar_ids, ",");
    session.provenance["techniques"] = text::join(techniques, ",");
    session.provenance["seed"] = std::to_string(seed);
    session.provenance["attempt"] = std::to_string(attempt);
    return session;
  });
}

}  // namespace counselforge::synthgen
