#include "counselforge/pipeline/config.hpp"

#include <set>

#include "counselforge/common/clock.hpp"
#include "counselforge/common/errors.hpp"
#include "counselforge/common/jsonl.hpp"

namespace counselforge::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void only_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_relative() ? (base / path).lexically_normal() : path;
}

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::exists(p)) throw ConfigError(what + " not found: " + p.string());
}

gateway::BackendConfig backend(const json& j, const fs::path& base, const std::string& where) {
  auto c = gateway::backend_config_from_json(j, base);
  if (c.kind != gateway::BackendKind::remote) require_file(c.fixture, where + " fixture");
  return c;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

PipelineConfig parse_config(const json& j, const fs::path& base, const ConfigOverrides& overrides) {
  PipelineConfig c;
  try {
    only_keys(j, {"seed", "timestamp", "parallelism", "paths", "gateways", "ingest", "generation",
                  "quality", "dataset", "bench", "review"},
              "config");
    c.raw = j;
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.parallelism = get_or<std::size_t>(j, "parallelism", c.parallelism);
    if (j.contains("timestamp")) {
      c.timestamp = j.at("timestamp").get<std::string>();
      if (!parse_iso8601(*c.timestamp)) {
        throw ConfigError("timestamp must look like 2025-01-01T00:00:00Z");
      }
    }

    const auto& paths = j.at("paths");
    only_keys(paths, {"workspace", "real_transcripts", "situations", "assets"}, "paths");
    c.paths.workspace = resolve(base, paths.at("workspace").get<std::string>());
    c.paths.real_transcripts = resolve(base, get_or<std::string>(paths, "real_transcripts", "real"));
    c.paths.situations = resolve(base, get_or<std::string>(paths, "situations", "situations.jsonl"));
    if (paths.contains("assets")) {
      c.paths.assets = resolve(base, paths.at("assets").get<std::string>());
      if (!fs::is_directory(*c.paths.assets)) {
        throw ConfigError("paths.assets is not a directory: " + c.paths.assets->string());
      }
    }

    const auto& gw = j.at("gateways");
    only_keys(gw, {"generator", "judge", "patient"}, "gateways");
    c.generator = backend(gw.at("generator"), base, "gateways.generator");
    c.judge = backend(gw.at("judge"), base, "gateways.judge");
    c.patient = backend(gw.at("patient"), base, "gateways.patient");

    if (j.contains("ingest")) {
      const auto& in = j["ingest"];
      only_keys(in, {"dedup_threshold", "min_turns", "min_chars_per_turn", "max_non_dialogue_ratio",
                     "scrub_rules", "speaker_aliases"},
                "ingest");
      c.ingest.dedup_threshold = get_or(in, "dedup_threshold", c.ingest.dedup_threshold);
      c.ingest.limits.min_turns = get_or(in, "min_turns", c.ingest.limits.min_turns);
      c.ingest.limits.min_chars_per_turn =
          get_or(in, "min_chars_per_turn", c.ingest.limits.min_chars_per_turn);
      c.ingest.limits.max_non_dialogue_ratio =
          get_or(in, "max_non_dialogue_ratio", c.ingest.limits.max_non_dialogue_ratio);
      if (in.contains("scrub_rules")) {
        c.ingest.scrub_rules = resolve(base, in["scrub_rules"].get<std::string>());
        require_file(*c.ingest.scrub_rules, "ingest.scrub_rules");
      }
      if (in.contains("speaker_aliases")) {
        for (const auto& [label, role] : in["speaker_aliases"].items()) {
          c.ingest.extra_aliases[label] = ingest::speaker_from_string(role.get<std::string>());
        }
      }
    }

    if (j.contains("generation")) {
      const auto& g = j["generation"];
      only_keys(g, {"personas", "scenarios_per_persona", "themes", "min_age", "max_age", "exemplars",
                    "techniques_per_session", "min_turns", "max_turns", "parse_retries"},
                "generation");
      auto& s = c.generation;
      s.personas = get_or(g, "personas", s.personas);
      s.scenarios_per_persona = get_or(g, "scenarios_per_persona", s.scenarios_per_persona);
      s.themes = get_or(g, "themes", s.themes);
      if (g.contains("min_age")) s.min_age = g["min_age"].get<int>();
      if (g.contains("max_age")) s.max_age = g["max_age"].get<int>();
      s.exemplars = get_or(g, "exemplars", s.exemplars);
      s.techniques_per_session = get_or(g, "techniques_per_session", s.techniques_per_session);
      s.min_turns = get_or(g, "min_turns", s.min_turns);
      s.max_turns = get_or(g, "max_turns", s.max_turns);
      s.parse_retries = get_or(g, "parse_retries", s.parse_retries);
    }

    if (j.contains("quality")) {
      const auto& q = j["quality"];
      only_keys(q, {"thresholds", "judge_items", "selection"}, "quality");
      if (q.contains("thresholds")) {
        const auto& t = q["thresholds"];
        only_keys(t, {"coherence", "realism", "therapeutic_value"}, "quality.thresholds");
        c.quality.thresholds.coherence = get_or(t, "coherence", 6);
        c.quality.thresholds.realism = get_or(t, "realism", 6);
        c.quality.thresholds.therapeutic_value = get_or(t, "therapeutic_value", 6);
      }
      c.quality.judge_items = get_or(q, "judge_items", true);
      if (q.contains("selection")) {
        const auto& s = q["selection"];
        only_keys(s, {"top_k", "min_mean"}, "quality.selection");
        quality::SelectionPolicy p;
        if (s.contains("top_k")) p.top_k = s["top_k"].get<std::size_t>();
        if (s.contains("min_mean")) p.min_mean = s["min_mean"].get<double>();
        if (p.top_k.has_value() == p.min_mean.has_value()) {
          throw ConfigError("quality.selection needs exactly one of top_k or min_mean");
        }
        c.quality.selection = p;
      }
    }

    if (j.contains("dataset")) {
      const auto& d = j["dataset"];
      only_keys(d, {"target_total", "train_ratio"}, "dataset");
      c.dataset.target_total = get_or(d, "target_total", c.dataset.target_total);
      c.dataset.train_ratio = get_or(d, "train_ratio", c.dataset.train_ratio);
    }

    if (j.contains("bench")) {
      const auto& b = j["bench"];
      only_keys(b, {"run_id", "max_turns", "holdout_prefix", "models"}, "bench");
      c.bench.run_id = get_or(b, "run_id", c.bench.run_id);
      c.bench.max_turns = get_or(b, "max_turns", c.bench.max_turns);
      c.bench.holdout_prefix = get_or(b, "holdout_prefix", c.bench.holdout_prefix);
      std::set<std::string> labels;
      for (const auto& m : b.value("models", json::array())) {
        only_keys(m, {"label", "backend", "system_prompt"}, "bench.models[]");
        BenchModel model;
        model.label = m.at("label").get<std::string>();
        if (model.label.empty() || !labels.insert(model.label).second) {
          throw ConfigError("bench model labels must be non-empty and unique: '" + model.label + "'");
        }
        model.backend = backend(m.at("backend"), base, "bench model " + model.label);
        if (m.contains("system_prompt")) {
          model.system_prompt = resolve(base, m["system_prompt"].get<std::string>());
          require_file(*model.system_prompt, "system prompt for " + model.label);
        }
        c.bench.models.push_back(std::move(model));
      }
    }

    if (j.contains("review")) {
      const auto& r = j["review"];
      only_keys(r, {"host", "port"}, "review");
      c.review.host = get_or(r, "host", c.review.host);
      c.review.port = get_or(r, "port", c.review.port);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (overrides.seed) {
    c.seed = *overrides.seed;
    c.raw["seed"] = c.seed;
  }
  if (overrides.parallelism) c.parallelism = *overrides.parallelism;

  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(c.parallelism, "parallelism");
  positive(c.generation.personas, "generation.personas");
  positive(c.generation.scenarios_per_persona, "generation.scenarios_per_persona");
  positive(c.generation.techniques_per_session, "generation.techniques_per_session");
  positive(c.generation.min_turns, "generation.min_turns");
  positive(c.dataset.target_total, "dataset.target_total");
  positive(c.bench.max_turns, "bench.max_turns");
  positive(c.ingest.limits.min_turns, "ingest.min_turns");
  if (c.generation.min_turns > c.generation.max_turns) {
    throw ConfigError("generation.min_turns exceeds generation.max_turns");
  }
  if (c.generation.parse_retries < 0) throw ConfigError("generation.parse_retries must be >= 0");
  if (!(c.ingest.dedup_threshold > 0 && c.ingest.dedup_threshold <= 1)) {
    throw ConfigError("ingest.dedup_threshold must lie in (0, 1]");
  }
  if (!(c.ingest.limits.max_non_dialogue_ratio >= 0 && c.ingest.limits.max_non_dialogue_ratio <= 1)) {
    throw ConfigError("ingest.max_non_dialogue_ratio must lie in [0, 1]");
  }
  if (!(c.dataset.train_ratio > 0 && c.dataset.train_ratio < 1)) {
    throw ConfigError("dataset.train_ratio must lie strictly between 0 and 1");
  }
  for (int t : {c.quality.thresholds.coherence, c.quality.thresholds.realism,
                c.quality.thresholds.therapeutic_value}) {
    if (t < 1 || t > 10) throw ConfigError("quality thresholds must lie in [1, 10]");
  }
  if (c.review.port < 0 || c.review.port > 65535) throw ConfigError("review.port out of range");
  return c;
}

PipelineConfig load_config(const fs::path& path, const ConfigOverrides& overrides) {
  if (!fs::is_regular_file(path)) throw ConfigError("config file not found: " + path.string());
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  const auto base = fs::absolute(path).parent_path();
  auto c = parse_config(j, base, overrides);
  c.source = fs::absolute(path).lexically_normal();
  return c;
}

json config_snapshot(const PipelineConfig& config) {
  json snap = config.raw;
  snap.erase("paths");
  return snap;
}

}  // namespace counselforge::pipeline
