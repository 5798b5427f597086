#include "counselforge/eval/benchmark.hpp"

#include <map>
#include <mutex>
#include <set>

#include <fmt/format.h>

#include "counselforge/common/errors.hpp"
#include "counselforge/common/jsonl.hpp"
#include "counselforge/common/parallel.hpp"
#include "counselforge/common/text.hpp"

namespace counselforge::eval {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CellKey {
  std::string situation_id;
  std::string model_label;
  auto operator<=>(const CellKey&) const = default;
};

std::string cell_file(const CellKey& k) {
  return "logs/" + sanitize_component(k.situation_id) + "__" + sanitize_component(k.model_label) +
         ".json";
}

json cell_to_json(const CellResult& c) {
  return json{{"log", c.log},
              {"score", c.score ? json(*c.score) : json(nullptr)},
              {"gap", c.gap ? json(*c.gap) : json(nullptr)}};
}

CellResult cell_from_json(const json& j) {
  CellResult c;
  c.log = j.at("log").get<ConversationLog>();
  if (!j.at("score").is_null()) c.score = j["score"].get<ScorePair>();
  if (!j.at("gap").is_null()) c.gap = j["gap"].get<ScoreGap>();
  return c;
}

json run_config(const BenchmarkConfig& config) {
  return json{{"max_turns", config.max_turns}, {"seed", config.seed}};
}

json manifest_json(const BenchmarkConfig& config, const std::vector<CellKey>& order,
                   const std::map<CellKey, CellResult>& settled) {
  json cells = json::array();
  for (const auto& k : order) {
    auto it = settled.find(k);
    if (it == settled.end()) continue;
    cells.push_back(json{{"situation_id", k.situation_id},
                         {"model_label", k.model_label},
                         {"file", cell_file(k)},
                         {"status", it->second.score ? "scored" : "gap"}});
  }
  return json{{"run_id", config.run_id}, {"config", run_config(config)}, {"cells", cells}};
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

void write_tables(const BenchmarkResult& r) {
  std::string scores = "situation_id,model_label,empathy,relevance,combined\n";
  for (const auto& s : r.scores) {
    scores += text::csv_field(s.situation_id) + "," + text::csv_field(s.model_label) + "," +
              fmt_num(s.empathy) + "," + fmt_num(s.relevance) + "," + fmt_num(s.combined()) +
              "\n";
  }
  write_text_file_atomic(r.run_dir / "scores.csv", scores);
  std::string gaps = "situation_id,model_label,reason\n";
  for (const auto& g : r.gaps) {
    gaps += text::csv_field(g.situation_id) + "," + text::csv_field(g.model_label) + "," +
            text::csv_field(g.reason) + "\n";
  }
  write_text_file_atomic(r.run_dir / "gaps.csv", gaps);
}

void collect(BenchmarkResult& r) {
  r.scores.clear();
  r.gaps.clear();
  for (const auto& c : r.cells) {
    if (c.score) r.scores.push_back(*c.score);
    if (c.gap) r.gaps.push_back(*c.gap);
  }
}

}  // namespace

std::string sanitize_component(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

BenchmarkResult run_benchmark(const std::vector<synthgen::ScenarioSpec>& situations,
                              const std::vector<ModelUnderTest>& models,
                              const BenchmarkConfig& config, gateway::GatewayPool& pool) {
  std::set<std::string> seen;
  for (const auto& s : situations) {
    if (!seen.insert(sanitize_component(s.scenario_id)).second) {
      throw PreconditionError("duplicate situation id " + s.scenario_id);
    }
    if (config.holdout_prefix && s.scenario_id.rfind(*config.holdout_prefix, 0) != 0) {
      throw PreconditionError("situation " + s.scenario_id + " is outside the holdout namespace '" +
                              *config.holdout_prefix + "'");
    }
  }
  seen.clear();
  for (const auto& m : models) {
    if (m.label.empty()) throw PreconditionError("model label is empty");
    if (!seen.insert(sanitize_component(m.label)).second) {
      throw PreconditionError("duplicate model label " + m.label);
    }
  }

  BenchmarkResult result;
  result.run_dir = config.output_root / config.run_id;
  fs::create_directories(result.run_dir / "logs");
  const auto manifest_path = result.run_dir / "run-manifest.json";

  std::vector<CellKey> order;
  for (const auto& s : situations) {
    for (const auto& m : models) order.push_back(CellKey{s.scenario_id, m.label});
  }

  std::map<CellKey, CellResult> settled;
  if (!config.force && fs::exists(manifest_path)) {
    const auto manifest = read_json_file(manifest_path);
    if (manifest.value("config", json::object()) != run_config(config)) {
      throw ConfigError("run " + config.run_id +
                        " was started with different settings; rerun with --force");
    }
    for (const auto& e : manifest.at("cells")) {
      CellKey k{e.at("situation_id").get<std::string>(), e.at("model_label").get<std::string>()};
      const auto file = result.run_dir / e.at("file").get<std::string>();
      if (fs::exists(file)) settled.emplace(k, cell_from_json(read_json_file(file)));
    }
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!settled.count(order[i])) pending.push_back(i);
  }
  result.cells_resumed = order.size() - pending.size();
  result.cells_executed = pending.size();

  std::mutex mu;
  auto patient = pending.empty() ? nullptr : pool.get(config.patient);
  auto judge = pending.empty() ? nullptr : pool.get(config.judge);
  SimulationOptions sim;
  sim.run_id = config.run_id;
  sim.max_turns = config.max_turns;
  sim.patient_prompt = config.patient_prompt;
  sim.seed = config.seed;

  parallel_map<int>(pending.size(), config.parallelism, [&](std::size_t p) {
    const std::size_t cell = pending[p];
    const auto& situation = situations[cell / models.size()];
    const auto& model = models[cell % models.size()];
    auto counselor = pool.get(model.backend);

    CellResult r;
    r.log = simulate_conversation(situation, model, *counselor, *patient, sim);
    auto gap = [&](std::string reason) {
      r.gap = ScoreGap{situation.scenario_id, model.label, std::move(reason)};
    };
    if (r.log.terminated_by == TerminatedBy::error) {
      gap("conversation error: " + r.log.error);
    } else if (r.log.turns.empty()) {
      gap("empty conversation");
    } else {
      try {
        r.score = score_conversation(r.log, situation, *judge, config.judge_rubric);
      } catch (const Error& e) {
        gap(std::string("judge: ") + e.what());
      }
    }
    write_json_file(result.run_dir / cell_file(order[cell]), cell_to_json(r));

    std::lock_guard lock(mu);
    settled.emplace(order[cell], std::move(r));
    write_json_file(manifest_path, manifest_json(config, order, settled));
    return 0;
  });

  write_json_file(manifest_path, manifest_json(config, order, settled));
  for (const auto& k : order) result.cells.push_back(settled.at(k));
  collect(result);
  write_tables(result);
  return result;
}

BenchmarkResult load_benchmark(const fs::path& run_dir) {
  BenchmarkResult result;
  result.run_dir = run_dir;
  const auto manifest = read_json_file(run_dir / "run-manifest.json");
  for (const auto& e : manifest.at("cells")) {
    result.cells.push_back(cell_from_json(read_json_file(run_dir / e.at("file").get<std::string>())));
  }
  result.cells_resumed = result.cells.size();
  collect(result);
  return result;
}

}  // namespace counselforge::eval
