#pragma once

#include <string>
#include <vector>

#include <fmt/format.h>

#include "counselforge/common/assets.hpp"
#include "counselforge/eval/benchmark.hpp"
#include "counselforge/eval/conversation.hpp"
#include "counselforge/synthgen/records.hpp"
#include "test_support.hpp"

namespace cftest {

struct BenchFixture {
  std::vector<counselforge::synthgen::ScenarioSpec> situations;
  std::vector<counselforge::eval::ModelUnderTest> models;
  counselforge::eval::BenchmarkConfig config;
};

inline std::string situation_key(std::size_t i) { return fmt::format("topic{}zq", i); }

/// Expected judge scores for cell (situation i, model m).
inline std::pair<double, double> bench_scores(std::size_t i, std::size_t m) {
  return {5.0 + double((i * 7 + m * 3) % 50) / 10.0, 4.0 + double((i * 3 + m * 11) % 60) / 10.0};
}

/// Scripted patient, counselors and judge for `n` situations. The patient
/// closes after `patient_turns` messages.
inline BenchFixture make_bench_fixture(const fs::path& dir, std::size_t n,
                                       const std::vector<std::string>& labels,
                                       std::size_t patient_turns = 3) {
  using nlohmann::json;
  namespace gw = counselforge::gateway;
  BenchFixture f;
  std::vector<json> patient, judge;
  std::vector<std::vector<json>> counselor(labels.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto key = situation_key(i);
    std::string narrative = "The client keeps returning to " + key + ".";
    for (int w = 0; w < 110; ++w) narrative += " detail";
    f.situations.push_back({fmt::format("bench-{:03}", i + 1), "bench", "Situation about " + key,
                            {"Mind Reading"}, narrative});
    for (std::size_t k = 0; k < patient_turns; ++k) {
      std::string line = fmt::format("Patient line {} about {}.", k, key);
      if (k + 1 == patient_turns) line += " [END_SESSION]";
      patient.push_back(json{{"match", key}, {"message_count", 1 + 2 * k}, {"reply", line}});
    }
    for (std::size_t m = 0; m < labels.size(); ++m) {
      for (std::size_t k = 0; k + 1 < patient_turns; ++k) {
        counselor[m].push_back(json{{"match", key},
                                    {"message_count", 1 + 2 * k},
                                    {"reply", fmt::format("({}) reply {} about {}", labels[m], k, key)}});
      }
      auto [e, r] = bench_scores(i, m);
      judge.push_back(json{{"match", fmt::format("({}) reply 0 about {}\n", labels[m], key)},
                           {"reply", fmt::format("empathy: {:.1f}\nrelevance: {:.1f}\nrationale: ok", e, r)}});
    }
  }
  auto scripted = [&](const std::string& name, const std::vector<json>& rules) {
    gw::BackendConfig c;
    c.kind = gw::BackendKind::scripted;
    c.model = name;
    c.fixture = write_rules(dir / (name + ".jsonl"), rules);
    return c;
  };
  for (std::size_t m = 0; m < labels.size(); ++m) {
    f.models.push_back({labels[m], scripted("counselor_" + labels[m], counselor[m]),
                        std::string(counselforge::assets::get("counselor_system_prompt.txt"))});
  }
  f.config.run_id = "test-run";
  f.config.output_root = dir / "bench";
  f.config.patient = scripted("patient", patient);
  f.config.judge = scripted("judge", judge);
  f.config.patient_prompt = counselforge::assets::get("prompts/patient_simulator.txt");
  f.config.judge_rubric = counselforge::assets::get("prompts/judge_conversation.txt");
  f.config.holdout_prefix = "bench-";
  return f;
}

}  // namespace cftest
