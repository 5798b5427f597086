#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "counselforge/eval/conversation.hpp"
#include "counselforge/gateway/gateway.hpp"

namespace counselforge::eval {

struct BenchmarkConfig {
  std::string run_id = "run";
  /// Run directory is output_root / run_id.
  std::filesystem::path output_root = "bench";
  std::size_t max_turns = 20;
  std::size_t parallelism = 1;
  std::uint64_t seed = 42;
  gateway::BackendConfig patient;
  gateway::BackendConfig judge;
  std::string patient_prompt;
  std::string judge_rubric;
  /// When set, every situation id must start with it (benchmark holdout).
  std::optional<std::string> holdout_prefix;
  /// Re-run cells already settled in the run manifest.
  bool force = false;
};

/// A settled (situation, model) cell: a log plus either a score or a gap.
struct CellResult {
  ConversationLog log;
  std::optional<ScorePair> score;
  std::optional<ScoreGap> gap;
};

struct BenchmarkResult {
  std::filesystem::path run_dir;
  /// Situation-major, models in the given order.
  std::vector<CellResult> cells;
  std::vector<ScorePair> scores;
  std::vector<ScoreGap> gaps;
  std::size_t cells_executed = 0;
  std::size_t cells_resumed = 0;
};

/// File-safe form of a model label or situation id.
std::string sanitize_component(std::string_view s);

/// Runs every situation x model cell (concurrently up to `parallelism`),
/// writing logs/<situation>__<model>.json per cell, run-manifest.json,
/// scores.csv and gaps.csv under the run directory. Cells already settled in
/// the manifest are loaded instead of re-run, so a completed run repeats with
/// zero backend calls. Situation ids and model labels must be unique.
BenchmarkResult run_benchmark(const std::vector<synthgen::ScenarioSpec>& situations,
                              const std::vector<ModelUnderTest>& models,
                              const BenchmarkConfig& config, gateway::GatewayPool& pool);

/// Reads a finished run back from its directory (manifest order).
BenchmarkResult load_benchmark(const std::filesystem::path& run_dir);

}  // namespace counselforge::eval
