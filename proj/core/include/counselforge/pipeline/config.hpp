#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/gateway/backend_config.hpp"
#include "counselforge/ingest/quality_filter.hpp"
#include "counselforge/ingest/session.hpp"
#include "counselforge/quality/scoring.hpp"
#include "counselforge/quality/selection.hpp"

namespace counselforge::pipeline {

struct Paths {
  std::filesystem::path workspace;
  /// Directory of *.txt (speaker lines) and *.jsonl (corpus) transcripts.
  std::filesystem::path real_transcripts;
  /// Benchmark situations, JSON Lines in the scenario schema.
  std::filesystem::path situations;
  /// Optional directory overriding bundled prompt assets file by file.
  std::optional<std::filesystem::path> assets;
};

struct IngestSettings {
  double dedup_threshold = 0.9;
  ingest::FilterLimits limits;
  std::optional<std::filesystem::path> scrub_rules;
  std::map<std::string, ingest::Speaker> extra_aliases;
};

struct GenerationSettings {
  std::size_t personas = 10;
  std::size_t scenarios_per_persona = 1;
  std::vector<std::string> themes;
  std::optional<int> min_age;
  std::optional<int> max_age;
  std::size_t exemplars = 3;
  std::size_t techniques_per_session = 2;
  std::size_t min_turns = 4;
  std::size_t max_turns = 40;
  int parse_retries = 2;
};

struct QualitySettings {
  quality::FlagThresholds thresholds;
  bool judge_items = true;
  std::optional<quality::SelectionPolicy> selection;
};

struct DatasetSettings {
  std::size_t target_total = 500;
  double train_ratio = 0.9;
};

struct BenchModel {
  std::string label;
  gateway::BackendConfig backend;
  /// Counselor system prompt file; the bundled prompt when unset.
  std::optional<std::filesystem::path> system_prompt;
};

struct BenchSettings {
  std::string run_id = "bench";
  std::size_t max_turns = 20;
  std::string holdout_prefix = "bench-";
  std::vector<BenchModel> models;
};

struct ReviewSettings {
  std::string host = "127.0.0.1";
  int port = 8765;
};

struct PipelineConfig {
  std::filesystem::path source;
  std::uint64_t seed = 42;
  /// Fixed clock for reproducible workspaces ("YYYY-MM-DDThh:mm:ssZ").
  std::optional<std::string> timestamp;
  std::size_t parallelism = 1;
  Paths paths;
  gateway::BackendConfig generator;
  gateway::BackendConfig judge;
  gateway::BackendConfig patient;
  IngestSettings ingest;
  GenerationSettings generation;
  QualitySettings quality;
  DatasetSettings dataset;
  BenchSettings bench;
  ReviewSettings review;
  /// The file as loaded, with overrides applied.
  nlohmann::json raw;
};

/// Command-line overrides applied on top of the file.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> parallelism;
};

/// Relative paths resolve against the config file's directory. Throws
/// ConfigError for a missing/unreadable file, unknown keys, out-of-range
/// values, or referenced files (fixtures, rule files, prompts) that do not
/// exist.
PipelineConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir,
                            const ConfigOverrides& overrides = {});

/// The config as recorded in the dataset manifest: everything but "paths".
nlohmann::json config_snapshot(const PipelineConfig& config);

}  // namespace counselforge::pipeline
