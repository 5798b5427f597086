#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/common/errors.hpp"
#include "counselforge/gateway/gateway.hpp"
#include "counselforge/pipeline/config.hpp"

namespace counselforge::pipeline {

/// A stage cannot run; the message says what to do about it.
class StageError : public Error {
 public:
  using Error::Error;
};

/// Flagged sessions still await a reviewer decision.
class ReviewPending : public StageError {
 public:
  using StageError::StageError;
};

enum class Stage { ingest, personas, scenarios, synth, judge, review_serve, assemble, bench, report, all };

std::string_view to_string(Stage s);
std::optional<Stage> stage_from_string(std::string_view s);

struct RunFlags {
  bool force = false;
  bool skip_review = false;
};

struct StageOutcome {
  std::string stage;
  /// "ran", "skipped" (inputs unchanged since the last run) or "paused".
  std::string status;
  nlohmann::json details = nlohmann::json::object();
};

/// Exclusive ownership of a workspace directory through a .lock file holding
/// the owner's pid. A lock left by a dead process is taken over.
class WorkspaceLock {
 public:
  explicit WorkspaceLock(const std::filesystem::path& workspace);
  ~WorkspaceLock();
  WorkspaceLock(const WorkspaceLock&) = delete;
  WorkspaceLock& operator=(const WorkspaceLock&) = delete;

 private:
  std::filesystem::path path_;
};

/// Workspace layout (all under paths.workspace):
///   ingest/     corpus.jsonl rejected.jsonl duplicates.jsonl clean_report.json
///   personas/   personas.jsonl
///   scenarios/  scenarios.jsonl
///   synth/      sessions.jsonl failures.jsonl
///   judge/      scores.jsonl flags.jsonl item_quality.jsonl diversity.json
///               failures.jsonl [selection.json]
///   review/     events.jsonl state.json
///   dataset/    dataset.jsonl train.jsonl holdout.jsonl splits.json manifest.json
///   bench/<run_id>/  run-manifest.json logs/ scores.csv gaps.csv
///   report/     summary.md summary.json *.csv *.svg
/// Every stage directory also gets stage.json recording a digest of the
/// stage's inputs; a rerun with the same digest is skipped unless forced.
class Pipeline {
 public:
  Pipeline(PipelineConfig config, RunFlags flags);

  /// Runs one stage (review_serve is handled by the CLI) or, for Stage::all,
  /// the whole chain. Returns one outcome per stage executed; `on_stage` sees
  /// each one as soon as its stage finishes.
  std::vector<StageOutcome> run(Stage stage,
                                const std::function<void(const StageOutcome&)>& on_stage = {});

  StageOutcome ingest();
  StageOutcome personas();
  StageOutcome scenarios();
  StageOutcome synth();
  StageOutcome judge();
  StageOutcome assemble();
  StageOutcome bench();
  StageOutcome report();

  const PipelineConfig& config() const noexcept { return config_; }
  std::filesystem::path workspace() const { return config_.paths.workspace; }
  gateway::GatewayPool& gateways() noexcept { return *pool_; }
  WallClock wall_clock() const { return wall_; }

  /// Bundled asset, or its override from paths.assets.
  std::string asset(const std::string& name) const;

 private:
  bool up_to_date(const std::filesystem::path& stage_dir, const std::string& digest) const;
  void stamp(const std::filesystem::path& stage_dir, const std::string& stage,
             const std::string& digest) const;
  nlohmann::json backend_identity(const gateway::BackendConfig& backend) const;

  PipelineConfig config_;
  RunFlags flags_;
  WallClock wall_;
  MonotonicClock mono_;
  std::unique_ptr<gateway::GatewayPool> pool_;
};

}  // namespace counselforge::pipeline
