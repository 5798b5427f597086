#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/eval/conversation.hpp"

namespace counselforge::eval {

struct MetricStats {
  double mean = 0.0;
  double median = 0.0;
  /// Population standard deviation.
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

/// Throws PreconditionError on an empty list.
MetricStats describe(std::vector<double> values);

struct ModelSummary {
  std::string label;
  MetricStats empathy;
  MetricStats relevance;
  /// Over per-conversation (empathy + relevance) / 2.
  MetricStats combined;
};

struct RunSummary {
  /// Models in order of first appearance in the score list.
  std::vector<ModelSummary> models;
};

/// Per-model statistics. Throws PreconditionError on an empty list.
RunSummary summarize(const std::vector<ScorePair>& scores);

/// Markdown table, one row per model and metric, values to two decimals.
std::string render_summary_table(const RunSummary& summary);

/// Writes summary.md, summary.json, summary.csv, distribution.csv,
/// scores_scatter.csv and the SVG charts distribution.svg, scatter.svg,
/// empathy_by_model.svg, relevance_by_model.svg into `dir`. Returns the paths
/// written.
std::vector<std::filesystem::path> emit_report(const RunSummary& summary,
                                               const std::vector<ScorePair>& scores,
                                               const std::vector<ScoreGap>& gaps,
                                               const std::filesystem::path& dir);

void to_json(nlohmann::json& j, const MetricStats& s);
void to_json(nlohmann::json& j, const RunSummary& s);

}  // namespace counselforge::eval
