#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "counselforge/common/errors.hpp"
#include "counselforge/dataset/finetune.hpp"
#include "counselforge/ingest/session.hpp"

namespace counselforge::dataset {

class DuplicateId : public Error {
 public:
  using Error::Error;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> holdout;
};

/// Shuffles [0, n) with `seed`; the first round_half_up(ratio * n) go to
/// train, the rest to holdout. Both lists come back sorted. ratio must lie
/// strictly between 0 and 1 (PreconditionError).
SplitIndices split(std::size_t n, double ratio, std::uint64_t seed);

struct DatasetManifest {
  std::size_t total = 0;
  std::size_t real = 0;
  std::size_t synthetic = 0;
  std::size_t train = 0;
  std::size_t holdout = 0;
  std::string checksum;
  std::string checksum_algorithm = "sha256";
  std::string created_at;
  nlohmann::json config_snapshot = nlohmann::json::object();
  std::vector<std::string> notes;
  /// Sessions left out because nothing remained after trimming.
  std::vector<std::string> skipped;
};

struct AssemblyOptions {
  std::size_t target_total = 500;
  double train_ratio = 0.9;
  std::uint64_t seed = 42;
  std::string system_prompt;
  std::string created_at;
  nlohmann::json config_snapshot = nlohmann::json::object();
};

struct Dataset {
  std::vector<FineTuneRecord> records;
  /// Source session of each record, parallel to `records`.
  std::vector<std::string> session_ids;
  SplitIndices splits;
  DatasetManifest manifest;
};

/// Takes every real session, then fills up to target_total with synthetic
/// sessions ranked by `synthetic_scores` (descending, ties and unscored
/// sessions by id). Real sessions are never dropped to meet the target. A
/// supply below the target is noted in the manifest. Throws DuplicateId when
/// a session_id repeats within or across the corpora.
Dataset assemble(const std::vector<ingest::SessionTranscript>& real,
                 const std::vector<ingest::SessionTranscript>& synthetic_approved,
                 const std::map<std::string, double>& synthetic_scores,
                 const AssemblyOptions& options);

/// The exact bytes written to dataset.jsonl.
std::string serialize_records(const std::vector<FineTuneRecord>& records);

/// dataset.jsonl, train.jsonl, holdout.jsonl, splits.json and manifest.json.
void write_dataset(const std::filesystem::path& dir, const Dataset& dataset);

/// Reads dataset.jsonl back, validating every line.
std::vector<FineTuneRecord> read_records(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const DatasetManifest& m);
void from_json(const nlohmann::json& j, DatasetManifest& m);

}  // namespace counselforge::dataset
