#include "counselforge/dataset/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "counselforge/common/hashing.hpp"
#include "counselforge/common/jsonl.hpp"
#include "counselforge/common/random.hpp"
#include "counselforge/common/text.hpp"

namespace counselforge::dataset {

using nlohmann::json;
namespace fs = std::filesystem;

SplitIndices split(std::size_t n, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw PreconditionError("split ratio must lie strictly between 0 and 1");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  deterministic_shuffle(order, seed);
  const auto train_n =
      std::min(n, static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 0.5)));
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_n));
  out.holdout.assign(order.begin() + static_cast<std::ptrdiff_t>(train_n), order.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.holdout.begin(), out.holdout.end());
  return out;
}

std::string serialize_records(const std::vector<FineTuneRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += serialize_record(r);
    out += '\n';
  }
  return out;
}

Dataset assemble(const std::vector<ingest::SessionTranscript>& real,
                 const std::vector<ingest::SessionTranscript>& synthetic_approved,
                 const std::map<std::string, double>& synthetic_scores,
                 const AssemblyOptions& options) {
  std::set<std::string> seen;
  for (const auto* corpus : {&real, &synthetic_approved}) {
    for (const auto& s : *corpus) {
      if (!seen.insert(s.session_id).second) throw DuplicateId("duplicate session_id " + s.session_id);
    }
  }

  Dataset ds;
  auto& m = ds.manifest;
  m.created_at = options.created_at;
  m.config_snapshot = options.config_snapshot;

  auto add = [&](const ingest::SessionTranscript& s) {
    try {
      ds.records.push_back(to_finetune_record(s, options.system_prompt));
      ds.session_ids.push_back(s.session_id);
      return true;
    } catch (const EmptyAfterTrim&) {
      m.skipped.push_back(s.session_id);
      return false;
    }
  };

  std::vector<const ingest::SessionTranscript*> reals;
  for (const auto& s : real) reals.push_back(&s);
  std::sort(reals.begin(), reals.end(),
            [](auto* a, auto* b) { return a->session_id < b->session_id; });
  for (const auto* s : reals) m.real += add(*s) ? 1 : 0;
  if (m.real > options.target_total) {
    m.notes.push_back("real sessions (" + std::to_string(m.real) + ") exceed target_total (" +
                      std::to_string(options.target_total) + "); all real sessions kept");
  }

  auto score_of = [&](const std::string& id) {
    auto it = synthetic_scores.find(id);
    return it == synthetic_scores.end() ? -std::numeric_limits<double>::infinity() : it->second;
  };
  std::vector<const ingest::SessionTranscript*> synth;
  for (const auto& s : synthetic_approved) synth.push_back(&s);
  std::sort(synth.begin(), synth.end(), [&](auto* a, auto* b) {
    const double sa = score_of(a->session_id), sb = score_of(b->session_id);
    if (sa != sb) return sa > sb;
    return a->session_id < b->session_id;
  });
  for (const auto* s : synth) {
    if (ds.records.size() >= options.target_total) break;
    m.synthetic += add(*s) ? 1 : 0;
  }

  m.total = ds.records.size();
  if (m.total < options.target_total) {
    m.notes.push_back("shortfall: " + std::to_string(m.total) + " records available, target_total " +
                      std::to_string(options.target_total));
  }
  for (const auto& r : ds.records) validate_record(r);

  if (m.total > 0) {
    ds.splits = split(m.total, options.train_ratio, options.seed);
  }
  m.train = ds.splits.train.size();
  m.holdout = ds.splits.holdout.size();
  m.checksum = sha256_hex(serialize_records(ds.records));
  return ds;
}

void write_dataset(const fs::path& dir, const Dataset& ds) {
  fs::create_directories(dir);
  write_text_file_atomic(dir / "dataset.jsonl", serialize_records(ds.records));
  auto subset = [&](const std::vector<std::size_t>& idx) {
    std::string out;
    for (auto i : idx) out += serialize_record(ds.records[i]) + "\n";
    return out;
  };
  write_text_file_atomic(dir / "train.jsonl", subset(ds.splits.train));
  write_text_file_atomic(dir / "holdout.jsonl", subset(ds.splits.holdout));
  auto ids = [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(ds.session_ids[i]);
    return out;
  };
  write_json_file(dir / "splits.json",
                  json{{"train", ids(ds.splits.train)}, {"holdout", ids(ds.splits.holdout)}});
  write_json_file(dir / "manifest.json", ds.manifest);
}

std::vector<FineTuneRecord> read_records(const fs::path& path) {
  std::vector<FineTuneRecord> out;
  std::size_t line_no = 0;
  for (const auto& line : text::split(read_text_file(path), '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(parse_record(line));
    } catch (const InvalidRecord& e) {
      throw InvalidRecord(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void to_json(json& j, const DatasetManifest& m) {
  j = json{{"total", m.total},
           {"by_source", {{"real", m.real}, {"synthetic", m.synthetic}}},
           {"splits", {{"train", m.train}, {"holdout", m.holdout}}},
           {"checksum", m.checksum},
           {"checksum_algorithm", m.checksum_algorithm},
           {"created_at", m.created_at},
           {"config_snapshot", m.config_snapshot},
           {"notes", m.notes},
           {"skipped", m.skipped}};
}

void from_json(const json& j, DatasetManifest& m) {
  m.total = j.at("total").get<std::size_t>();
  m.real = j.at("by_source").at("real").get<std::size_t>();
  m.synthetic = j.at("by_source").at("synthetic").get<std::size_t>();
  m.train = j.at("splits").at("train").get<std::size_t>();
  m.holdout = j.at("splits").at("holdout").get<std::size_t>();
  m.checksum = j.at("checksum").get<std::string>();
  m.checksum_algorithm = j.value("checksum_algorithm", std::string("sha256"));
  m.created_at = j.value("created_at", std::string{});
  m.config_snapshot = j.value("config_snapshot", json::object());
  m.notes = j.value("notes", std::vector<std::string>{});
  m.skipped = j.value("skipped", std::vector<std::string>{});
}

}  // namespace counselforge::dataset
