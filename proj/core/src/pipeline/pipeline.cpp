#include "counselforge/pipeline/pipeline.hpp"

#include <algorithm>
#include <csignal>
#include <fstream>
#include <set>
#include <type_traits>
#include <variant>

#include <sys/types.h>
#include <unistd.h>

#include "counselforge/common/assets.hpp"
#include "counselforge/common/hashing.hpp"
#include "counselforge/common/jsonl.hpp"
#include "counselforge/common/parallel.hpp"
#include "counselforge/common/random.hpp"
#include "counselforge/common/text.hpp"
#include "counselforge/dataset/assemble.hpp"
#include "counselforge/eval/benchmark.hpp"
#include "counselforge/eval/summary.hpp"
#include "counselforge/ingest/dedup.hpp"
#include "counselforge/ingest/errors.hpp"
#include "counselforge/ingest/quality_filter.hpp"
#include "counselforge/ingest/scrub.hpp"
#include "counselforge/ingest/transcript_parser.hpp"
#include "counselforge/quality/diversity.hpp"
#include "counselforge/quality/scoring.hpp"
#include "counselforge/quality/selection.hpp"
#include "counselforge/review/review_store.hpp"
#include "counselforge/synthgen/generate.hpp"
#include "counselforge/synthgen/taxonomy.hpp"

namespace counselforge::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kPersonaPrompt = "prompts/persona.txt";
constexpr const char* kScenarioPrompt = "prompts/scenario.txt";
constexpr const char* kSessionPrompt = "prompts/session.txt";
constexpr const char* kJudgeSessionPrompt = "prompts/judge_session.txt";
constexpr const char* kJudgeItemPrompt = "prompts/judge_item.txt";
constexpr const char* kJudgeConversationPrompt = "prompts/judge_conversation.txt";
constexpr const char* kPatientPrompt = "prompts/patient_simulator.txt";
constexpr const char* kCounselorPrompt = "counselor_system_prompt.txt";

std::string file_digest(const fs::path& p) {
  return fs::exists(p) ? sha256_hex(read_text_file(p)) : std::string("absent");
}

std::string digest_of(const json& inputs) { return sha256_hex(inputs.dump()); }

fs::path need(const fs::path& p, const std::string& hint) {
  if (!fs::exists(p)) throw StageError(p.string() + " is missing; " + hint);
  return p;
}

std::string error_row_reason(const std::exception& e) { return e.what(); }

}  // namespace

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::ingest: return "ingest";
    case Stage::personas: return "personas";
    case Stage::scenarios: return "scenarios";
    case Stage::synth: return "synth";
    case Stage::judge: return "judge";
    case Stage::review_serve: return "review-serve";
    case Stage::assemble: return "assemble";
    case Stage::bench: return "bench";
    case Stage::report: return "report";
    case Stage::all: return "all";
  }
  return "all";
}

std::optional<Stage> stage_from_string(std::string_view s) {
  for (auto st : {Stage::ingest, Stage::personas, Stage::scenarios, Stage::synth, Stage::judge,
                  Stage::review_serve, Stage::assemble, Stage::bench, Stage::report, Stage::all}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

WorkspaceLock::WorkspaceLock(const fs::path& workspace) : path_(workspace / ".lock") {
  fs::create_directories(workspace);
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (f) {
      std::fprintf(f, "%ld\n", static_cast<long>(::getpid()));
      std::fclose(f);
      return;
    }
    long owner = 0;
    std::ifstream(path_) >> owner;
    if (owner > 0 && ::kill(static_cast<pid_t>(owner), 0) == 0) {
      throw StageError("workspace " + workspace.string() + " is in use by process " +
                       std::to_string(owner));
    }
    fs::remove(path_);
  }
  throw StageError("cannot lock workspace " + workspace.string());
}

WorkspaceLock::~WorkspaceLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

Pipeline::Pipeline(PipelineConfig config, RunFlags flags)
    : config_(std::move(config)), flags_(flags) {
  if (config_.timestamp) {
    wall_ = frozen_wall_clock(*parse_iso8601(*config_.timestamp));
    mono_ = frozen_monotonic_clock();
  } else {
    wall_ = system_wall_clock();
    mono_ = system_monotonic_clock();
  }
  pool_ = std::make_unique<gateway::GatewayPool>(mono_);
}

std::string Pipeline::asset(const std::string& name) const {
  if (config_.paths.assets) {
    const auto p = *config_.paths.assets / name;
    if (fs::exists(p)) return read_text_file(p);
  }
  return std::string(assets::get(name));
}

bool Pipeline::up_to_date(const fs::path& dir, const std::string& digest) const {
  if (flags_.force) return false;
  const auto p = dir / "stage.json";
  if (!fs::exists(p)) return false;
  try {
    return read_json_file(p).value("inputs_digest", std::string{}) == digest;
  } catch (const Error&) {
    return false;
  }
}

void Pipeline::stamp(const fs::path& dir, const std::string& stage, const std::string& digest) const {
  write_json_file(dir / "stage.json", json{{"stage", stage}, {"inputs_digest", digest}});
}

json Pipeline::backend_identity(const gateway::BackendConfig& backend) const {
  // Fixture contents rather than their location, so copies of a workspace
  // configuration produce the same digests.
  json j = gateway::to_json(backend);
  j.erase("fixture");
  if (backend.kind != gateway::BackendKind::remote) j["fixture_sha256"] = file_digest(backend.fixture);
  return j;
}

std::vector<StageOutcome> Pipeline::run(Stage stage,
                                        const std::function<void(const StageOutcome&)>& on_stage) {
  std::vector<StageOutcome> out;
  auto done = [&](StageOutcome o) {
    if (on_stage) on_stage(o);
    out.push_back(std::move(o));
  };
  switch (stage) {
    case Stage::ingest: done(ingest()); return out;
    case Stage::personas: done(personas()); return out;
    case Stage::scenarios: done(scenarios()); return out;
    case Stage::synth: done(synth()); return out;
    case Stage::judge: done(judge()); return out;
    case Stage::assemble: done(assemble()); return out;
    case Stage::bench: done(bench()); return out;
    case Stage::report: done(report()); return out;
    case Stage::review_serve:
      throw StageError("review-serve runs from the command line only");
    case Stage::all: break;
  }
  for (auto step : {&Pipeline::ingest, &Pipeline::personas, &Pipeline::scenarios,
                    &Pipeline::synth, &Pipeline::judge}) {
    done((this->*step)());
  }
  try {
    done(assemble());
  } catch (const ReviewPending& e) {
    done(StageOutcome{"assemble", "paused", json{{"reason", e.what()}}});
    return out;
  }
  done(bench());
  done(report());
  return out;
}

StageOutcome Pipeline::ingest() {
  const auto& src = config_.paths.real_transcripts;
  if (!fs::is_directory(src)) {
    throw StageError("real transcripts directory " + src.string() +
                     " not found; set paths.real_transcripts in the config");
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(src)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".txt" || ext == ".jsonl")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  const std::string rules_text = config_.ingest.scrub_rules
                                     ? read_text_file(*config_.ingest.scrub_rules)
                                     : asset("scrub_rules.json");
  json inputs{{"stage", "ingest"}, {"settings", config_.raw.value("ingest", json::object())},
              {"rules", sha256_hex(rules_text)}};
  for (const auto& f : files) inputs["files"].push_back({f.filename().string(), file_digest(f)});
  const auto dir = workspace() / "ingest";
  const auto digest = digest_of(inputs);
  if (up_to_date(dir, digest)) return {"ingest", "skipped", {}};

  ingest::Scrubber scrubber(ingest::parse_scrub_rules(json::parse(rules_text)));
  auto aliases = ingest::default_speaker_aliases();
  for (const auto& [k, v] : config_.ingest.extra_aliases) aliases[text::to_lower(k)] = v;

  std::vector<ingest::SessionTranscript> parsed;
  std::vector<json> rejected;
  for (const auto& f : files) {
    if (f.extension() == ".txt") {
      try {
        parsed.push_back(ingest::parse_transcript(
            {f.stem().string(), f.stem().string(), read_text_file(f)},
            ingest::TranscriptFormat::speaker_lines, aliases));
      } catch (const Error& e) {
        rejected.push_back(json{{"source", f.filename().string()}, {"reason", e.what()}});
      }
    } else {
      for (auto& s : ingest::read_corpus(f)) {
        s.source = ingest::Source::real;
        parsed.push_back(std::move(s));
      }
    }
  }

  ingest::CleanReport report;
  std::vector<ingest::SessionTranscript> passing;
  std::set<std::string> ids;
  for (auto& s : parsed) {
    try {
      if (!ids.insert(s.session_id).second) {
        throw ingest::InvalidSession("session id appears twice in the input");
      }
      auto scrubbed = scrubber(s);
      report += scrubbed.report;
      auto session = std::move(scrubbed.session);
      if (session.turns.front().speaker == ingest::Speaker::counselor) {
        session.turns.erase(session.turns.begin());
        for (std::size_t i = 0; i < session.turns.size(); ++i) session.turns[i].index = i;
        session.annotations["trimmed_leading_counselor"] = "true";
        ingest::validate_session(session);
      }
      const auto verdict = ingest::quality_filter(session, config_.ingest.limits);
      if (!verdict.pass) {
        rejected.push_back(json{{"source", s.session_id}, {"reason", "quality_filter"},
                                {"details", verdict.reasons}});
        continue;
      }
      ingest::annotate(session);
      passing.push_back(std::move(session));
    } catch (const Error& e) {
      rejected.push_back(json{{"source", s.session_id}, {"reason", e.what()}});
    }
  }

  auto deduped = ingest::dedup(passing, config_.ingest.dedup_threshold);
  fs::create_directories(dir);
  ingest::write_corpus(dir / "corpus.jsonl", deduped.kept);
  write_jsonl(dir / "rejected.jsonl", rejected);
  std::vector<json> dups;
  for (const auto& d : deduped.dropped) {
    dups.push_back(json{{"dropped_id", d.dropped_id}, {"kept_id", d.kept_id},
                        {"similarity", d.similarity}});
  }
  write_jsonl(dir / "duplicates.jsonl", dups);
  write_json_file(dir / "clean_report.json", report);
  stamp(dir, "ingest", digest);
  return {"ingest", "ran",
          json{{"files", files.size()}, {"rejected", rejected.size()},
               {"duplicates", dups.size()}, {"kept", deduped.kept.size()}}};
}

StageOutcome Pipeline::personas() {
  const auto tmpl = asset(kPersonaPrompt);
  const json inputs{{"stage", "personas"},
                    {"seed", config_.seed},
                    {"generation", config_.raw.value("generation", json::object())},
                    {"backend", backend_identity(config_.generator)},
                    {"template", sha256_hex(tmpl)}};
  const auto dir = workspace() / "personas";
  const auto digest = digest_of(inputs);
  if (up_to_date(dir, digest)) return {"personas", "skipped", {}};

  synthgen::PersonaConstraints constraints;
  constraints.min_age = config_.generation.min_age;
  constraints.max_age = config_.generation.max_age;
  constraints.themes = config_.generation.themes;
  synthgen::GenerationOptions opts;
  opts.seed = config_.seed;
  opts.parse_retries = config_.generation.parse_retries;
  opts.parallelism = config_.parallelism;
  auto gw = pool_->get(config_.generator);
  const auto personas =
      synthgen::generate_personas(config_.generation.personas, constraints, *gw, tmpl, opts);
  fs::create_directories(dir);
  write_jsonl(dir / "personas.jsonl", to_json_rows(personas));
  stamp(dir, "personas", digest);
  return {"personas", "ran", json{{"personas", personas.size()}}};
}

StageOutcome Pipeline::scenarios() {
  const auto personas_path =
      need(workspace() / "personas" / "personas.jsonl", "run `counselforge personas` first");
  const auto tmpl = asset(kScenarioPrompt);
  const json inputs{{"stage", "scenarios"},
                    {"seed", config_.seed},
                    {"personas", file_digest(personas_path)},
                    {"generation", config_.raw.value("generation", json::object())},
                    {"backend", backend_identity(config_.generator)},
                    {"template", sha256_hex(tmpl)}};
  const auto dir = workspace() / "scenarios";
  const auto digest = digest_of(inputs);
  if (up_to_date(dir, digest)) return {"scenarios", "skipped", {}};

  const auto personas = from_json_rows<synthgen::Persona>(read_jsonl(personas_path));
  synthgen::ScenarioOptions opts;
  opts.seed = config_.seed;
  opts.parse_retries = config_.generation.parse_retries;
  opts.parallelism = config_.parallelism;
  opts.scenarios_per_persona = config_.generation.scenarios_per_persona;
  auto gw = pool_->get(config_.generator);
  const auto scenarios =
      synthgen::generate_scenarios(personas, config_.generation.themes, *gw, tmpl, opts);
  for (const auto& s : scenarios) {
    if (!config_.bench.holdout_prefix.empty() &&
        s.scenario_id.rfind(config_.bench.holdout_prefix, 0) == 0) {
      throw StageError("generated scenario id " + s.scenario_id +
                       " collides with the benchmark holdout prefix '" +
                       config_.bench.holdout_prefix + "'");
    }
  }
  fs::create_directories(dir);
  write_jsonl(dir / "scenarios.jsonl", to_json_rows(scenarios));
  stamp(dir, "scenarios", digest);
  return {"scenarios", "ran", json{{"scenarios", scenarios.size()}}};
}

StageOutcome Pipeline::synth() {
  const auto scenarios_path =
      need(workspace() / "scenarios" / "scenarios.jsonl", "run `counselforge scenarios` first");
  const auto corpus_path =
      need(workspace() / "ingest" / "corpus.jsonl", "run `counselforge ingest` first");
  const auto tmpl = asset(kSessionPrompt);
  const auto techniques_text = asset("techniques.json");
  const json inputs{{"stage", "synth"},
                    {"seed", config_.seed},
                    {"scenarios", file_digest(scenarios_path)},
                    {"corpus", file_digest(corpus_path)},
                    {"generation", config_.raw.value("generation", json::object())},
                    {"backend", backend_identity(config_.generator)},
                    {"template", sha256_hex(tmpl)},
                    {"techniques", sha256_hex(techniques_text)}};
  const auto dir = workspace() / "synth";
  const auto digest = digest_of(inputs);
  if (up_to_date(dir, digest)) return {"synth", "skipped", {}};

  const auto scenarios = from_json_rows<synthgen::ScenarioSpec>(read_jsonl(scenarios_path));
  auto real = ingest::read_corpus(corpus_path);
  std::sort(real.begin(), real.end(),
            [](const auto& a, const auto& b) { return a.session_id < b.session_id; });
  const auto catalog = synthgen::TechniqueCatalog::with_core(
      json::parse(techniques_text).at("techniques").get<std::vector<std::string>>());

  synthgen::SynthesisOptions opts;
  opts.max_exemplars = config_.generation.exemplars;
  opts.min_turns = config_.generation.min_turns;
  opts.max_turns = config_.generation.max_turns;
  opts.seed = config_.seed;
  opts.parse_retries = config_.generation.parse_retries;
  auto gw = pool_->get(config_.generator);

  struct Outcome {
    std::optional<ingest::SessionTranscript> session;
    std::string error;
  };
  const auto outcomes = parallel_map<Outcome>(
      scenarios.size(), config_.parallelism, [&](std::size_t i) -> Outcome {
        const auto& sc = scenarios[i];
        auto order = real;
        deterministic_shuffle(order, derive_seed(config_.seed, "exemplars|" + sc.scenario_id));
        std::vector<synthgen::FewShotExemplar> exemplars;
        for (std::size_t k = 0; k < order.size() && k < opts.max_exemplars; ++k) {
          exemplars.push_back(synthgen::make_exemplar(order[k]));
        }
        const auto techniques = catalog.sample(
            config_.generation.techniques_per_session,
            derive_seed(config_.seed, "techniques|" + sc.scenario_id));
        try {
          return {synthgen::synthesize_session(sc, exemplars, techniques, *gw, tmpl, opts), {}};
        } catch (const Error& e) {
          return {std::nullopt, error_row_reason(e)};
        }
      });

  std::vector<ingest::SessionTranscript> sessions;
  std::vector<json> failures;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].session) {
      sessions.push_back(*outcomes[i].session);
    } else {
      failures.push_back(json{{"scenario_id", scenarios[i].scenario_id}, {"reason", outcomes[i].error}});
    }
  }
  std::sort(sessions.begin(), sessions.end(),
            [](const auto& a, const auto& b) { return a.session_id < b.session_id; });
  fs::create_directories(dir);
  ingest::write_corpus(dir / "sessions.jsonl", sessions);
  write_jsonl(dir / "failures.jsonl", failures);
  stamp(dir, "synth", digest);
  return {"synth", "ran", json{{"sessions", sessions.size()}, {"failures", failures.size()}}};
}

StageOutcome Pipeline::judge() {
  const auto sessions_path =
      need(workspace() / "synth" / "sessions.jsonl", "run `counselforge synth` first");
  const auto corpus_path =
      need(workspace() / "ingest" / "corpus.jsonl", "run `counselforge ingest` first");
  const auto personas_path = workspace() / "personas" / "personas.jsonl";
  const auto scenarios_path = workspace() / "scenarios" / "scenarios.jsonl";
  const auto rubric = asset(kJudgeSessionPrompt);
  const auto item_rubric = asset(kJudgeItemPrompt);
  const json inputs{{"stage", "judge"},
                    {"sessions", file_digest(sessions_path)},
                    {"corpus", file_digest(corpus_path)},
                    {"personas", file_digest(personas_path)},
                    {"scenarios", file_digest(scenarios_path)},
                    {"quality", config_.raw.value("quality", json::object())},
                    {"backend", backend_identity(config_.judge)},
                    {"rubric", sha256_hex(rubric)},
                    {"item_rubric", sha256_hex(item_rubric)}};
  const auto dir = workspace() / "judge";
  const auto digest = digest_of(inputs);
  if (up_to_date(dir, digest)) return {"judge", "skipped", {}};

  const auto sessions = ingest::read_corpus(sessions_path);
  auto gw = pool_->get(config_.judge);

  struct Judged {
    std::optional<quality::QualityScore> score;
    std::string error;
  };
  const auto judged = parallel_map<Judged>(sessions.size(), config_.parallelism,
                                           [&](std::size_t i) -> Judged {
                                             try {
                                               return {quality::judge_session(sessions[i], rubric, *gw), {}};
                                             } catch (const Error& e) {
                                               return {std::nullopt, e.what()};
                                             }
                                           });

  std::vector<quality::QualityScore> scores;
  std::vector<json> flags_rows, failures;
  std::map<std::string, quality::QualityScore> by_id;
  std::vector<std::string> unflagged;
  review::ReviewStore store(workspace() / "review", wall_);
  std::size_t enqueued = 0;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    if (!judged[i].score) {
      failures.push_back(json{{"session_id", sessions[i].session_id}, {"reason", judged[i].error}});
      continue;
    }
    const auto& score = *judged[i].score;
    scores.push_back(score);
    by_id[score.session_id] = score;
    const auto flags = quality::flag_session(score, config_.quality.thresholds);
    for (const auto& f : flags) flags_rows.emplace_back(f);
    if (flags.empty()) {
      unflagged.push_back(score.session_id);
    } else if (!store.contains(sessions[i].session_id)) {
      store.enqueue(sessions[i], flags, score);
      ++enqueued;
    }
  }

  std::vector<json> item_rows;
  if (config_.quality.judge_items) {
    std::vector<quality::JudgedItem> items;
    if (fs::exists(personas_path)) {
      for (auto& p : from_json_rows<synthgen::Persona>(read_jsonl(personas_path))) items.emplace_back(p);
    }
    if (fs::exists(scenarios_path)) {
      for (auto& s : from_json_rows<synthgen::ScenarioSpec>(read_jsonl(scenarios_path))) {
        items.emplace_back(s);
      }
    }
    const auto rows = parallel_map<json>(items.size(), config_.parallelism, [&](std::size_t i) {
      try {
        return json(quality::judge_naturalness_correctness(items[i], item_rubric, *gw));
      } catch (const Error& e) {
        const auto id = std::visit(
            [](const auto& v) {
              if constexpr (std::is_same_v<std::decay_t<decltype(v)>, synthgen::Persona>) {
                return v.persona_id;
              } else {
                return v.scenario_id;
              }
            },
            items[i]);
        return json{{"item_id", id}, {"error", e.what()}};
      }
    });
    item_rows.assign(rows.begin(), rows.end());
  }

  json diversity = json::object();
  if (sessions.size() >= 2) diversity["synthetic"] = quality::corpus_diversity(sessions);
  const auto real = ingest::read_corpus(corpus_path);
  if (real.size() >= 2) diversity["real"] = quality::corpus_diversity(real);

  fs::create_directories(dir);
  write_jsonl(dir / "scores.jsonl", to_json_rows(scores));
  write_jsonl(dir / "flags.jsonl", flags_rows);
  write_jsonl(dir / "item_quality.jsonl", item_rows);
  write_jsonl(dir / "failures.jsonl", failures);
  write_json_file(dir / "diversity.json", diversity);
  if (config_.quality.selection) {
    const auto sel = quality::select_top(unflagged, by_id, *config_.quality.selection);
    write_json_file(dir / "selection.json", json{{"kept", sel.kept}, {"dropped", sel.dropped}});
  } else {
    fs::remove(dir / "selection.json");
  }
  stamp(dir, "judge", digest);
  return {"judge", "ran",
          json{{"scored", scores.size()}, {"flagged", scores.size() - unflagged.size()},
               {"enqueued", enqueued}, {"failures", failures.size()},
               {"pending_review", store.pending_count()}}};
}

StageOutcome Pipeline::assemble() {
  const auto corpus_path =
      need(workspace() / "ingest" / "corpus.jsonl", "run `counselforge ingest` first");
  const auto sessions_path =
      need(workspace() / "synth" / "sessions.jsonl", "run `counselforge synth` first");
  const auto scores_path =
      need(workspace() / "judge" / "scores.jsonl", "run `counselforge judge` first");
  const auto selection_path = workspace() / "judge" / "selection.json";

  review::ReviewStore store(workspace() / "review", wall_);
  const auto pending = store.pending_count();
  if (pending > 0 && !flags_.skip_review) {
    throw ReviewPending(std::to_string(pending) +
                        " flagged session(s) await review; decide them via `counselforge "
                        "review-serve` or rerun with --skip-review to leave them out");
  }

  const auto system_prompt = asset(kCounselorPrompt);
  const json inputs{{"stage", "assemble"},
                    {"seed", config_.seed},
                    {"timestamp", config_.timestamp.value_or("")},
                    {"corpus", file_digest(corpus_path)},
                    {"sessions", file_digest(sessions_path)},
                    {"scores", file_digest(scores_path)},
                    {"selection", file_digest(selection_path)},
                    {"review", file_digest(store.state_path())},
                    {"dataset", config_.raw.value("dataset", json::object())},
                    {"skip_review", flags_.skip_review},
                    {"system_prompt", sha256_hex(system_prompt)}};
  const auto dir = workspace() / "dataset";
  const auto digest = digest_of(inputs);
  if (up_to_date(dir, digest)) return {"assemble", "skipped", {}};

  const auto real = ingest::read_corpus(corpus_path);
  const auto sessions = ingest::read_corpus(sessions_path);
  std::map<std::string, double> means;
  for (const auto& s : from_json_rows<quality::QualityScore>(read_jsonl(scores_path))) {
    means[s.session_id] = s.mean();
  }
  std::optional<std::set<std::string>> selected;
  if (fs::exists(selection_path)) {
    const auto kept = read_json_file(selection_path).at("kept").get<std::vector<std::string>>();
    selected.emplace(kept.begin(), kept.end());
  }

  std::vector<ingest::SessionTranscript> synthetic;
  for (const auto& s : sessions) {
    if (!means.count(s.session_id) || store.contains(s.session_id)) continue;
    if (selected && !selected->count(s.session_id)) continue;
    synthetic.push_back(s);
  }
  for (auto& s : store.export_approved()) synthetic.push_back(std::move(s));

  dataset::AssemblyOptions opts;
  opts.target_total = config_.dataset.target_total;
  opts.train_ratio = config_.dataset.train_ratio;
  opts.seed = config_.seed;
  opts.system_prompt = system_prompt;
  opts.created_at = format_iso8601(wall_());
  opts.config_snapshot = config_snapshot(config_);
  auto ds = dataset::assemble(real, synthetic, means, opts);
  if (pending > 0) {
    ds.manifest.notes.push_back(std::to_string(pending) +
                                " flagged session(s) still pending review were left out");
  }
  dataset::write_dataset(dir, ds);
  stamp(dir, "assemble", digest);
  return {"assemble", "ran",
          json{{"total", ds.manifest.total}, {"real", ds.manifest.real},
               {"synthetic", ds.manifest.synthetic}, {"train", ds.manifest.train},
               {"holdout", ds.manifest.holdout}, {"checksum", ds.manifest.checksum},
               {"notes", ds.manifest.notes}}};
}

StageOutcome Pipeline::bench() {
  const auto& situations_path = config_.paths.situations;
  if (!fs::exists(situations_path)) {
    throw StageError("situations file " + situations_path.string() +
                     " not found; point paths.situations at a JSON Lines file of benchmark "
                     "situations (scenario schema, ids starting with '" +
                     config_.bench.holdout_prefix + "')");
  }
  if (config_.bench.models.empty()) {
    throw StageError("bench.models is empty; list the counselor models to compare in the config");
  }
  const auto patient_prompt = asset(kPatientPrompt);
  const auto rubric = asset(kJudgeConversationPrompt);
  const auto default_prompt = asset(kCounselorPrompt);

  std::vector<eval::ModelUnderTest> models;
  json model_ids = json::array();
  for (const auto& m : config_.bench.models) {
    const auto prompt = m.system_prompt ? read_text_file(*m.system_prompt) : default_prompt;
    models.push_back(eval::ModelUnderTest{m.label, m.backend, prompt});
    model_ids.push_back(json{{"label", m.label},
                             {"backend", backend_identity(m.backend)},
                             {"prompt", sha256_hex(prompt)}});
  }
  const json inputs{{"stage", "bench"},
                    {"seed", config_.seed},
                    {"situations", file_digest(situations_path)},
                    {"models", model_ids},
                    {"patient", backend_identity(config_.patient)},
                    {"judge", backend_identity(config_.judge)},
                    {"bench", config_.raw.value("bench", json::object())},
                    {"patient_prompt", sha256_hex(patient_prompt)},
                    {"rubric", sha256_hex(rubric)}};
  const auto dir = workspace() / "bench";
  const auto digest = digest_of(inputs);
  if (up_to_date(dir, digest)) return {"bench", "skipped", {}};

  std::vector<synthgen::ScenarioSpec> situations;
  try {
    situations = from_json_rows<synthgen::ScenarioSpec>(read_jsonl(situations_path));
  } catch (const nlohmann::json::exception& e) {
    throw StageError(situations_path.string() + ": " + e.what());
  }
  for (const auto& s : situations) synthgen::validate(s);
  const auto scenarios_path = workspace() / "scenarios" / "scenarios.jsonl";
  if (fs::exists(scenarios_path)) {
    std::set<std::string> training;
    for (const auto& s : from_json_rows<synthgen::ScenarioSpec>(read_jsonl(scenarios_path))) {
      training.insert(s.scenario_id);
    }
    for (const auto& s : situations) {
      if (training.count(s.scenario_id)) {
        throw StageError("benchmark situation " + s.scenario_id + " is also a training scenario");
      }
    }
  }

  eval::BenchmarkConfig bc;
  bc.run_id = config_.bench.run_id;
  bc.output_root = dir;
  bc.max_turns = config_.bench.max_turns;
  bc.parallelism = config_.parallelism;
  bc.seed = config_.seed;
  bc.patient = config_.patient;
  bc.judge = config_.judge;
  bc.patient_prompt = patient_prompt;
  bc.judge_rubric = rubric;
  if (!config_.bench.holdout_prefix.empty()) bc.holdout_prefix = config_.bench.holdout_prefix;
  bc.force = flags_.force;
  const auto calls_before = pool_->total_backend_calls();
  const auto result = eval::run_benchmark(situations, models, bc, *pool_);
  stamp(dir, "bench", digest);
  return {"bench", "ran",
          json{{"run_id", bc.run_id}, {"cells", result.cells.size()},
               {"scores", result.scores.size()}, {"gaps", result.gaps.size()},
               {"executed", result.cells_executed}, {"resumed", result.cells_resumed},
               {"backend_calls", pool_->total_backend_calls() - calls_before}}};
}

StageOutcome Pipeline::report() {
  const auto run_dir = workspace() / "bench" / config_.bench.run_id;
  need(run_dir / "run-manifest.json", "run `counselforge bench` first");
  const json inputs{{"stage", "report"},
                    {"scores", file_digest(run_dir / "scores.csv")},
                    {"gaps", file_digest(run_dir / "gaps.csv")}};
  const auto dir = workspace() / "report";
  const auto digest = digest_of(inputs);
  if (up_to_date(dir, digest)) return {"report", "skipped", {}};

  const auto run = eval::load_benchmark(run_dir);
  if (run.scores.empty()) {
    throw StageError("benchmark run " + config_.bench.run_id +
                     " has no scored conversations; see gaps.csv in " + run_dir.string());
  }
  const auto summary = eval::summarize(run.scores);
  const auto files = eval::emit_report(summary, run.scores, run.gaps, dir);
  stamp(dir, "report", digest);
  return {"report", "ran",
          json{{"files", files.size()}, {"scores", run.scores.size()}, {"gaps", run.gaps.size()}}};
}

}  // namespace counselforge::pipeline
