#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bench_fixture.hpp"
#include "counselforge/common/assets.hpp"
#include "counselforge/common/errors.hpp"
#include "counselforge/common/jsonl.hpp"
#include "counselforge/common/text.hpp"
#include "counselforge/eval/benchmark.hpp"
#include "counselforge/eval/conversation.hpp"
#include "counselforge/eval/summary.hpp"
#include "counselforge/gateway/gateway.hpp"
#include "counselforge/gateway/scripted_backend.hpp"
#include "counselforge/ingest/transcript_parser.hpp"
#include "counselforge/quality/judge_grammar.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace cf = counselforge;
namespace ev = counselforge::eval;
namespace gw = counselforge::gateway;
using nlohmann::json;

namespace {

std::shared_ptr<gw::Gateway> scripted(const std::vector<json>& rules) {
  std::vector<gw::ScriptRule> parsed;
  for (const auto& r : rules) parsed.push_back(gw::script_rule_from_json(r));
  return std::make_shared<gw::Gateway>(gw::BackendConfig{},
                                       std::make_shared<gw::ScriptedBackend>(std::move(parsed)),
                                       cf::frozen_monotonic_clock());
}

cf::synthgen::ScenarioSpec situation() {
  std::string narrative = "A client worries.";
  for (int i = 0; i < 110; ++i) narrative += " more";
  return {"bench-001", "bench", "Worry", {}, narrative};
}

ev::ModelUnderTest model() {
  return {"m", {}, std::string(cf::assets::get("counselor_system_prompt.txt"))};
}

ev::SimulationOptions options(std::size_t max_turns) {
  ev::SimulationOptions o;
  o.max_turns = max_turns;
  o.patient_prompt = cf::assets::get("prompts/patient_simulator.txt");
  return o;
}

}  // namespace

TEST(Conversation, MaxTurnsBoundsLogAndPatientSpeaksFirst) {
  auto patient = scripted({json{{"reply", "I feel stuck."}}});
  auto counselor = scripted({json{{"reply", "Tell me more."}}});
  auto log = ev::simulate_conversation(situation(), model(), *counselor, *patient, options(3));
  EXPECT_EQ(log.terminated_by, ev::TerminatedBy::max_turns);
  ASSERT_EQ(log.turns.size(), 6u);
  for (std::size_t i = 0; i < log.turns.size(); ++i) {
    EXPECT_EQ(log.turns[i].index, i);
    EXPECT_EQ(log.turns[i].speaker, i % 2 ? cf::ingest::Speaker::counselor : cf::ingest::Speaker::client);
  }
}

TEST(Conversation, CloseMarkerEndsSessionAndIsStripped) {
  auto patient = scripted({json{{"message_count", 1}, {"reply", "Hello."}},
                           json{{"message_count", 3}, {"reply", "Thanks, bye. [END_SESSION]"}}});
  auto counselor = scripted({json{{"reply", "Welcome."}}});
  auto log = ev::simulate_conversation(situation(), model(), *counselor, *patient, options(10));
  EXPECT_EQ(log.terminated_by, ev::TerminatedBy::patient_close);
  ASSERT_EQ(log.turns.size(), 3u);
  EXPECT_EQ(log.turns.back().text, "Thanks, bye.");
}

TEST(Conversation, BackendFailureRecordedNotThrown) {
  auto patient = scripted({json{{"message_count", 1}, {"reply", "Hello."}}});
  auto counselor = scripted({json{{"reply", "Welcome."}}});
  auto log = ev::simulate_conversation(situation(), model(), *counselor, *patient, options(5));
  EXPECT_EQ(log.terminated_by, ev::TerminatedBy::error);
  EXPECT_FALSE(log.error.empty());
  EXPECT_EQ(log.turns.size(), 2u);
  EXPECT_THROW(ev::score_conversation(log, situation(), *scripted({json{{"reply", "x"}}}), "{{conversation}}"),
               cf::PreconditionError);
}

TEST(Conversation, GoldenSessionReplayReproducesFixture) {
  const auto raw = cf::read_text_file(cftest::fixture_dir() / "golden_session.txt");
  auto session = cf::ingest::parse_transcript({"b", "", raw}, cf::ingest::TranscriptFormat::speaker_lines);
  std::vector<json> patient_rules, counselor_rules;
  for (std::size_t i = 0; i < session.turns.size(); ++i) {
    const auto& t = session.turns[i];
    if (t.speaker == cf::ingest::Speaker::client) {
      std::string text = t.text;
      if (i + 1 == session.turns.size()) text += " [END_SESSION]";
      patient_rules.push_back(json{{"message_count", 1 + i}, {"reply", text}});
    } else {
      counselor_rules.push_back(json{{"message_count", i}, {"reply", t.text}});
    }
  }
  auto log = ev::simulate_conversation(situation(), model(), *scripted(counselor_rules),
                                       *scripted(patient_rules), options(20));
  EXPECT_EQ(log.terminated_by, ev::TerminatedBy::patient_close);
  std::string expected;
  std::istringstream lines(raw);
  for (std::string line; std::getline(lines, line);) {
    if (line.starts_with("Patient: ")) line = "Client: " + line.substr(9);
    expected += line + "\n";
  }
  EXPECT_EQ(ev::render_conversation(log), expected);
}

TEST(ConversationJudge, ParsesReportedMeansAsFixture) {
  auto s = ev::parse_conversation_judgement("x", "hybrid", "empathy: 8.64, relevance: 8.66");
  EXPECT_DOUBLE_EQ(s.empathy, 8.64);
  EXPECT_DOUBLE_EQ(s.relevance, 8.66);
  EXPECT_DOUBLE_EQ(s.combined(), 8.65);
  EXPECT_THROW(ev::parse_conversation_judgement("x", "m", "empathy: 8.645 relevance: 1"),
               cf::quality::JudgeParseError);
  EXPECT_THROW(ev::parse_conversation_judgement("x", "m", "empathy: 10.5 relevance: 1"),
               cf::quality::JudgeParseError);
  EXPECT_THROW(ev::parse_conversation_judgement("x", "m", "Great session!"), cf::quality::JudgeParseError);
}

TEST(ConversationJudge, ScoresAtZeroTemperature) {
  auto backend = std::make_shared<gw::ScriptedBackend>(std::vector<gw::ScriptRule>{
      gw::script_rule_from_json(json{{"match", "Counselor: Welcome."}, {"reply", "empathy: 7 relevance: 6.5"}})});
  gw::Gateway judge(gw::BackendConfig{}, backend);
  ev::ConversationLog log{"r", "bench-001", "m", {{0, cf::ingest::Speaker::client, "Hi", 0},
                                                  {1, cf::ingest::Speaker::counselor, "Welcome.", 0}},
                          ev::TerminatedBy::max_turns, ""};
  auto s = ev::score_conversation(log, situation(), judge, cf::assets::get("prompts/judge_conversation.txt"));
  EXPECT_EQ(s.model_label, "m");
  EXPECT_DOUBLE_EQ(s.relevance, 6.5);
}

TEST(Benchmark, ShapeResumeAndForce) {
  cftest::TempDir dir;
  auto f = cftest::make_bench_fixture(dir.path(), 4, {"a", "b"});
  gw::GatewayPool pool(cf::frozen_monotonic_clock());
  auto r = ev::run_benchmark(f.situations, f.models, f.config, pool);
  ASSERT_EQ(r.cells.size(), 8u);
  EXPECT_EQ(r.scores.size(), 8u);
  EXPECT_TRUE(r.gaps.empty());
  EXPECT_EQ(r.cells_executed, 8u);
  EXPECT_EQ(r.cells[1].log.situation_id, "bench-001");
  EXPECT_EQ(r.cells[1].log.model_label, "b");
  auto [e, rel] = cftest::bench_scores(2, 1);
  EXPECT_DOUBLE_EQ(r.cells[5].score->empathy, e);
  EXPECT_DOUBLE_EQ(r.cells[5].score->relevance, rel);

  gw::GatewayPool fresh(cf::frozen_monotonic_clock());
  auto again = ev::run_benchmark(f.situations, f.models, f.config, fresh);
  EXPECT_EQ(fresh.total_backend_calls(), 0u);
  EXPECT_EQ(again.cells_resumed, 8u);
  EXPECT_EQ(again.scores, r.scores);

  auto loaded = ev::load_benchmark(r.run_dir);
  EXPECT_EQ(loaded.scores, r.scores);

  auto forced_cfg = f.config;
  forced_cfg.force = true;
  gw::GatewayPool forced_pool(cf::frozen_monotonic_clock());
  ev::run_benchmark(f.situations, f.models, forced_cfg, forced_pool);
  EXPECT_GT(forced_pool.total_backend_calls(), 0u);

  auto changed = f.config;
  changed.max_turns = 7;
  EXPECT_THROW(ev::run_benchmark(f.situations, f.models, changed, fresh), cf::ConfigError);
}

TEST(Benchmark, ErrorCellsBecomeGapsNotZeros) {
  cftest::TempDir dir;
  auto f = cftest::make_bench_fixture(dir.path(), 2, {"a"});
  cftest::write_rules(f.models[0].backend.fixture,
                      {json{{"match", cftest::situation_key(0)}, {"reply", "(a) reply 0 about topic0zq"}}});
  gw::GatewayPool pool(cf::frozen_monotonic_clock());
  auto r = ev::run_benchmark(f.situations, f.models, f.config, pool);
  EXPECT_EQ(r.cells.size(), 2u);
  EXPECT_EQ(r.scores.size(), 1u);
  ASSERT_EQ(r.gaps.size(), 1u);
  EXPECT_EQ(r.gaps[0].situation_id, "bench-002");
  EXPECT_TRUE(r.gaps[0].reason.starts_with("conversation error")) << r.gaps[0].reason;
  const auto csv = cf::read_text_file(r.run_dir / "gaps.csv");
  EXPECT_NE(csv.find("bench-002"), std::string::npos);
}

TEST(Benchmark, PreconditionsChecked) {
  cftest::TempDir dir;
  auto f = cftest::make_bench_fixture(dir.path(), 2, {"a"});
  gw::GatewayPool pool;
  auto dup = f.situations;
  dup[1].scenario_id = dup[0].scenario_id;
  EXPECT_THROW(ev::run_benchmark(dup, f.models, f.config, pool), cf::PreconditionError);
  auto outside = f.situations;
  outside[0].scenario_id = "p0001-s1";
  EXPECT_THROW(ev::run_benchmark(outside, f.models, f.config, pool), cf::PreconditionError);
  auto models = f.models;
  models.push_back(models[0]);
  EXPECT_THROW(ev::run_benchmark(f.situations, models, f.config, pool), cf::PreconditionError);
  auto empty = ev::run_benchmark({}, f.models, f.config, pool);
  EXPECT_TRUE(empty.cells.empty());
}

TEST(Benchmark, ParallelRunMatchesSerial) {
  cftest::TempDir a, b;
  auto fa = cftest::make_bench_fixture(a.path(), 6, {"x", "y"});
  auto fb = cftest::make_bench_fixture(b.path(), 6, {"x", "y"});
  fb.config.parallelism = 4;
  gw::GatewayPool pa(cf::frozen_monotonic_clock()), pb(cf::frozen_monotonic_clock());
  auto ra = ev::run_benchmark(fa.situations, fa.models, fa.config, pa);
  auto rb = ev::run_benchmark(fb.situations, fb.models, fb.config, pb);
  EXPECT_EQ(ra.scores, rb.scores);
  EXPECT_EQ(cf::read_text_file(ra.run_dir / "scores.csv"), cf::read_text_file(rb.run_dir / "scores.csv"));
}

TEST(Summary, DescribeBasics) {
  auto one = ev::describe({7.0});
  EXPECT_EQ(one.mean, 7.0);
  EXPECT_EQ(one.median, 7.0);
  EXPECT_EQ(one.std, 0.0);
  auto even = ev::describe({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(even.median, 2.5);
  EXPECT_DOUBLE_EQ(even.std, std::sqrt(1.25));
  EXPECT_THROW(ev::describe({}), cf::PreconditionError);
  EXPECT_THROW(ev::summarize({}), cf::PreconditionError);
}

TEST(Summary, MatchesNaiveOracleAndIsPermutationInvariant) {
  std::mt19937_64 rng(150);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<ev::ScorePair> scores;
  for (int i = 0; i < 150; ++i) {
    scores.push_back({"s" + std::to_string(i), i % 3 == 0 ? "base" : i % 3 == 1 ? "real" : "hybrid",
                      u(rng), u(rng), ""});
  }
  auto summary = ev::summarize(scores);
  ASSERT_EQ(summary.models.size(), 3u);
  EXPECT_EQ(summary.models[0].label, "base");
  for (const auto& m : summary.models) {
    std::vector<double> e, r, c;
    for (const auto& s : scores) {
      if (s.model_label != m.label) continue;
      e.push_back(s.empathy);
      r.push_back(s.relevance);
      c.push_back((s.empathy + s.relevance) / 2);
    }
    for (auto [got, values] : {std::pair{m.empathy, e}, {m.relevance, r}, {m.combined, c}}) {
      auto want = cftest::oracle::naive_stats(values);
      EXPECT_NEAR(got.mean, want.mean, 1e-9);
      EXPECT_NEAR(got.median, want.median, 1e-9);
      EXPECT_NEAR(got.std, want.std, 1e-9);
      EXPECT_EQ(got.min, want.min);
      EXPECT_EQ(got.max, want.max);
    }
  }
  auto shuffled = scores;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto again = ev::summarize(shuffled);
  for (const auto& m : summary.models) {
    auto it = std::find_if(again.models.begin(), again.models.end(),
                           [&](const auto& x) { return x.label == m.label; });
    ASSERT_NE(it, again.models.end());
    EXPECT_NEAR(it->empathy.mean, m.empathy.mean, 1e-12);
    EXPECT_EQ(it->empathy.median, m.empathy.median);
    EXPECT_NEAR(it->relevance.std, m.relevance.std, 1e-12);
  }
}

TEST(Summary, TableShowsReportedPerModelMeans) {
  std::vector<ev::ScorePair> scores{{"s1", "hybrid", 8.64, 8.66, ""},
                                    {"s1", "base", 8.48, 8.08, ""},
                                    {"s1", "real", 7.32, 7.24, ""}};
  const auto table = ev::render_summary_table(ev::summarize(scores));
  EXPECT_NE(table.find("| hybrid | empathy | 8.64 |"), std::string::npos) << table;
  EXPECT_NE(table.find("| hybrid | relevance | 8.66 |"), std::string::npos);
  EXPECT_NE(table.find("| base | empathy | 8.48 |"), std::string::npos);
  EXPECT_NE(table.find("| base | relevance | 8.08 |"), std::string::npos);
  EXPECT_NE(table.find("| real | empathy | 7.32 |"), std::string::npos);
  EXPECT_NE(table.find("| real | relevance | 7.24 |"), std::string::npos);
}

TEST(Summary, ReportFilesAgreeWithSummary) {
  cftest::TempDir dir;
  std::vector<ev::ScorePair> scores;
  for (int i = 0; i < 12; ++i) {
    scores.push_back({"s" + std::to_string(i), i % 2 ? "a" : "b", double(i % 11), 10.0 - (i % 7), ""});
  }
  auto summary = ev::summarize(scores);
  auto written = ev::emit_report(summary, scores, {}, dir.path());
  for (auto name : {"summary.md", "summary.json", "summary.csv", "distribution.csv", "scores_scatter.csv",
                    "distribution.svg", "scatter.svg", "empathy_by_model.svg", "relevance_by_model.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  EXPECT_GE(written.size(), 9u);

  auto scatter = cf::read_text_file(dir / "scores_scatter.csv");
  EXPECT_EQ(std::count(scatter.begin(), scatter.end(), '\n'), 13);

  std::istringstream dist(cf::read_text_file(dir / "distribution.csv"));
  std::string line;
  std::getline(dist, line);
  std::map<std::string, int> per_metric;
  while (std::getline(dist, line)) {
    auto parts = cf::text::split(line, ',');
    per_metric[parts[0] + "/" + parts[1]] += std::stoi(parts[4]);
  }
  EXPECT_EQ(per_metric["a/empathy"], 6);
  EXPECT_EQ(per_metric["b/relevance"], 6);

  // Parse the markdown table back and compare with the summary values.
  std::istringstream md(cf::read_text_file(dir / "summary.md"));
  int checked = 0;
  while (std::getline(md, line)) {
    if (!line.starts_with("| a |") && !line.starts_with("| b |")) continue;
    auto cells = cf::text::split(line, '|');
    const auto label = cf::text::trim(cells[1]);
    const auto metric = cf::text::trim(cells[2]);
    const auto& m = label == "a" ? summary.models[1] : summary.models[0];
    const auto& stats = metric == "empathy" ? m.empathy : metric == "relevance" ? m.relevance : m.combined;
    EXPECT_EQ(cf::text::trim(cells[3]), fmt::format("{:.2f}", stats.mean));
    EXPECT_EQ(cf::text::trim(cells[5]), fmt::format("{:.2f}", stats.std));
    ++checked;
  }
  EXPECT_EQ(checked, 6);
}
