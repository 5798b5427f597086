#include <gtest/gtest.h>

#include "counselforge/common/assets.hpp"
#include "counselforge/common/errors.hpp"
#include "counselforge/gateway/gateway.hpp"
#include "counselforge/gateway/scripted_backend.hpp"
#include "counselforge/quality/diversity.hpp"
#include "counselforge/quality/judge_grammar.hpp"
#include "counselforge/quality/scoring.hpp"
#include "counselforge/quality/selection.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace cf = counselforge;
namespace q = counselforge::quality;
namespace gw = counselforge::gateway;
using nlohmann::json;

namespace {

std::shared_ptr<gw::ScriptedBackend> backend_with(const std::string& reply) {
  return std::make_shared<gw::ScriptedBackend>(
      std::vector<gw::ScriptRule>{gw::script_rule_from_json(json{{"reply", reply}})});
}

q::QualityScore score(const std::string& id, int c, int r, int t) { return {id, c, r, t, ""}; }

}  // namespace

TEST(JudgeGrammar, AcceptsSeparatorsCaseAndOutOfTen) {
  auto s = q::parse_session_judgement(
      "s", "Coherence: 7/10, realism: 8; THERAPEUTIC_VALUE: 9 / rationale: solid work");
  EXPECT_EQ(s.coherence, 7);
  EXPECT_EQ(s.realism, 8);
  EXPECT_EQ(s.therapeutic_value, 9);
  EXPECT_EQ(s.rationale, "solid work");
  EXPECT_DOUBLE_EQ(s.mean(), 8.0);
}

TEST(JudgeGrammar, RejectsEveryMalformedShape) {
  const char* bad[] = {
      "",
      "coherence: 7 realism: 8",
      "coherence: 7 realism: 8 therapeutic_value: 11",
      "coherence: 0 realism: 8 therapeutic_value: 8",
      "coherence: 7.5 realism: 8 therapeutic_value: 8",
      "coherence: 7 coherence: 7 realism: 8 therapeutic_value: 8",
      "coherence: 7 realism: 8 therapeutic_value: 8 empathy: 3",
      "I think it is good. coherence: 7 realism: 8 therapeutic_value: 8",
      "coherence: seven realism: 8 therapeutic_value: 8",
      "coherence 7 realism: 8 therapeutic_value: 8",
      "coherence: 7x realism: 8 therapeutic_value: 8",
      "coherence: -7 realism: 8 therapeutic_value: 8",
  };
  for (const char* out : bad) {
    EXPECT_THROW(q::parse_session_judgement("s", out), q::JudgeParseError) << out;
  }
}

TEST(JudgeGrammar, DecimalLimitPerField) {
  const q::ScoreField fields[] = {{"x", 0, 10, 1}};
  EXPECT_DOUBLE_EQ(q::parse_judge_fields("x: 8.5", fields).scores.at("x"), 8.5);
  EXPECT_THROW(q::parse_judge_fields("x: 8.55", fields), q::JudgeParseError);
  EXPECT_THROW(q::parse_judge_fields("x: 8.", fields), q::JudgeParseError);
}

TEST(Scoring, JudgeSessionUsesZeroTemperature) {
  auto backend = backend_with("coherence: 8 realism: 7 therapeutic_value: 9 rationale: ok");
  gw::Gateway judge(gw::BackendConfig{}, backend);
  auto s = q::judge_session(cftest::make_session("s1", {"hello", "hi"}),
                            cf::assets::get("prompts/judge_session.txt"), judge);
  EXPECT_EQ(s.session_id, "s1");
  EXPECT_EQ(s.realism, 7);
  ASSERT_EQ(backend->call_count(), 1u);
}

TEST(Scoring, FlagsDimensionsStrictlyBelowThreshold) {
  EXPECT_TRUE(q::flag_session(score("a", 6, 6, 6)).empty());
  auto flags = q::flag_session(score("a", 5, 6, 2));
  ASSERT_EQ(flags.size(), 2u);
  EXPECT_EQ(flags[0].reason, q::FlagReason::low_coherence);
  EXPECT_EQ(flags[1].reason, q::FlagReason::low_therapeutic_value);
  EXPECT_EQ(flags[0].detail, "coherence 5 < 6");
}

TEST(Scoring, ItemJudgeForPersonaAndScenario) {
  auto backend = backend_with("correctness: 9 naturalness: 6");
  gw::Gateway judge(gw::BackendConfig{}, backend);
  q::JudgedItem persona = cf::synthgen::Persona{"p0001", 30, "x", "y", {"z"}, {}};
  auto r = q::judge_naturalness_correctness(persona, cf::assets::get("prompts/judge_item.txt"), judge);
  EXPECT_EQ(r.item_id, "p0001");
  EXPECT_EQ(r.correctness, 9);
  EXPECT_THROW(q::parse_item_judgement("x", "correctness: 9"), q::JudgeParseError);
}

TEST(Scoring, JsonRoundTrip) {
  auto s = score("x", 3, 4, 5);
  s.rationale = "r";
  EXPECT_EQ(json(s).get<q::QualityScore>(), s);
  q::Flag f{"x", q::FlagReason::logical_error, "d"};
  EXPECT_EQ(json(f).get<q::Flag>(), f);
}

TEST(Diversity, ExtremesAreExact) {
  auto a = cftest::make_session("a", {"one two three four five", "six seven eight nine"});
  auto b = a;
  b.session_id = "b";
  EXPECT_EQ(q::corpus_diversity({a, b}).diversity, 0.0);
  auto c = cftest::make_session("c", {"alpha beta gamma delta epsilon", "zeta eta theta iota"});
  EXPECT_EQ(q::corpus_diversity({a, c}).diversity, 1.0);
  EXPECT_THROW(q::corpus_diversity({a}), cf::PreconditionError);
}

TEST(Diversity, MatchesQuadraticOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cf::ingest::SessionTranscript> corpus;
    for (int i = 0; i < 10; ++i) {
      corpus.push_back(cftest::make_session("s" + std::to_string(i),
                                            {cftest::random_text(rng, 25, 12),
                                             cftest::random_text(rng, 25, 12)}));
    }
    auto r = q::corpus_diversity(corpus);
    EXPECT_NEAR(r.mean_pairwise_similarity, cftest::oracle::mean_pairwise_similarity(corpus), 1e-12);
    EXPECT_NEAR(r.diversity, 1.0 - r.mean_pairwise_similarity, 1e-15);
    EXPECT_EQ(r.corpus_size, 10u);
  }
}

// Three copies plus one unrelated session: mean similarity 3/6. Copying the
// unrelated session gives 4/10, so diversity goes up.
TEST(Diversity, DuplicateCanRaiseDiversityOfAlreadyRedundantCorpus) {
  auto same = [](std::string id) {
    return cftest::make_session(std::move(id), {"one two three four five", "six seven eight nine"});
  };
  auto other = cftest::make_session("z", {"alpha beta gamma delta epsilon", "zeta eta theta iota"});
  std::vector<cf::ingest::SessionTranscript> corpus{same("a"), same("b"), same("c"), other};
  const double before = q::corpus_diversity(corpus).diversity;
  corpus.push_back(other);
  corpus.back().session_id = "z2";
  EXPECT_DOUBLE_EQ(before, 0.5);
  EXPECT_GT(q::corpus_diversity(corpus).diversity, before);
}

TEST(Selection, TopKAndMinMeanRankByMeanThenId) {
  std::map<std::string, q::QualityScore> scores{{"a", score("a", 5, 5, 5)},
                                                {"b", score("b", 9, 9, 9)},
                                                {"c", score("c", 9, 9, 9)},
                                                {"d", score("d", 7, 7, 7)}};
  std::vector<std::string> ids{"a", "b", "c", "d"};
  auto top = q::select_top(ids, scores, {2, std::nullopt});
  EXPECT_EQ(top.kept, (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(top.dropped, (std::vector<std::string>{"d", "a"}));
  auto floor = q::select_top(ids, scores, {std::nullopt, 7.0});
  EXPECT_EQ(floor.kept, (std::vector<std::string>{"b", "c", "d"}));
  EXPECT_THROW(q::select_top(ids, scores, {}), cf::PreconditionError);
  EXPECT_THROW(q::select_top(ids, scores, {1, 1.0}), cf::PreconditionError);
  EXPECT_THROW(q::select_top({"a", "missing"}, scores, {1, std::nullopt}), q::UnscoredSession);
}
