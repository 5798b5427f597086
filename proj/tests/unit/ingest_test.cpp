#include <gtest/gtest.h>

#include "counselforge/common/assets.hpp"
#include "counselforge/common/jsonl.hpp"
#include "counselforge/ingest/dedup.hpp"
#include "counselforge/ingest/errors.hpp"
#include "counselforge/ingest/quality_filter.hpp"
#include "counselforge/ingest/scrub.hpp"
#include "counselforge/ingest/transcript_parser.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace cf = counselforge;
namespace in = counselforge::ingest;
using in::Speaker;

namespace {

in::SessionTranscript golden_session() {
  return in::parse_transcript(
      {"golden", "", cf::read_text_file(cftest::fixture_dir() / "golden_session.txt")},
      in::TranscriptFormat::speaker_lines);
}

std::vector<in::ScrubRule> default_rules() {
  return in::parse_scrub_rules(nlohmann::json::parse(cf::assets::get("scrub_rules.json")));
}

}  // namespace

TEST(Parser, GoldenSessionHasNineteenAlternatingTurnsClientFirst) {
  auto s = golden_session();
  ASSERT_EQ(s.turns.size(), 19u);
  for (std::size_t i = 0; i < s.turns.size(); ++i) {
    EXPECT_EQ(s.turns[i].index, i);
    EXPECT_EQ(s.turns[i].speaker, i % 2 == 0 ? Speaker::client : Speaker::counselor);
  }
  EXPECT_TRUE(s.turns[0].text.starts_with("I just feel so overwhelmed"));
  EXPECT_EQ(s.source, in::Source::real);
}

TEST(Parser, MergesConsecutiveLinesOfOneSpeaker) {
  auto s = in::parse_transcript({"m", "", "Client: one\nClient: two\n\nTherapist: three\n"},
                                in::TranscriptFormat::speaker_lines);
  ASSERT_EQ(s.turns.size(), 2u);
  EXPECT_EQ(s.turns[0].text, "one\ntwo");
  EXPECT_EQ(s.turns[1].speaker, Speaker::counselor);
}

TEST(Parser, RejectsBadInput) {
  using F = in::TranscriptFormat;
  EXPECT_THROW(in::parse_transcript({"e", "", "  \n"}, F::speaker_lines), in::FormatError);
  EXPECT_THROW(in::parse_transcript({"u", "", "no label here\nClient: x"}, F::speaker_lines),
               in::FormatError);
  EXPECT_THROW(in::parse_transcript({"k", "", "Narrator: x\nClient: y"}, F::speaker_lines),
               in::FormatError);
  EXPECT_THROW(in::parse_transcript({"one", "", "Client: a\nClient: b"}, F::speaker_lines),
               in::AlternationError);
}

TEST(Parser, CustomAliases) {
  auto aliases = in::default_speaker_aliases();
  aliases["dr. lee"] = Speaker::counselor;
  auto s = in::parse_transcript({"a", "", "Client: hi\nDr. Lee: hello"},
                                in::TranscriptFormat::speaker_lines, aliases);
  EXPECT_EQ(s.turns[1].speaker, Speaker::counselor);
}

TEST(Parser, StructuredRoundTrip) {
  auto s = golden_session();
  auto back = in::parse_transcript({"x", "", nlohmann::json(s).dump()},
                                   in::TranscriptFormat::structured);
  EXPECT_EQ(back, s);
}

TEST(Session, ValidateCatchesBrokenInvariants) {
  auto s = cftest::make_session("v", {"a", "b", "c"});
  EXPECT_TRUE(in::is_valid_session(s));
  auto twice = s;
  twice.turns[1].speaker = Speaker::client;
  EXPECT_THROW(in::validate_session(twice), in::AlternationError);
  auto gap = s;
  gap.turns[2].index = 5;
  EXPECT_THROW(in::validate_session(gap), in::InvalidSession);
  auto blank = s;
  blank.turns[1].text = "";
  EXPECT_FALSE(in::is_valid_session(blank));
}

TEST(Session, QaPairsSkipTrailingClientTurn) {
  auto pairs = in::qa_pairs(cftest::make_session("q", {"q1", "a1", "q2", "a2", "q3"}));
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[1].question, "q2");
  EXPECT_EQ(pairs[1].answer, "a2");
}

TEST(Session, CorpusFileRoundTrip) {
  cftest::TempDir dir;
  std::vector<in::SessionTranscript> corpus{golden_session(), cftest::make_session("b", {"x", "y"})};
  corpus[0].annotations["k"] = "v";
  in::write_corpus(dir / "c.jsonl", corpus);
  EXPECT_EQ(in::read_corpus(dir / "c.jsonl"), corpus);
}

TEST(Scrub, RedactsContactDetailsAndCountsHits) {
  auto s = cftest::make_session("p", {"Mail me at a.b@example.com or call 555-123-4567 today.",
                                      "Sure, see https://example.org/x for Dr. Smith's notes."});
  auto r = in::scrub(s, default_rules());
  EXPECT_EQ(r.session.turns[0].text.find("example.com"), std::string::npos);
  EXPECT_EQ(r.session.turns[0].text.find("4567"), std::string::npos);
  EXPECT_EQ(r.session.turns[1].text.find("Smith"), std::string::npos);
  EXPECT_EQ(r.report.scrub_rule_hits.at("email"), 1u);
  EXPECT_EQ(r.report.scrub_rule_hits.at("phone"), 1u);
  EXPECT_EQ(r.report.scrub_rule_hits.at("url"), 1u);
  EXPECT_EQ(r.report.scrub_rule_hits.at("titled_name"), 1u);
}

TEST(Scrub, IdempotentOnRandomInputs) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> pieces{"hello", "x@y.io", "[laughter]", "  ", "555 123 4567",
                                        "Mr. Jones", "www.site.com", "fine", "[Music]"};
  in::Scrubber scrubber(default_rules());
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> turns;
    for (int t = 0; t < 4; ++t) {
      std::string text = "start";
      for (int k = 0; k < 5; ++k) text += " " + pieces[rng() % pieces.size()];
      turns.push_back(text);
    }
    auto once = scrubber(cftest::make_session("i", turns));
    auto twice = scrubber(once.session);
    EXPECT_EQ(twice.session, once.session);
    EXPECT_EQ(twice.report.removed_tokens, 0u);
  }
}

TEST(Scrub, DropsEmptiedTurnsAndRemerges) {
  std::vector<in::ScrubRule> rules{{"noise", "\\[inaudible\\]", "", false}};
  auto s = cftest::make_session("d", {"hello there", "[inaudible]", "still here", "reply"});
  auto r = in::scrub(s, rules);
  ASSERT_EQ(r.session.turns.size(), 2u);
  EXPECT_EQ(r.session.turns[0].text, "hello there\nstill here");
  EXPECT_EQ(r.report.dropped_segments, 1u);
}

TEST(Scrub, RejectsBadRules) {
  EXPECT_THROW(in::Scrubber({{"bad", "([", "", false}}), in::PatternError);
  EXPECT_THROW(in::Scrubber({{"", "x", "", false}}), in::PatternError);
  std::vector<in::ScrubRule> ping_pong{{"ab", "a", "b", false}, {"ba", "b", "a", false}};
  EXPECT_THROW(in::scrub(cftest::make_session("pp", {"a", "b"}), ping_pong), in::PatternError);
}

TEST(QualityFilter, ReportsEveryReason) {
  auto ok = golden_session();
  EXPECT_TRUE(in::quality_filter(ok).pass);
  auto s = cftest::make_session("f", {"short", "this reply is long enough to pass",
                                      "[sighs heavily and looks away for a long while] ok"});
  auto v = in::quality_filter(s);
  EXPECT_FALSE(v.pass);
  EXPECT_NE(std::find(v.reasons.begin(), v.reasons.end(), "too_few_turns"), v.reasons.end());
  EXPECT_NE(std::find(v.reasons.begin(), v.reasons.end(), "short_turn:0"), v.reasons.end());
  EXPECT_NE(std::find(v.reasons.begin(), v.reasons.end(), "non_dialogue_ratio"), v.reasons.end());
  EXPECT_GT(in::non_dialogue_ratio(s), 0.2);
}

TEST(QualityFilter, AnnotateCountsCounselorQuestions) {
  auto s = cftest::make_session("a", {"I feel anxious and sad.", "What happened? Why now?",
                                      "Work.", "Let's try reframing that thought."});
  in::annotate(s);
  EXPECT_EQ(s.annotations.at("counselor_questions"), "2");
  EXPECT_NE(s.annotations.at("emotional_indicators").find("anxious"), std::string::npos);
}

TEST(Dedup, DropsNearDuplicateAndCitesKeeper) {
  auto base = golden_session();
  auto copy = base;
  copy.session_id = "zz-copy";
  copy.turns.back().text += " Bye.";
  auto other = cftest::make_session("other", {"completely unrelated words about gardening here",
                                              "and more about tomatoes and weeds today"});
  auto r = in::dedup({copy, other, base}, 0.9);
  ASSERT_EQ(r.kept.size(), 2u);
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0].dropped_id, "zz-copy");
  EXPECT_EQ(r.dropped[0].kept_id, "golden");
  EXPECT_GE(r.dropped[0].similarity, 0.9);
}

TEST(Dedup, PreconditionsChecked) {
  auto s = cftest::make_session("a", {"x", "y"});
  EXPECT_THROW(in::dedup({s, s}, 0.9), cf::Error);
  EXPECT_THROW(in::dedup({s}, 0.0), cf::PreconditionError);
  EXPECT_THROW(in::dedup({s}, 1.5), cf::PreconditionError);
}

TEST(Dedup, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  const double thresholds[] = {0.5, 0.8, 0.9};
  for (int trial = 0; trial < 60; ++trial) {
    auto corpus = cftest::oracle::random_corpus(rng, 30);
    const double th = thresholds[trial % 3];
    auto got = in::dedup(corpus, th);
    auto want = cftest::oracle::dedup(corpus, th);
    ASSERT_EQ(got.kept, want.kept) << "trial " << trial;
    ASSERT_EQ(got.dropped, want.dropped) << "trial " << trial;
  }
}

TEST(Dedup, OutputHasNoPairAtOrAboveThreshold) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto kept = in::dedup(cftest::oracle::random_corpus(rng, 20), 0.8).kept;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        EXPECT_LT(cftest::oracle::jaccard(cftest::oracle::shingles(kept[i]),
                                          cftest::oracle::shingles(kept[j])),
                  0.8);
      }
    }
  }
}
