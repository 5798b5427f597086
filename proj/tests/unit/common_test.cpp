#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "counselforge/common/assets.hpp"
#include "counselforge/common/clock.hpp"
#include "counselforge/common/errors.hpp"
#include "counselforge/common/hashing.hpp"
#include "counselforge/common/jsonl.hpp"
#include "counselforge/common/parallel.hpp"
#include "counselforge/common/random.hpp"
#include "counselforge/common/text.hpp"
#include "test_support.hpp"

namespace cf = counselforge;
namespace text = counselforge::text;

TEST(Hashing, Sha256KnownVectors) {
  EXPECT_EQ(cf::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(cf::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Hashing, Fnv1aKnownVectors) {
  EXPECT_EQ(cf::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(cf::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Random, ShuffleIsSeededPermutation) {
  std::vector<int> a(50);
  std::iota(a.begin(), a.end(), 0);
  auto b = a;
  auto c = a;
  cf::deterministic_shuffle(b, 7);
  cf::deterministic_shuffle(c, 7);
  EXPECT_EQ(b, c);
  EXPECT_NE(b, a);
  std::sort(b.begin(), b.end());
  EXPECT_EQ(b, a);
}

TEST(Random, UniformIndexStaysInRange) {
  std::mt19937_64 rng(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) ++hist[cf::uniform_index(rng, 7)];
  for (int h : hist) EXPECT_GT(h, 800);
}

TEST(Random, DeriveSeedDependsOnKey) {
  EXPECT_NE(cf::derive_seed(42, "a"), cf::derive_seed(42, "b"));
  EXPECT_NE(cf::derive_seed(42, "a"), cf::derive_seed(43, "a"));
  EXPECT_EQ(cf::derive_seed(42, "a"), cf::derive_seed(42, "a"));
}

TEST(Text, WordTokensLowercaseAndKeepApostrophes) {
  EXPECT_EQ(text::word_tokens("I'm OK, really-fine!"),
            (std::vector<std::string>{"i'm", "ok", "really", "fine"}));
  EXPECT_EQ(text::count_words("  "), 0u);
}

TEST(Text, ShinglesShortAndEmptyTexts) {
  EXPECT_TRUE(text::word_shingles("").empty());
  EXPECT_EQ(text::word_shingles("one two").size(), 1u);
  EXPECT_EQ(text::word_shingles("a b c d e").size(), 2u);
  EXPECT_EQ(text::word_shingles("a b c d a b c d").size(), 4u);
}

TEST(Text, JaccardMatchesSetOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = text::word_shingles(cftest::random_text(rng, 30, 6));
    auto b = text::word_shingles(cftest::random_text(rng, 30, 6));
    std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end()), u = sa;
    u.insert(sb.begin(), sb.end());
    std::size_t inter = 0;
    for (const auto& x : sa) inter += sb.count(x);
    EXPECT_DOUBLE_EQ(text::jaccard(a, b), double(inter) / double(u.size()));
    EXPECT_EQ(text::intersection_size(a, b), inter);
  }
  EXPECT_EQ(text::jaccard({}, {}), 0.0);
}

TEST(Text, CsvFieldQuotesOnlyWhenNeeded) {
  EXPECT_EQ(text::csv_field("plain"), "plain");
  EXPECT_EQ(text::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(text::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Text, SplitJoinTrim) {
  EXPECT_EQ(text::split("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(text::join({"x", "y"}, "-"), "x-y");
  EXPECT_EQ(text::trim("\t x \n"), "x");
  EXPECT_TRUE(text::iequals("Client", "cLIENT"));
}

TEST(Clock, Iso8601RoundTrip) {
  auto tp = cf::parse_iso8601("2025-01-01T00:00:00Z");
  ASSERT_TRUE(tp);
  EXPECT_EQ(cf::format_iso8601(*tp), "2025-01-01T00:00:00Z");
  EXPECT_FALSE(cf::parse_iso8601("yesterday"));
  auto frozen = cf::frozen_wall_clock(*tp);
  EXPECT_EQ(frozen(), frozen());
}

TEST(Jsonl, RoundTripAndLineNumbersInErrors) {
  cftest::TempDir dir;
  std::vector<cf::json> rows{{{"a", 1}}, {{"b", "two"}}};
  cf::write_jsonl(dir / "x.jsonl", rows);
  EXPECT_EQ(cf::read_jsonl(dir / "x.jsonl"), rows);
  cftest::write_file(dir / "bad.jsonl", "{\"a\":1}\n\n{oops\n");
  try {
    cf::read_jsonl(dir / "bad.jsonl");
    FAIL();
  } catch (const cf::IoError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(cf::read_text_file(dir / "missing"), cf::IoError);
}

TEST(Parallel, ResultsInIndexOrderAndLowestErrorWins) {
  auto out = cf::parallel_map<int>(100, 4, [](std::size_t i) { return int(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], int(i * i));
  try {
    cf::parallel_map<int>(20, 3, [](std::size_t i) -> int {
      if (i == 5 || i == 15) throw cf::Error("boom " + std::to_string(i));
      return 0;
    });
    FAIL();
  } catch (const cf::Error& e) {
    EXPECT_STREQ(e.what(), "boom 5");
  }
}

TEST(Assets, BundledPromptsPresent) {
  for (auto name : {"prompts/persona.txt", "prompts/scenario.txt", "prompts/session.txt",
                    "prompts/judge_session.txt", "prompts/judge_conversation.txt",
                    "prompts/patient_simulator.txt", "techniques.json", "scrub_rules.json"}) {
    EXPECT_TRUE(cf::assets::find(name).has_value()) << name;
  }
  EXPECT_THROW(cf::assets::get("nope.txt"), cf::ConfigError);
}
