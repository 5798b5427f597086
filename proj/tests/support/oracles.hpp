#pragma once

// Independent reference implementations. They deliberately avoid the
// library's text helpers so a shared bug cannot hide on both sides.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "counselforge/ingest/dedup.hpp"
#include "counselforge/ingest/session.hpp"
#include "test_support.hpp"

namespace cftest::oracle {

using ShingleSet = std::set<std::vector<std::string>>;

inline std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '\'' || c >= 0x80) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline ShingleSet shingles(const counselforge::ingest::SessionTranscript& s, std::size_t n = 4) {
  std::string all;
  for (const auto& t : s.turns) all += t.text + "\n";
  auto w = words(all);
  ShingleSet out;
  if (w.empty()) return out;
  if (w.size() < n) {
    out.insert(w);
    return out;
  }
  for (std::size_t i = 0; i + n <= w.size(); ++i) out.insert({w.begin() + i, w.begin() + i + n});
  return out;
}

inline double jaccard(const ShingleSet& a, const ShingleSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return double(inter) / double(a.size() + b.size() - inter);
}

/// All pairs, id order, first kept match cited.
inline counselforge::ingest::DedupResult dedup(
    std::vector<counselforge::ingest::SessionTranscript> corpus, double threshold) {
  std::sort(corpus.begin(), corpus.end(),
            [](const auto& a, const auto& b) { return a.session_id < b.session_id; });
  counselforge::ingest::DedupResult r;
  std::vector<ShingleSet> kept_sets;
  for (const auto& s : corpus) {
    auto sh = shingles(s);
    bool dropped = false;
    for (std::size_t k = 0; k < r.kept.size(); ++k) {
      double sim = jaccard(sh, kept_sets[k]);
      if (sim >= threshold) {
        r.dropped.push_back({s.session_id, r.kept[k].session_id, sim});
        dropped = true;
        break;
      }
    }
    if (!dropped) {
      r.kept.push_back(s);
      kept_sets.push_back(std::move(sh));
    }
  }
  return r;
}

inline double mean_pairwise_similarity(
    const std::vector<counselforge::ingest::SessionTranscript>& corpus) {
  std::vector<ShingleSet> sets;
  for (const auto& s : corpus) sets.push_back(shingles(s));
  double sum = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      sum += jaccard(sets[i], sets[j]);
      ++pairs;
    }
  }
  return sum / double(pairs);
}

struct NaiveStats {
  double mean, median, std, min, max;
};

/// Textbook formulas, recomputed from scratch.
inline NaiveStats naive_stats(std::vector<double> v) {
  NaiveStats s{};
  double total = 0;
  for (double x : v) total += x;
  s.mean = total / double(v.size());
  double sq = 0;
  for (double x : v) sq += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(sq / double(v.size()));
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  const auto n = v.size();
  s.median = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
  return s;
}

/// Corpus whose sessions are built from a few shared paragraphs, so near and
/// exact duplicates occur at every threshold.
inline std::vector<counselforge::ingest::SessionTranscript> random_corpus(std::mt19937_64& rng,
                                                                          std::size_t max_size) {
  std::vector<std::string> paragraphs;
  for (int i = 0; i < 6; ++i) paragraphs.push_back(random_text(rng, 12 + rng() % 10, 40));
  const std::size_t n = 1 + rng() % max_size;
  std::vector<counselforge::ingest::SessionTranscript> corpus;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> turns;
    const std::size_t turn_count = 2 + rng() % 4;
    for (std::size_t t = 0; t < turn_count; ++t) {
      std::string text = paragraphs[rng() % paragraphs.size()];
      if (rng() % 3 == 0) text += " " + random_text(rng, 1 + rng() % 6, 200);
      turns.push_back(text);
    }
    char id[16];
    std::snprintf(id, sizeof id, "s%03zu", (i * 37) % 997);
    corpus.push_back(make_session(id, turns));
  }
  std::shuffle(corpus.begin(), corpus.end(), rng);
  return corpus;
}

}  // namespace cftest::oracle
