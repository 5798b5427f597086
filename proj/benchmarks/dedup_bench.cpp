#include <benchmark/benchmark.h>

#include "counselforge/ingest/dedup.hpp"
#include "counselforge/quality/diversity.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace {

std::vector<counselforge::ingest::SessionTranscript> corpus(std::size_t n) {
  std::mt19937_64 rng(n);
  std::vector<counselforge::ingest::SessionTranscript> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> turns;
    for (int t = 0; t < 12; ++t) turns.push_back(cftest::random_text(rng, 25, 2000));
    out.push_back(cftest::make_session("s" + std::to_string(i), turns));
  }
  // A few near-copies so the index has real candidates.
  for (std::size_t i = 0; i < n / 10; ++i) {
    auto copy = out[i];
    copy.session_id = "d" + std::to_string(i);
    copy.turns.back().text += " again";
    out.push_back(copy);
  }
  return out;
}

void BM_DedupIndexed(benchmark::State& state) {
  const auto c = corpus(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(counselforge::ingest::dedup(c, 0.9));
  state.SetItemsProcessed(state.iterations() * c.size());
}
BENCHMARK(BM_DedupIndexed)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_DedupBruteForce(benchmark::State& state) {
  const auto c = corpus(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cftest::oracle::dedup(c, 0.9));
  state.SetItemsProcessed(state.iterations() * c.size());
}
BENCHMARK(BM_DedupBruteForce)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_CorpusDiversity(benchmark::State& state) {
  const auto c = corpus(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(counselforge::quality::corpus_diversity(c));
}
BENCHMARK(BM_CorpusDiversity)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
