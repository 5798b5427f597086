#include <benchmark/benchmark.h>

#include "counselforge/gateway/chat.hpp"
#include "test_support.hpp"

namespace gw = counselforge::gateway;

namespace {

gw::ChatRequest request(std::size_t messages) {
  std::mt19937_64 rng(messages);
  gw::ChatRequest r;
  r.model_id = "bench-model";
  r.temperature = 0.7;
  r.messages.push_back({gw::Role::system, "You are a counselor."});
  for (std::size_t i = 0; i < messages; ++i) {
    r.messages.push_back({i % 2 ? gw::Role::assistant : gw::Role::user, cftest::random_text(rng, 60, 500)});
  }
  return r;
}

void BM_RequestFingerprint(benchmark::State& state) {
  const auto r = request(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gw::fingerprint(r));
}
BENCHMARK(BM_RequestFingerprint)->Arg(2)->Arg(20)->Arg(80);

}  // namespace
