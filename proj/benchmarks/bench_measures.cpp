#include <benchmark/benchmark.h>

#include <vector>

#include "deltadiv/deltadiv.hpp"

namespace {

using namespace deltadiv;

std::vector<SampledPair> make_pairs(std::size_t m, std::size_t n) {
  SamplerConfig config;
  config.classes = m;
  config.count = n;
  config.seed = 11;
  std::vector<SampledPair> pairs;
  for (std::size_t k = 0; k < n; ++k) pairs.push_back(sample_pair_at(config, k));
  return pairs;
}

template <typename F>
void run_over_pairs(benchmark::State& state, F&& measure) {
  const auto pairs = make_pairs(static_cast<std::size_t>(state.range(0)), 1024);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& pair = pairs[i++ & 1023];
    benchmark::DoNotOptimize(measure(pair.p, pair.q));
  }
}

void BM_DeltaDivergence(benchmark::State& state) {
  run_over_pairs(state, [](const auto& p, const auto& q) { return delta_divergence(p, q).value; });
}
BENCHMARK(BM_DeltaDivergence)->Arg(3)->Arg(6)->Arg(100);

void BM_DeltaMerged(benchmark::State& state) {
  run_over_pairs(state, [](const auto& p, const auto& q) { return delta_divergence_merged(p, q); });
}
BENCHMARK(BM_DeltaMerged)->Arg(3)->Arg(6)->Arg(100);

void BM_TotalVariation(benchmark::State& state) {
  run_over_pairs(state, [](const auto& p, const auto& q) { return total_variation(p, q).value; });
}
BENCHMARK(BM_TotalVariation)->Arg(6)->Arg(100);

void BM_KullbackLeibler(benchmark::State& state) {
  run_over_pairs(state, [](const auto& p, const auto& q) { return kl(p, q).value; });
}
BENCHMARK(BM_KullbackLeibler)->Arg(6)->Arg(100);

void BM_JensenShannon(benchmark::State& state) {
  run_over_pairs(state, [](const auto& p, const auto& q) { return jensen_shannon(p, q).value; });
}
BENCHMARK(BM_JensenShannon)->Arg(6)->Arg(100);

void BM_EvaluatePair(benchmark::State& state) {
  const auto pairs = make_pairs(static_cast<std::size_t>(state.range(0)), 1024);
  const ScatterOptions options;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_pair(pairs[i & 1023], i, std::nullopt, options));
    ++i;
  }
}
BENCHMARK(BM_EvaluatePair)->Arg(3)->Arg(6);

}  // namespace
