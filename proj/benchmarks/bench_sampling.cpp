#include <benchmark/benchmark.h>

#include <sstream>

#include "deltadiv/deltadiv.hpp"

namespace {

using namespace deltadiv;

void BM_StreamDerivation(benchmark::State& state) {
  std::uint64_t k = 0;
  for (auto _ : state) {
    Rng rng = Rng::for_sample(42, k++);
    benchmark::DoNotOptimize(rng.next());
  }
}
BENCHMARK(BM_StreamDerivation);

void BM_SampleSimplex(benchmark::State& state) {
  Rng rng(7);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_simplex(m, rng));
}
BENCHMARK(BM_SampleSimplex)->Arg(3)->Arg(6)->Arg(100);

void BM_SampleWithDominant(benchmark::State& state) {
  Rng rng(7);
  const double p_mu = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_with_dominant(6, 0, p_mu, rng));
}
BENCHMARK(BM_SampleWithDominant)->Arg(17)->Arg(25)->Arg(40)->Arg(90);

void BM_ScatterRunCsv(benchmark::State& state) {
  SamplerConfig config;
  config.classes = 6;
  config.count = static_cast<std::uint64_t>(state.range(0));
  config.seed = 3;
  for (auto _ : state) {
    std::ostringstream out;
    RecordWriter writer(out, RecordFormat::Csv);
    run_scatter(config, ScatterOptions{}, [&](const ScatterRecord& r) { writer.write(r); });
    benchmark::DoNotOptimize(writer.checksum());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScatterRunCsv)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
