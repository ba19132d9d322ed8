#include <benchmark/benchmark.h>

#include "netstab/rng.hpp"

using namespace netstab;

namespace {

void BM_Philox(benchmark::State& state) {
  PhiloxCounter ctr{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctr = philox4x64(ctr, {1, 2}));
  }
}
BENCHMARK(BM_Philox);

void BM_Uniform(benchmark::State& state) {
  RngStream rng(1, Stream::monte_carlo);
  for (auto _ : state) benchmark::DoNotOptimize(rng.uniform());
}
BENCHMARK(BM_Uniform);

void BM_Normal(benchmark::State& state) {
  RngStream rng(1, Stream::monte_carlo);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_Normal);

void BM_Poisson(benchmark::State& state) {
  RngStream rng(1, Stream::monte_carlo);
  const double mean = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rng.poisson(mean));
}
BENCHMARK(BM_Poisson)->Arg(1)->Arg(50)->Arg(5000);

}  // namespace
