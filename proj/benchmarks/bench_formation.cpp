#include <benchmark/benchmark.h>

#include "netstab/formation.hpp"
#include "netstab/model_io.hpp"

using namespace netstab;

namespace {

const ModelSpec& strategic() {
  static const ModelSpec spec = model_from_json(R"({"d":2,"T":3,"kappa":0.5,
    "v":{"beta_s":[0.5,0.25],"intercept":-1.5},"v0":{"beta_s":[0.3,0.3],"intercept":-1.5},
    "shock_law":"logistic","s_kind":"lagged_link_and_common_max"})");
  return spec;
}

void BM_CandidatePairs(benchmark::State& state) {
  const auto n = state.range(0);
  const Primitives p = sample_primitives(strategic(), iota_ids(static_cast<std::size_t>(n)), 1);
  const SparsityScale sc = SparsityScale::from(strategic(), n);
  for (auto _ : state) benchmark::DoNotOptimize(candidate_pairs(strategic(), p, sc));
  state.SetComplexityN(n);
}
BENCHMARK(BM_CandidatePairs)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_SolvePairwiseStable(benchmark::State& state) {
  const auto n = state.range(0);
  const Primitives p = sample_primitives(strategic(), iota_ids(static_cast<std::size_t>(n)), 1);
  const SparsityScale sc = SparsityScale::from(strategic(), n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_pairwise_stable(strategic(), p, sc));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolvePairwiseStable)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_Pipeline(benchmark::State& state) {
  const auto n = state.range(0);
  const Primitives p = sample_primitives(strategic(), iota_ids(static_cast<std::size_t>(n)), 1);
  const SparsityScale sc = SparsityScale::from(strategic(), n);
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(strategic(), p, sc));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Pipeline)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

}  // namespace
