#include <benchmark/benchmark.h>

#include "netstab/model_io.hpp"
#include "netstab/moments.hpp"
#include "netstab/stabilization.hpp"

using namespace netstab;

namespace {

const ModelSpec& spec() {
  static const ModelSpec s = model_from_json(R"({"d":2,"d_z":1,"T":3,"kappa":0.15,
    "v":{"beta_s":[1.0,0.5],"beta_z":[0.3],"intercept":-1.5},
    "v0":{"beta_s":[0.4,0.4],"beta_z":[0.3],"intercept":-1.5},
    "shock_law":"logistic","s_kind":"lagged_link_and_common_count",
    "s_bounds":[[0,1],[0,3]],"attribute_law":{"family":"bernoulli","p":0.4}})");
  return s;
}

void BM_ConstructJi(benchmark::State& state) {
  const auto n = state.range(0);
  const Primitives p = sample_primitives(spec(), iota_ids(static_cast<std::size_t>(n)), 2);
  const SparsityScale sc = SparsityScale::from(spec(), n);
  const StabContext ctx = StabContext::build(spec(), p, sc);
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(construct_Ji(ctx, i, static_cast<int>(state.range(1))));
    i = (i + 1) % static_cast<int>(n);
  }
}
BENCHMARK(BM_ConstructJi)->Args({2000, 1})->Args({2000, 2})->Args({20000, 1});

void BM_StabContext(benchmark::State& state) {
  const auto n = state.range(0);
  const Primitives p = sample_primitives(spec(), iota_ids(static_cast<std::size_t>(n)), 2);
  const SparsityScale sc = SparsityScale::from(spec(), n);
  for (auto _ : state) benchmark::DoNotOptimize(StabContext::build(spec(), p, sc));
  state.SetComplexityN(n);
}
BENCHMARK(BM_StabContext)->RangeMultiplier(4)->Range(500, 32000)->Complexity();

void BM_VerifyDegree(benchmark::State& state) {
  const std::int64_t n = 1000;
  const Primitives p = sample_primitives(spec(), iota_ids(n), 2);
  const SparsityScale sc = SparsityScale::from(spec(), n);
  const StatKind kind = parse_stat_kind("degree", spec());
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_stabilization(spec(), p, sc, i, 1, kind));
    i = (i + 7) % static_cast<int>(n);
  }
}
BENCHMARK(BM_VerifyDegree);

}  // namespace
