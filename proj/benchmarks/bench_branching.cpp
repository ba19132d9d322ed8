#include <benchmark/benchmark.h>

#include <vector>

#include "netstab/branching.hpp"
#include "netstab/model_io.hpp"

using namespace netstab;

namespace {

const ModelSpec& spec() {
  static const ModelSpec s = model_from_json(R"({"d":2,"T":1,"kappa":0.5,
    "v":{"beta_s":[0.5,0.25],"intercept":-1.5},"v0":{"beta_s":[0.3,0.3],"intercept":-1.5},
    "shock_law":"logistic","s_kind":"lagged_link_and_common_max"})");
  return s;
}

void BM_Branching(benchmark::State& state) {
  BranchingConfig cfg;
  cfg.spec = &spec();
  cfg.kind = static_cast<Intensity>(state.range(0));
  cfg.K = 2;
  cfg.seed = 1;
  const ParticleType root{{0.0, 0.0}, {}};
  std::uint64_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_branching(cfg, root, rep++));
}
BENCHMARK(BM_Branching)->Arg(static_cast<int>(Intensity::D))->Arg(static_cast<int>(Intensity::M))
    ->Arg(static_cast<int>(Intensity::H));

void BM_HNorm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(h_D_norm(spec()));
}
BENCHMARK(BM_HNorm);

}  // namespace
