#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "netstab/errors.hpp"
#include "netstab/formation.hpp"
#include "netstab/rng.hpp"
#include "netstab/strategic.hpp"
#include "scenarios.hpp"

using namespace netstab;
using netstab::scenarios::Scenario;

namespace {

// Link indicator of pair (a, b) in period t given the previous network.
bool brute_link(const ModelSpec& spec, const Primitives& p, const SparsityScale& sc, int a, int b, int t,
                const Net* prev) {
  const Which w = t == 0 ? Which::V0 : Which::V;
  std::vector<double> s(spec.s_dim(), 0.0);
  if (prev) s = eval_S(spec, a, b, TypeView{p, t - 1, sc.r}, *prev);
  return eval_latent(spec, w, p.distance(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) / sc.r, s,
                     p.z(static_cast<std::size_t>(a), t), p.z(static_cast<std::size_t>(b), t),
                     p.zeta(static_cast<std::size_t>(a), static_cast<std::size_t>(b), t)) > 0.0;
}

// Pairwise stability by definition: linked pairs have V0 > 0 at the
// network's own S, unlinked pairs have V0 <= 0.
bool is_pairwise_stable(const ModelSpec& spec, const Primitives& p, const SparsityScale& sc, const Net& g) {
  const int n = static_cast<int>(p.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const std::vector<double> s = eval_S(spec, a, b, TypeView{p, 0, sc.r}, g);
      const double v = eval_latent(spec, Which::V0,
                                   p.distance(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) / sc.r, s,
                                   p.z(static_cast<std::size_t>(a), 0), p.z(static_cast<std::size_t>(b), 0),
                                   p.zeta(static_cast<std::size_t>(a), static_cast<std::size_t>(b), 0));
      if ((v > 0.0) != g.has(a, b)) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Formation, FourNodeScenarioNetworks) {
  const Scenario s = scenarios::four_node_scenario();
  const NetSeries series = run_pipeline(s.spec, s.prims, s.scale);
  ASSERT_EQ(series.nets.size(), 2u);
  EXPECT_EQ(series.nets[0].edges(), (std::vector<std::pair<int, int>>{{0, 2}, {1, 2}}));
  EXPECT_EQ(series.nets[1].edges(), (std::vector<std::pair<int, int>>{{0, 1}}));
  const auto M = sup_networks(s.spec, s.prims, s.scale);
  ASSERT_EQ(M.size(), 2u);
  EXPECT_EQ(M[0].edges(), series.nets[0].edges());
  EXPECT_EQ(M[1].edges(), (std::vector<std::pair<int, int>>{{0, 1}}));
}

TEST(Formation, CandidatePairsMatchBruteForce) {
  for (int d : {1, 2, 3}) {
    const ModelSpec spec = scenarios::dyadic_spec(d, 1.0, 0.0);
    const Primitives p = sample_primitives(spec, iota_ids(300), 17 + static_cast<std::uint64_t>(d));
    const SparsityScale sc = SparsityScale::from(spec, 300);
    const PairSet ps = candidate_pairs(spec, p, sc);
    std::vector<std::pair<int, int>> want;
    const double h = std::max(ps.horizon_v, ps.horizon_v0);
    for (int a = 0; a < 300; ++a) {
      for (int b = a + 1; b < 300; ++b) {
        if (p.distance(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) / sc.r <= h) want.push_back({a, b});
      }
    }
    std::vector<std::pair<int, int>> got;
    for (const auto& c : ps.pairs) got.push_back({c.a, c.b});
    EXPECT_EQ(got, want) << "d=" << d;
  }
}

TEST(Formation, DyadicMatchesBruteForce) {
  const ModelSpec spec = scenarios::attribute_spec();
  ModelSpec dyadic = spec;
  dyadic.v0.beta_s.assign(spec.s_dim(), 0.0);
  const Primitives p = sample_primitives(dyadic, iota_ids(250), 3);
  const SparsityScale sc = SparsityScale::from(dyadic, 250);
  const NetSeries series = run_pipeline(dyadic, p, sc);
  for (int t = 0; t <= dyadic.T; ++t) {
    for (int a = 0; a < 250; ++a) {
      for (int b = a + 1; b < 250; ++b) {
        const Net* prev = t == 0 ? nullptr : &series.nets[static_cast<std::size_t>(t - 1)];
        ASSERT_EQ(series.nets[static_cast<std::size_t>(t)].has(a, b), brute_link(dyadic, p, sc, a, b, t, prev))
            << "t=" << t << " pair " << a << "," << b;
      }
    }
  }
}

TEST(Formation, StrategicEquilibriumIsPairwiseStable) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ModelSpec spec = scenarios::attribute_spec(1.5);
    const Primitives p = sample_primitives(spec, iota_ids(300), seed);
    const SparsityScale sc = SparsityScale::from(spec, 300);
    SolveStats stats;
    const Net A0 = solve_pairwise_stable(spec, p, sc, &stats);
    EXPECT_EQ(stability_violations(spec, p, sc, A0), 0u);
    EXPECT_FALSE(stats.removed_link);
  }
}

TEST(Formation, SolverOutputIsEnumeratedEquilibrium) {
  int nontrivial = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const ModelSpec spec = scenarios::strategic_spec(4.0);
    RngStream rng(seed, Stream::instance);
    const auto n = static_cast<std::size_t>(2 + rng.below(5));
    const Primitives p = sample_primitives(spec, iota_ids(n), seed);
    const SparsityScale sc = SparsityScale::from(spec, 6);
    const Net A0 = solve_pairwise_stable(spec, p, sc);
    const auto all = enumerate_pairwise_stable(spec, p, sc);
    ASSERT_FALSE(all.empty());
    EXPECT_NE(std::find(all.begin(), all.end(), A0), all.end()) << "seed " << seed;
    for (const Net& g : all) EXPECT_TRUE(is_pairwise_stable(spec, p, sc, g));
    if (all.size() > 1) ++nontrivial;
    const auto dec = check_decentralization(spec, p, sc, A0);
    EXPECT_EQ(dec.incident_mismatches, 0u);
  }
  EXPECT_GT(nontrivial, 0);
}

TEST(Formation, EnumerateRejectsLargeInstances) {
  const ModelSpec spec = scenarios::strategic_spec();
  const Primitives p = sample_primitives(spec, iota_ids(7), 1);
  EXPECT_THROW(enumerate_pairwise_stable(spec, p, SparsityScale::from(spec, 7)), TooLarge);
}

TEST(Formation, RobustnessDecomposition) {
  const ModelSpec spec = scenarios::strategic_spec(1.0);
  const Primitives p = sample_primitives(spec, iota_ids(400), 8);
  const SparsityScale sc = SparsityScale::from(spec, 400);
  const auto dec = classify_robustness(spec, p, sc);
  const Net A0 = solve_pairwise_stable(spec, p, sc);
  for (const auto& [a, b] : dec.robust.edges()) {
    EXPECT_TRUE(A0.has(a, b));
    EXPECT_TRUE(dec.M0.has(a, b));
    EXPECT_FALSE(dec.D.has(a, b));
  }
  for (const auto& [a, b] : A0.edges()) EXPECT_TRUE(dec.M0.has(a, b));
  EXPECT_EQ(dec.M0.edge_count(), dec.robust.edge_count() + dec.D.edge_count());
  const auto comp = d_components(dec.D);
  for (const auto& [a, b] : dec.D.edges()) EXPECT_EQ(comp[static_cast<std::size_t>(a)], comp[static_cast<std::size_t>(b)]);
  const auto cplus = strategic_neighborhoods(dec);
  for (std::size_t i = 0; i < cplus.size(); ++i) {
    EXPECT_TRUE(std::binary_search(cplus[i].begin(), cplus[i].end(), static_cast<int>(i)));
  }
}

TEST(Formation, RollForwardMatchesBruteForce) {
  const ModelSpec spec = scenarios::attribute_spec(1.0);
  const Primitives p = sample_primitives(spec, iota_ids(200), 4);
  const SparsityScale sc = SparsityScale::from(spec, 200);
  const NetSeries series = run_pipeline(spec, p, sc);
  for (int t = 1; t <= spec.T; ++t) {
    for (int a = 0; a < 200; ++a) {
      for (int b = a + 1; b < 200; ++b) {
        ASSERT_EQ(series.nets[static_cast<std::size_t>(t)].has(a, b),
                  brute_link(spec, p, sc, a, b, t, &series.nets[static_cast<std::size_t>(t - 1)]));
      }
    }
  }
}

TEST(Formation, SupNetworksContainRealizedLinks) {
  const ModelSpec spec = scenarios::attribute_spec(1.0);
  const Primitives p = sample_primitives(spec, iota_ids(300), 9);
  const SparsityScale sc = SparsityScale::from(spec, 300);
  const NetSeries series = run_pipeline(spec, p, sc);
  const auto M = sup_networks(spec, p, sc);
  for (int t = 0; t <= spec.T; ++t) {
    for (const auto& [a, b] : series.nets[static_cast<std::size_t>(t)].edges()) {
      EXPECT_TRUE(M[static_cast<std::size_t>(t)].has(a, b));
    }
  }
}

TEST(Formation, SimulateIsDeterministicAndNested) {
  const ModelSpec spec = scenarios::strategic_spec();
  const Simulation a = simulate(spec, 150, 150, false, 77);
  const Simulation b = simulate(spec, 150, 150, false, 77);
  EXPECT_EQ(a.series.nets, b.series.nets);
  const Simulation c = simulate(spec, 150, 150, false, 78);
  EXPECT_NE(a.series.nets, c.series.nets);
  const Simulation pois = simulate(spec, 150, 150, true, 77);
  EXPECT_EQ(static_cast<std::int64_t>(pois.series.size()), poissonized_size(150, 77));
  const std::size_t m = std::min<std::size_t>(pois.prims.size(), 150);
  for (std::size_t k = 0; k < m; ++k) EXPECT_EQ(pois.prims.x(k)[0], a.prims.x(k)[0]);
}
