#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "netstab/errors.hpp"
#include "netstab/formation.hpp"
#include "netstab/moments.hpp"
#include "netstab/rng.hpp"
#include "netstab/stabilization.hpp"
#include "netstab/tail.hpp"
#include "scenarios.hpp"

using namespace netstab;

namespace {

bool includes(const std::vector<int>& big, const std::vector<int>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

TEST(Stabilization, FourNodeNaiveSetFailsAndJFixesIt) {
  const auto s = scenarios::four_node_scenario();
  const StatKind kind = parse_stat_kind("degree:1", s.spec);
  const std::vector<int> naive{0, 1};
  const VerifyResult bad = verify_on_set(s.spec, s.prims, s.scale, 0, naive, kind);
  EXPECT_EQ(bad.psi_full, std::vector<double>{1.0});
  EXPECT_EQ(bad.psi_regrown, std::vector<double>{0.0});
  EXPECT_FALSE(bad.equal);
  const auto J = construct_Ji(s.spec, s.prims, s.scale, 0, 1);
  EXPECT_EQ(J, (std::vector<int>{0, 1, 2}));
  const VerifyResult good = verify_on_set(s.spec, s.prims, s.scale, 0, J, kind);
  EXPECT_TRUE(good.equal);
  EXPECT_EQ(good.psi_regrown, std::vector<double>{1.0});
  EXPECT_TRUE(verify_stabilization(s.spec, s.prims, s.scale, 0, 1, kind).equal);
  EXPECT_DOUBLE_EQ(radius(s.prims, s.scale, 0, J), 0.0);
}

TEST(Stabilization, IsolatedNodeStabilizesAlone) {
  // Index never positive at any distance.
  const ModelSpec spec = scenarios::dyadic_spec(2, 1.0, -80.0, R"({"family":"normal","sigma":1})", 2);
  const Primitives p = sample_primitives(spec, iota_ids(100), 1);
  const SparsityScale sc = SparsityScale::from(spec, 100);
  for (int i = 0; i < 100; i += 9) EXPECT_EQ(construct_Ji(spec, p, sc, i, 2), std::vector<int>{i});
}

TEST(Stabilization, JContainsDynamicNeighborhoodAndVerifies) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const ModelSpec spec = scenarios::attribute_spec(0.15);
    const Simulation sim = simulate(spec, 200, 200, false, seed);
    const StabContext ctx = StabContext::build(spec, sim.prims, sim.scale);
    for (int K : {1, 2}) {
      for (int i = 0; i < 200; i += 5) {
        const auto J = construct_Ji(ctx, i, K);
        EXPECT_TRUE(std::binary_search(J.begin(), J.end(), i));
        EXPECT_TRUE(includes(J, dynamic_kneigh(sim.series, i, K)));
        EXPECT_TRUE(includes(J, ctx.c_plus[static_cast<std::size_t>(i)]));
        if (K == 2) EXPECT_TRUE(includes(J, construct_Ji(ctx, i, 1)));
      }
    }
    const std::vector<StatKind> kinds{parse_stat_kind("degree", spec), parse_stat_kind("triangle:2", spec),
                                      parse_stat_kind("graham:1,0.5", spec),
                                      parse_stat_kind("asf:1,1,1,0", spec), parse_stat_kind("kneigh:2:1", spec)};
    std::vector<int> nodes;
    for (int i = 0; i < 200; i += 3) nodes.push_back(i);
    const StabReport rep = stabilization_report(spec, sim.prims, sim.scale, kinds, nodes, true, 1);
    EXPECT_EQ(rep.checked, nodes.size());
    EXPECT_EQ(rep.failures, 0u);
  }
}

TEST(Stabilization, RadiusIsLargestScaledDistance) {
  const ModelSpec spec = scenarios::strategic_spec(1.0);
  const Primitives p = sample_primitives(spec, iota_ids(50), 3);
  const SparsityScale sc = SparsityScale::from(spec, 50);
  const std::vector<int> J{0, 4, 17};
  const double want = std::max(p.distance(0, 4), p.distance(0, 17)) / sc.r;
  EXPECT_DOUBLE_EQ(radius(p, sc, 0, J), want);
}

TEST(Stabilization, ReportCsvAndTails) {
  const ModelSpec spec = scenarios::strategic_spec(0.5);
  const Simulation sim = simulate(spec, 600, 600, false, 2);
  const std::vector<StatKind> kinds{parse_stat_kind("degree", spec)};
  std::vector<int> nodes(600);
  for (int i = 0; i < 600; ++i) nodes[static_cast<std::size_t>(i)] = i;
  const StabReport rep = stabilization_report(spec, sim.prims, sim.scale, kinds, nodes, false, 1);
  EXPECT_EQ(rep.checked, 0u);
  ASSERT_TRUE(rep.size_tail.has_value());
  ASSERT_TRUE(rep.radius_tail.has_value());
  std::ostringstream os;
  write_stab_csv(os, rep);
  const std::string text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "node,J_size,radius,verified");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 601);
}

TEST(TailFit, ExponentialSlope) {
  RngStream rng(5, Stream::monte_carlo);
  std::vector<double> x(20000);
  for (double& v : x) v = rng.exponential() / 2.0;
  const TailFit fit = tail_fit(x);
  EXPECT_NEAR(fit.slope, -2.0, 0.1);
  EXPECT_TRUE(fit.exponential_tail());
  EXPECT_LT(fit.slope_lo, fit.slope);
  EXPECT_GT(fit.slope_hi, fit.slope);
}

TEST(TailFit, GeometricIntegerData) {
  RngStream rng(6, Stream::monte_carlo);
  std::vector<double> x(20000);
  // P(X > w) = 0.7^w on w = 0, 1, ...
  for (double& v : x) v = std::floor(std::log(rng.uniform()) / std::log(0.7));
  const TailFit fit = tail_fit(x);
  EXPECT_NEAR(fit.slope, std::log(0.7), 0.03);
  for (double t : fit.thresholds) EXPECT_EQ(t, std::floor(t));
}

TEST(TailFit, ConstantAndSmallSamples) {
  const std::vector<double> flat(1000, 3.0);
  const TailFit fit = tail_fit(flat);
  EXPECT_TRUE(fit.degenerate);
  EXPECT_TRUE(std::isnan(fit.slope));
  EXPECT_FALSE(fit.exponential_tail());
  const std::vector<double> few(499, 1.0);
  EXPECT_THROW(tail_fit(few), InsufficientData);
}

TEST(Sparsity, PureDistanceLimits) {
  const ModelSpec expo = scenarios::dyadic_spec(1, 1.0, 0.0, R"("exponential")");
  EXPECT_NEAR(*pure_distance_limit(expo, Which::V0), 2.0, 1e-8);
  const ModelSpec lap = scenarios::dyadic_spec(1, 1.0, 0.0, R"({"family":"laplace","b":2})");
  EXPECT_NEAR(*pure_distance_limit(lap, Which::V0), 2.0, 1e-8);
  // d = 2, logistic, intercept c: kappa 2 pi int rho S(rho - c) drho.
  const double c = -0.5;
  const ModelSpec lg = scenarios::dyadic_spec(2, 0.7, c);
  double want = 0.0;
  const int m = 400000;
  const double top = 60.0;
  for (int k = 0; k < m; ++k) {
    const double rho = (k + 0.5) * top / m;
    want += rho * lg.shock.survival(rho - c) * top / m;
  }
  want *= 0.7 * 2.0 * M_PI;
  EXPECT_NEAR(*pure_distance_limit(lg, Which::V0), want, 1e-6);
  EXPECT_FALSE(pure_distance_limit(scenarios::strategic_spec(), Which::V0).has_value());
}

TEST(Sparsity, MeanDegreeNearLimitAndBounded) {
  const ModelSpec spec = scenarios::dyadic_spec(1, 1.0, 0.0, R"("exponential")");
  const std::vector<std::int64_t> grid{500, 2000};
  const SparsityReport rep = sparsity_check(spec, grid, 40, 9, 1);
  ASSERT_EQ(rep.rows.size(), 2u);
  for (const auto& row : rep.rows) EXPECT_NEAR(row.mean_degree[0], 2.0, 0.25);
  EXPECT_TRUE(rep.bounded());
}
