#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "netstab/errors.hpp"
#include "netstab/formation.hpp"
#include "netstab/moments.hpp"
#include "netstab/rng.hpp"
#include "scenarios.hpp"

using namespace netstab;

namespace {

NetSeries make_series(std::size_t n, const std::vector<std::vector<std::pair<int, int>>>& periods) {
  NetSeries s;
  s.ids = iota_ids(n);
  for (const auto& edges : periods) {
    Net g(n);
    for (auto [a, b] : edges) g.add(a, b);
    s.nets.push_back(std::move(g));
  }
  return s;
}

NetSeries induced_series(const NetSeries& s, const std::vector<int>& local) {
  NetSeries out;
  for (int k : local) out.ids.push_back(s.ids[static_cast<std::size_t>(k)]);
  for (const Net& g : s.nets) out.nets.push_back(g.induced(local));
  return out;
}

NetSeries permuted_series(const NetSeries& s, const std::vector<int>& perm) {
  NetSeries out;
  out.ids = s.ids;
  for (const Net& g : s.nets) {
    Net h(g.size());
    for (auto [a, b] : g.edges()) h.add(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
    out.nets.push_back(std::move(h));
  }
  return out;
}

Simulation graham_sim(std::uint64_t seed, std::int64_t n = 600) {
  return simulate(scenarios::graham_spec(), n, n, false, seed);
}

}  // namespace

TEST(StatKind, ParsesAndLabels) {
  const ModelSpec spec = scenarios::graham_spec();
  EXPECT_EQ(parse_stat_kind("degree", spec).t, 3);
  EXPECT_EQ(parse_stat_kind("degree:1", spec).label(), "degree:1");
  EXPECT_EQ(parse_stat_kind("kstar:3:2", spec).label(), "kstar:3:2");
  EXPECT_EQ(parse_stat_kind("kneigh:2", spec).locality(), 2);
  EXPECT_EQ(parse_stat_kind("graham:1,0.5", spec).dim(), 2u);
  EXPECT_EQ(parse_stat_kind("graham:1,0.5", spec).rule, StableDyadRule::isolated_switch);
  EXPECT_EQ(parse_stat_kind("graham:switch", spec).rule, StableDyadRule::switch_only);
  EXPECT_EQ(parse_stat_kind("graham:1,2:equal_common", spec).label(), "graham:1,2:equal_common");
  EXPECT_EQ(parse_stat_kind("asf:1,0", spec).dim(), 3u);
  EXPECT_DOUBLE_EQ(parse_stat_kind("constant:2.5", spec).c, 2.5);
  for (const char* bad : {"degree:9", "kstar", "kstar:0", "graham:1", "asf:1", "bogus", "triangle:1:2"}) {
    try {
      parse_stat_kind(bad, spec);
      ADD_FAILURE() << bad;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.key(), "stat") << bad;
    }
  }
}

TEST(Counts, FourNodeScenarioDegrees) {
  const auto s = scenarios::four_node_scenario();
  const NetSeries series = run_pipeline(s.spec, s.prims, s.scale);
  EXPECT_EQ(count_stat(series, parse_stat_kind("degree:0", s.spec)).values,
            (std::vector<double>{1, 1, 2, 0}));
  EXPECT_EQ(count_stat(series, parse_stat_kind("degree:1", s.spec)).values,
            (std::vector<double>{1, 1, 0, 0}));
  EXPECT_EQ(count_stat(series, parse_stat_kind("dyad:0", s.spec)).values,
            (std::vector<double>{0.5, 0.5, 1, 0}));
}

TEST(Counts, TrianglesAndStarsMatchEnumeration) {
  const ModelSpec spec = scenarios::strategic_spec(3.0, 0);
  const Simulation sim = simulate(spec, 50, 8, false, 12);
  const Net& g = sim.series.nets[0];
  ASSERT_GT(g.edge_count(), 20u);
  const auto tri = count_stat(sim.series, parse_stat_kind("triangle:0", spec));
  const auto star = count_stat(sim.series, parse_stat_kind("kstar:3:0", spec));
  std::size_t total = 0;
  for (int i = 0; i < 50; ++i) {
    double count = 0;
    for (int j = 0; j < 50; ++j) {
      for (int k = j + 1; k < 50; ++k) {
        if (j != i && k != i && g.has(i, j) && g.has(i, k) && g.has(j, k)) ++count;
      }
    }
    total += static_cast<std::size_t>(count);
    EXPECT_EQ(tri.values[static_cast<std::size_t>(i)], 2 * count);
    const double d = static_cast<double>(g.degree(i));
    EXPECT_EQ(star.values[static_cast<std::size_t>(i)], d * (d - 1) * (d - 2) / 6);
  }
  EXPECT_GT(total, 0u);
}

TEST(Counts, PairwiseSumIsExactOnIntegers) {
  std::vector<double> v(1001);
  std::iota(v.begin(), v.end(), 0.0);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  NodeStatVector psi;
  psi.dim = 2;
  psi.values = {1, 2, 3, 4, 5, 6};
  EXPECT_EQ(aggregate(psi), (std::vector<double>{9, 12}));
}

TEST(Counts, PermutationEquivariance) {
  const ModelSpec spec = scenarios::strategic_spec(1.0);
  const Simulation sim = simulate(spec, 120, 120, false, 3);
  std::vector<int> perm(120);
  std::iota(perm.begin(), perm.end(), 0);
  RngStream rng(1, Stream::instance);
  std::shuffle(perm.begin(), perm.end(), rng);
  const NetSeries p = permuted_series(sim.series, perm);
  for (const char* text : {"degree", "triangle:1", "kstar:2:0", "kneigh:2"}) {
    const StatKind kind = parse_stat_kind(text, spec);
    const auto a = count_stat(sim.series, kind), b = count_stat(p, kind);
    for (std::size_t i = 0; i < 120; ++i) EXPECT_EQ(a.values[i], b.values[static_cast<std::size_t>(perm[i])]) << text;
  }
}

TEST(Counts, LocalToDynamicNeighborhood) {
  const ModelSpec spec = scenarios::graham_spec(2.0);
  const Simulation sim = simulate(spec, 300, 300, false, 5);
  const std::vector<StatKind> kinds{parse_stat_kind("degree:2", spec), parse_stat_kind("triangle:1", spec),
                                    parse_stat_kind("kneigh:2:3", spec), parse_stat_kind("graham:1,0.5", spec),
                                    parse_stat_kind("graham:0.3,-1:switch", spec)};
  for (const StatKind& kind : kinds) {
    const auto full = compute_stat(kind, spec, sim.prims, sim.scale, sim.series);
    for (int i = 0; i < 300; i += 7) {
      const auto local = dynamic_kneigh(sim.series, i, kind.locality());
      const auto sub = induced_series(sim.series, local);
      const Primitives sp = sim.prims.subset(local);
      const auto part = compute_stat(kind, spec, sp, sim.scale, sub);
      const auto pos = static_cast<std::size_t>(std::lower_bound(local.begin(), local.end(), i) - local.begin());
      for (std::size_t c = 0; c < full.dim; ++c) {
        EXPECT_EQ(full.row(static_cast<std::size_t>(i))[c], part.row(pos)[c]) << kind.label() << " node " << i;
      }
    }
  }
}

TEST(DynamicKNeigh, HandExample) {
  // Period 0: 0-1. Period 1: 1-2, 3-4.
  const NetSeries s = make_series(5, {{{0, 1}}, {{1, 2}, {3, 4}}});
  EXPECT_EQ(dynamic_kneigh(s, 0, 1), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(dynamic_kneigh(s, 2, 1), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(dynamic_kneigh(s, 3, 1), (std::vector<int>{3, 4}));
  EXPECT_EQ(dynamic_kneigh(s, 0, 2), (std::vector<int>{0, 1, 2}));
  EXPECT_THROW(dynamic_kneigh(s, 0, 0), ContractViolation);
}

TEST(Graham, GradientAndHessianMatchFiniteDifferences) {
  const Simulation sim = graham_sim(21);
  for (auto rule : {StableDyadRule::isolated_switch, StableDyadRule::switch_only,
                    StableDyadRule::switch_with_equal_common}) {
    const std::vector<double> th{0.7, -0.2};
    const auto o = graham_objective(sim.series, th, rule);
    ASSERT_GT(o.informative, 0u);
    const double h = 1e-6;
    for (int c = 0; c < 2; ++c) {
      std::vector<double> up = th, dn = th;
      up[static_cast<std::size_t>(c)] += h;
      dn[static_cast<std::size_t>(c)] -= h;
      const auto ou = graham_objective(sim.series, up, rule), od = graham_objective(sim.series, dn, rule);
      const double scale = 1.0 + std::abs(o.gradient[static_cast<std::size_t>(c)]);
      EXPECT_NEAR((ou.value - od.value) / (2 * h), o.gradient[static_cast<std::size_t>(c)], 1e-5 * scale);
      for (int e = 0; e < 2; ++e) {
        EXPECT_NEAR((ou.gradient[static_cast<std::size_t>(e)] - od.gradient[static_cast<std::size_t>(e)]) / (2 * h),
                    o.hessian[static_cast<std::size_t>(2 * c + e)], 1e-5 * (1.0 + std::abs(o.hessian[0])));
      }
    }
    // Negative semidefinite.
    EXPECT_LE(o.hessian[0], 0.0);
    EXPECT_GE(o.hessian[0] * o.hessian[3] - o.hessian[1] * o.hessian[2], -1e-9);
    // Node scores add up to the gradient.
    const auto score = graham_score(sim.series, th, rule);
    const auto tot = aggregate(score);
    EXPECT_NEAR(tot[0], o.gradient[0], 1e-8 * (1 + std::abs(o.gradient[0])));
    EXPECT_NEAR(tot[1], o.gradient[1], 1e-8 * (1 + std::abs(o.gradient[1])));
  }
}

TEST(Graham, FitSolvesScoreEquation) {
  const Simulation sim = graham_sim(4, 2000);
  const GrahamFit fit = graham_fit(sim.series);
  EXPECT_LT(fit.gradient_norm, 1e-8);
  EXPECT_GT(fit.informative, 50u);
  EXPECT_NEAR(fit.theta[0], 1.0, 1.0);
  EXPECT_NEAR(fit.theta[1], 0.5, 2.0);
  const auto o = graham_objective(sim.series, fit.theta);
  EXPECT_NEAR(o.value, fit.log_likelihood, 1e-12 * std::abs(o.value));
}

TEST(Graham, DegenerateAndSeparatedSamples) {
  const NetSeries empty = make_series(4, {{}, {}, {}, {}});
  EXPECT_THROW(graham_fit(empty), Degenerate);
  // Rule "switch": dyad 01 has x = (-1, 0); dyads 23, 24, 34 have x = (0, -1).
  const NetSeries sep = make_series(5, {{{0, 1}}, {{2, 3}, {2, 4}, {3, 4}}, {{0, 1}}, {}});
  EXPECT_THROW(graham_fit(sep, StableDyadRule::switch_only), Separation);
  const NetSeries short_series = make_series(3, {{}, {}});
  EXPECT_THROW(graham_fit(short_series), ContractViolation);
}

TEST(Graham, IsolatedRuleSelection) {
  // Dyad 01 switches off with no other period-1 links at 0 or 1: kept.
  // Dyad 23 switches on but 2 also links 4 in period 1: dropped.
  // Dyads 24 and 45 switch off but 4 has two period-1 links: dropped.
  const NetSeries s = make_series(6, {{{0, 1}}, {{0, 1}, {2, 4}, {4, 5}}, {{2, 3}}, {{0, 1}}});
  const std::vector<double> th{0.0, 0.0};
  EXPECT_EQ(graham_objective(s, th, StableDyadRule::isolated_switch).informative, 1u);
  EXPECT_EQ(graham_objective(s, th, StableDyadRule::switch_only).informative, 4u);
  // x for 01: G = -1, H = (1 - 1, 0 - 0) -> (0, 0): score 0 at any theta.
  const auto score = graham_score(s, th);
  EXPECT_EQ(score.values, std::vector<double>(12, 0.0));
}

TEST(Asf, HandBuiltPanel) {
  const ModelSpec spec = model_from_json(R"({"d":1,"T":2,"kappa":1,"v":{"beta_s":[1,2]},"v0":{},
    "shock_law":"logistic","s_kind":"lagged_link_and_common_max"})");
  Primitives p;
  p.ids = iota_ids(4);
  p.T = 2;
  p.X.assign(4, 0.5);
  p.shocks = std::make_shared<TableShocks>(0.0);
  const NetSeries s = make_series(4, {{{0, 1}, {0, 2}, {1, 2}, {0, 3}}, {{0, 1}, {0, 3}}, {{0, 2}}});
  const std::vector<double> target{1.0, 0.0};
  const auto psi = asf_stats(spec, p, SparsityScale{4, 1.0}, s, target);
  EXPECT_EQ(psi.values, (std::vector<double>{1, 1, 3, 0, 1, 2, 0, 2, 2, 1, 0, 1}));
  const AsfBounds b = asf_bounds(psi);
  EXPECT_DOUBLE_EQ(b.lower, 0.25);
  EXPECT_DOUBLE_EQ(b.upper, 0.75);
  // A target never hit puts every initial link in the unhit count.
  const std::vector<double> never{0.0, 1.0};
  const auto none = asf_stats(spec, p, SparsityScale{4, 1.0}, s, never);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(none.row(i)[0], 0.0);
    EXPECT_EQ(none.row(i)[1], none.row(i)[2]);
  }
  EXPECT_DOUBLE_EQ(asf_bounds(none).lower, 0.0);
  EXPECT_DOUBLE_EQ(asf_bounds(none).upper, 1.0);
  const NetSeries empty = make_series(4, {{}, {}, {}});
  EXPECT_THROW(asf_bounds(asf_stats(spec, p, SparsityScale{4, 1.0}, empty, target)), ZeroDenominator);
}

TEST(Asf, LowerNeverAboveUpper) {
  const ModelSpec spec = scenarios::strategic_spec(1.0, 3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Simulation sim = simulate(spec, 300, 300, false, seed);
    for (const char* text : {"asf:1,0", "asf:1,1", "asf:0,1"}) {
      const auto psi = compute_stat(parse_stat_kind(text, spec), spec, sim.prims, sim.scale, sim.series);
      const AsfBounds b = asf_bounds(psi);
      EXPECT_LE(b.lower, b.upper);
      EXPECT_GE(b.lower, 0.0);
      EXPECT_LE(b.upper, 1.0);
    }
  }
}

TEST(AddOneCost, DegreeIsTwiceNewcomerDegree) {
  const ModelSpec spec = scenarios::dyadic_spec(2, 2.0, 0.0, "\"logistic\"", 1);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Primitives p = sample_primitives(spec, iota_ids(201), seed);
    const SparsityScale sc = SparsityScale::from(spec, 200);
    const NetSeries full = run_pipeline(spec, p, sc);
    const auto xi = add_one_cost(spec, p, sc, parse_stat_kind("degree:1", spec));
    ASSERT_EQ(xi.size(), 1u);
    EXPECT_EQ(xi[0], 2.0 * static_cast<double>(full.nets[1].degree(200)));
    const auto c = add_one_cost(spec, p, sc, parse_stat_kind("constant:3", spec));
    EXPECT_EQ(c[0], 3.0);
  }
}
