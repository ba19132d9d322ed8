#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "netstab/errors.hpp"
#include "netstab/model.hpp"
#include "netstab/model_io.hpp"

using namespace netstab;

namespace {

const char* kBase = R"({"d":2,"T":1,"kappa":1.5,"v":{"beta_s":[1.0],"intercept":-1},
  "v0":{"intercept":-1},"shock_law":"logistic","s_kind":"lagged_link"})";

std::string error_key(const std::string& text) {
  try {
    model_from_json(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST(ModelIo, ParsesMinimalConfig) {
  const ModelSpec spec = model_from_json(kBase);
  EXPECT_EQ(spec.d, 2);
  EXPECT_EQ(spec.T, 1);
  EXPECT_DOUBLE_EQ(spec.kappa, 1.5);
  EXPECT_EQ(spec.s_kind, SKind::lagged_link);
  EXPECT_EQ(spec.s_dim(), 1u);
  EXPECT_EQ(spec.v0.beta_s, std::vector<double>{0.0});
  EXPECT_FALSE(spec.strategic_initial());
}

TEST(ModelIo, RoundTrip) {
  const ModelSpec a = model_from_json(kBase);
  const ModelSpec b = model_from_json(model_to_json(a));
  EXPECT_EQ(model_to_json(a), model_to_json(b));
}

TEST(ModelIo, MissingKeysAreNamed) {
  EXPECT_EQ(error_key(R"({"T":1,"kappa":1,"v":{},"v0":{},"shock_law":"logistic","s_kind":"none"})"), "d");
  EXPECT_EQ(error_key(R"({"d":1,"kappa":1,"v":{},"v0":{},"shock_law":"logistic","s_kind":"none"})"), "T");
  EXPECT_EQ(error_key(R"({"d":1,"T":1,"v":{},"v0":{},"shock_law":"logistic","s_kind":"none"})"), "kappa");
  EXPECT_EQ(error_key(R"({"d":1,"T":1,"kappa":1,"v0":{},"shock_law":"logistic","s_kind":"none"})"), "v");
  EXPECT_EQ(error_key(R"({"d":1,"T":1,"kappa":1,"v":{},"v0":{},"s_kind":"none"})"), "shock_law");
  EXPECT_EQ(error_key(R"({"d":1,"T":1,"kappa":1,"v":{},"v0":{},"shock_law":"logistic",
    "s_kind":"common_neighbor_count"})"), "s_bounds");
}

TEST(ModelIo, BadValuesAreNamed) {
  EXPECT_EQ(error_key(R"({"d":1,"T":1,"kappa":-1,"v":{},"v0":{},"shock_law":"logistic","s_kind":"none"})"),
            "kappa");
  EXPECT_EQ(error_key(R"({"d":1,"T":1,"kappa":1,"v":{},"v0":{},"shock_law":"cauchy","s_kind":"none"})"),
            "shock_law.family");
  EXPECT_EQ(error_key(R"({"d":1,"T":1,"kappa":1,"v":{},"v0":{},"shock_law":"logistic","s_kind":"nope"})"),
            "s_kind");
  EXPECT_EQ(error_key(R"({"d":1,"T":1,"kappa":1,"v":{"beta_s":[1,2]},"v0":{},"shock_law":"logistic",
    "s_kind":"lagged_link"})"), "v.beta_s");
  EXPECT_EQ(error_key(R"({"d":"x","T":1,"kappa":1,"v":{},"v0":{},"shock_law":"logistic","s_kind":"none"})"), "d");
  EXPECT_EQ(error_key(R"({"d":1,"T":1,"kappa":1,"v":{"slope":1},"v0":{},"shock_law":"logistic",
    "s_kind":"none"})"), "v.slope");
  EXPECT_EQ(error_key(R"({"d":1,"T":1,"kappa":1,"v":{},"v0":{},"shock_law":"logistic","s_kind":"none",
    "extra":1})"), "extra");
  EXPECT_EQ(error_key(R"({"d":1,"T":1,"kappa":1,"v":{},"v0":{},"shock_law":"logistic","s_kind":"none",
    "d_z":1})"), "attribute_law");
}

TEST(ModelIo, InvalidJson) {
  EXPECT_THROW(model_from_json("{not json"), ConfigError);
  EXPECT_THROW(model_from_json("[1,2]"), ConfigError);
}

class ShockLawTest : public ::testing::TestWithParam<ShockLaw> {};

TEST_P(ShockLawTest, CdfSurvivalQuantileConsistent) {
  const ShockLaw law = GetParam();
  for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5, 6.0}) {
    EXPECT_NEAR(law.cdf(x) + law.survival(x), 1.0, 1e-14);
  }
  for (double u : {0.01, 0.2, 0.5, 0.73, 0.999}) {
    EXPECT_NEAR(law.cdf(law.quantile(u)), u, 1e-12);
  }
  for (double eps : {1e-15, 1e-6, 0.1}) {
    EXPECT_NEAR(law.survival(law.upper_quantile(eps)) / eps, 1.0, 1e-8);
  }
  // Density integrates the cdf.
  const double a = 0.3, b = 1.1;
  double integral = 0.0;
  const int m = 2000;
  for (int k = 0; k < m; ++k) integral += law.density(a + (k + 0.5) * (b - a) / m) * (b - a) / m;
  EXPECT_NEAR(integral, law.cdf(b) - law.cdf(a), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Families, ShockLawTest,
                         ::testing::Values(ShockLaw{ShockFamily::logistic, 1.0},
                                           ShockLaw{ShockFamily::normal, 1.3},
                                           ShockLaw{ShockFamily::laplace, 2.0},
                                           ShockLaw{ShockFamily::exponential, 1.0}));

TEST(ShockLaw, ClosedForms) {
  const ShockLaw logistic{ShockFamily::logistic, 1.0};
  EXPECT_NEAR(logistic.cdf(1.0), 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
  const ShockLaw expo{ShockFamily::exponential, 1.0};
  EXPECT_DOUBLE_EQ(expo.survival(-1.0), 1.0);
  EXPECT_NEAR(expo.survival(2.0), std::exp(-2.0), 1e-15);
  const ShockLaw normal{ShockFamily::normal, 1.0};
  EXPECT_NEAR(normal.cdf(1.959963984540054), 0.975, 1e-12);
}

TEST(Latent, EvaluatesIndexAndRejectsOutOfBounds) {
  const ModelSpec spec = model_from_json(kBase);
  const std::vector<double> s{1.0};
  EXPECT_DOUBLE_EQ(eval_latent(spec, Which::V, 0.25, s, {}, {}, 0.5), 1.0 - 1.0 - 0.25 + 0.5);
  const std::vector<double> bad{2.0};
  EXPECT_THROW(eval_latent(spec, Which::V, 0.25, bad, {}, {}, 0.5), ContractViolation);
  EXPECT_DOUBLE_EQ(strategic_sup(spec, Which::V), 1.0);
  EXPECT_DOUBLE_EQ(strategic_inf(spec, Which::V), 0.0);
}

TEST(Latent, HorizonIsTailQuantile) {
  const ModelSpec spec = model_from_json(kBase);
  const double h = link_horizon(spec, Which::V);
  EXPECT_NEAR(h, 1.0 - 1.0 + spec.shock.upper_quantile(spec.pair_tail_eps), 1e-12);
  EXPECT_NEAR(spec.shock.survival(h - 0.0), spec.pair_tail_eps, 1e-20);
}

TEST(Geometry, BallAndSphere) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-14);
  EXPECT_NEAR(unit_ball_volume(2), M_PI, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * M_PI / 3.0, 1e-13);
  EXPECT_NEAR(unit_sphere_area(1), 2.0, 1e-14);
  EXPECT_NEAR(unit_sphere_area(2), 2.0 * M_PI, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 4.0 * M_PI, 1e-13);
}

TEST(SparsityScale, RadiusSolvesKappa) {
  const ModelSpec spec = model_from_json(kBase);
  const SparsityScale s = SparsityScale::from(spec, 1000);
  // n r^d = kappa
  EXPECT_NEAR(1000.0 * s.r * s.r, spec.kappa, 1e-12);
}
