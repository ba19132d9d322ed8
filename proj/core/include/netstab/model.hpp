#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace netstab {

using NodeId = std::int64_t;

class Net;
struct Primitives;

// Which latent index: V drives periods t >= 1, V0 the initial condition.
enum class Which { V, V0 };

struct LatentParams {
  std::vector<double> beta_s;
  std::vector<double> beta_z;
  double intercept = 0.0;
};

enum class ShockFamily { logistic, normal, laplace, exponential };

struct ShockLaw {
  ShockFamily family = ShockFamily::logistic;
  double scale = 1.0;  // sigma for normal, b for laplace and exponential, unused for logistic

  double cdf(double x) const;
  double survival(double x) const;  // P(zeta > x)
  double quantile(double u) const;
  double density(double x) const;
  // Smallest q with P(zeta > q) <= eps.
  double upper_quantile(double eps) const;
  // The y maximising P(y < zeta <= y + delta).
  double window_peak(double delta) const;
};

enum class SKind {
  none,
  lagged_link,
  common_neighbor_max,
  common_neighbor_count,
  lagged_link_and_common_max,
  lagged_link_and_common_count,
  custom,
};

enum class AttributeFamily { none, bernoulli, uniform };

struct AttributeLaw {
  AttributeFamily family = AttributeFamily::none;
  double p = 0.5;  // bernoulli success probability
};

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Bounds&) const = default;
};

// Everything a user-defined S sees. `period` is the period of the types
// handed in (t-1 for the dynamic model, 0 for the initial condition).
struct SContext {
  int i;
  int j;
  const Net& net;
  const Primitives& prims;
  int period;
  double r;
};

// A user-registered strategic statistic. It must depend on the network only
// through links incident to i or j, and return values inside s_bounds.
struct CustomStatistic {
  std::string name;
  std::size_t dim = 0;
  bool monotone = false;  // nondecreasing in links
  std::function<void(const SContext&, std::span<double>)> fn;
};

void register_custom_statistic(std::shared_ptr<const CustomStatistic> s);
std::shared_ptr<const CustomStatistic> find_custom_statistic(const std::string& name);

struct ModelSpec {
  int d = 1;
  int d_z = 0;
  int T = 0;
  double kappa = 1.0;
  LatentParams v;
  LatentParams v0;
  ShockLaw shock;
  SKind s_kind = SKind::none;
  AttributeLaw attributes;
  std::vector<Bounds> s_bounds;
  // Pairs farther apart than the distance at which even the most favourable
  // index needs a shock above the (1 - pair_tail_eps) quantile never link.
  double pair_tail_eps = 1e-15;
  std::shared_ptr<const CustomStatistic> custom;

  const LatentParams& params(Which w) const { return w == Which::V ? v : v0; }
  std::size_t s_dim() const;
  // V0 responds to S, so the initial condition is a pairwise-stable network.
  bool strategic_initial() const;
  // Best response from the robust network converges monotonically.
  bool monotone_initial() const;
  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Dimension and default bounds of the built-in statistics.
std::size_t s_kind_dim(SKind kind);
std::string to_string(SKind kind);
SKind s_kind_from_string(const std::string& s);

struct SparsityScale {
  std::int64_t n_ref = 1;
  double r = 1.0;

  static SparsityScale from(const ModelSpec& spec, std::int64_t n_ref);
};

// beta_s . s + beta_z . (z_i + z_j) + intercept - dist_scaled + zeta.
// Throws ContractViolation when s lies outside s_bounds.
double eval_latent(const ModelSpec& spec, Which which, double dist_scaled,
                   std::span<const double> s, std::span<const double> z_i,
                   std::span<const double> z_j, double zeta);

struct LatentRange {
  double inf;
  double sup;
};

LatentRange eval_latent_extremes(const ModelSpec& spec, Which which,
                                 double dist_scaled, std::span<const double> z_i,
                                 std::span<const double> z_j, double zeta);

// The s_bounds corner maximising (minimising) beta_s . s.
std::vector<double> sup_corner(const ModelSpec& spec, Which which);
std::vector<double> inf_corner(const ModelSpec& spec, Which which);

// max_s beta_s.s and min_s beta_s.s over the bounds box.
double strategic_sup(const ModelSpec& spec, Which which);
double strategic_inf(const ModelSpec& spec, Which which);

// beta_z . (z_i + z_j) + intercept.
double nonstrategic_part(const ModelSpec& spec, Which which,
                         std::span<const double> z_i, std::span<const double> z_j);

// Range of beta_z . (z_i + z_j) over the attribute support.
std::pair<double, double> attribute_term_range(const ModelSpec& spec, Which which);

// Scaled distance beyond which a pair cannot link under `which`.
double link_horizon(const ModelSpec& spec, Which which);

// Unit-ball volume and unit-sphere surface area in R^d.
double unit_ball_volume(int d);
double unit_sphere_area(int d);

}  // namespace netstab
