#include "netstab/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/distributions/normal.hpp>

#include "netstab/errors.hpp"

namespace netstab {

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, std::shared_ptr<const CustomStatistic>>& registry() {
  static std::map<std::string, std::shared_ptr<const CustomStatistic>> r;
  return r;
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void register_custom_statistic(std::shared_ptr<const CustomStatistic> s) {
  if (!s || s->name.empty() || !s->fn) {
    throw ConfigError("custom statistic needs a name and a function", "custom_statistic");
  }
  std::lock_guard lock(registry_mutex());
  registry()[s->name] = std::move(s);
}

std::shared_ptr<const CustomStatistic> find_custom_statistic(const std::string& name) {
  std::lock_guard lock(registry_mutex());
  auto it = registry().find(name);
  return it == registry().end() ? nullptr : it->second;
}

double ShockLaw::cdf(double x) const {
  switch (family) {
    case ShockFamily::logistic:
      return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    case ShockFamily::normal:
      return 0.5 * std::erfc(-x / (scale * M_SQRT2));
    case ShockFamily::laplace:
      return x < 0 ? 0.5 * std::exp(x / scale) : 1.0 - 0.5 * std::exp(-x / scale);
    case ShockFamily::exponential:
      return x <= 0 ? 0.0 : -std::expm1(-x / scale);
  }
  return 0.0;
}

double ShockLaw::survival(double x) const {
  switch (family) {
    case ShockFamily::logistic:
      return x >= 0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
    case ShockFamily::normal:
      return 0.5 * std::erfc(x / (scale * M_SQRT2));
    case ShockFamily::laplace:
      return x >= 0 ? 0.5 * std::exp(-x / scale) : 1.0 - 0.5 * std::exp(x / scale);
    case ShockFamily::exponential:
      return x <= 0 ? 1.0 : std::exp(-x / scale);
  }
  return 0.0;
}

double ShockLaw::density(double x) const {
  switch (family) {
    case ShockFamily::logistic: {
      const double e = std::exp(-std::fabs(x));
      return e / ((1.0 + e) * (1.0 + e));
    }
    case ShockFamily::normal:
      return std::exp(-0.5 * x * x / (scale * scale)) / (scale * std::sqrt(2.0 * M_PI));
    case ShockFamily::laplace:
      return 0.5 / scale * std::exp(-std::fabs(x) / scale);
    case ShockFamily::exponential:
      return x < 0 ? 0.0 : std::exp(-x / scale) / scale;
  }
  return 0.0;
}

double ShockLaw::quantile(double u) const {
  switch (family) {
    case ShockFamily::logistic:
      return std::log(u) - std::log1p(-u);
    case ShockFamily::normal:
      return scale * boost::math::quantile(boost::math::normal_distribution<>(), u);
    case ShockFamily::laplace:
      return u < 0.5 ? scale * std::log(2.0 * u) : -scale * std::log(2.0 * (1.0 - u));
    case ShockFamily::exponential:
      return -scale * std::log1p(-u);
  }
  return 0.0;
}

double ShockLaw::upper_quantile(double eps) const {
  switch (family) {
    case ShockFamily::logistic:
      return std::log1p(-eps) - std::log(eps);
    case ShockFamily::normal:
      return scale * boost::math::quantile(
                         boost::math::complement(boost::math::normal_distribution<>(), eps));
    case ShockFamily::laplace:
      return eps < 0.5 ? -scale * std::log(2.0 * eps) : scale * std::log(2.0 * (1.0 - eps));
    case ShockFamily::exponential:
      return eps < 1.0 ? -scale * std::log(eps) : 0.0;
  }
  return 0.0;
}

double ShockLaw::window_peak(double delta) const {
  // Symmetric unimodal laws peak at the centred window; the exponential
  // density is largest at its left edge.
  return family == ShockFamily::exponential ? 0.0 : -0.5 * delta;
}

std::size_t s_kind_dim(SKind kind) {
  switch (kind) {
    case SKind::none: return 0;
    case SKind::lagged_link:
    case SKind::common_neighbor_max:
    case SKind::common_neighbor_count: return 1;
    case SKind::lagged_link_and_common_max:
    case SKind::lagged_link_and_common_count: return 2;
    case SKind::custom: return 0;
  }
  return 0;
}

std::string to_string(SKind kind) {
  switch (kind) {
    case SKind::none: return "none";
    case SKind::lagged_link: return "lagged_link";
    case SKind::common_neighbor_max: return "common_neighbor_max";
    case SKind::common_neighbor_count: return "common_neighbor_count";
    case SKind::lagged_link_and_common_max: return "lagged_link_and_common_max";
    case SKind::lagged_link_and_common_count: return "lagged_link_and_common_count";
    case SKind::custom: return "custom";
  }
  return "none";
}

SKind s_kind_from_string(const std::string& s) {
  for (SKind k : {SKind::none, SKind::lagged_link, SKind::common_neighbor_max,
                  SKind::common_neighbor_count, SKind::lagged_link_and_common_max,
                  SKind::lagged_link_and_common_count, SKind::custom}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown s_kind '" + s + "'", "s_kind");
}

std::size_t ModelSpec::s_dim() const {
  if (s_kind == SKind::custom) return custom ? custom->dim : 0;
  return s_kind_dim(s_kind);
}

bool ModelSpec::strategic_initial() const {
  return std::any_of(v0.beta_s.begin(), v0.beta_s.end(), [](double b) { return b != 0.0; });
}

bool ModelSpec::monotone_initial() const {
  const bool nonneg =
      std::all_of(v0.beta_s.begin(), v0.beta_s.end(), [](double b) { return b >= 0.0; });
  if (!nonneg) return false;
  if (s_kind == SKind::custom) return custom && custom->monotone;
  return true;
}

void ModelSpec::validate() const {
  if (d < 1) throw ConfigError("d must be at least 1", "d");
  if (d_z < 0) throw ConfigError("d_z must be nonnegative", "d_z");
  if (T < 0) throw ConfigError("T must be nonnegative", "T");
  if (!(kappa > 0.0) || !finite(kappa)) throw ConfigError("kappa must be positive", "kappa");
  if (!(shock.scale > 0.0) || !finite(shock.scale)) {
    throw ConfigError("shock scale must be positive", "shock_law");
  }
  if (!(pair_tail_eps > 0.0 && pair_tail_eps < 0.5)) {
    throw ConfigError("pair_tail_eps must lie in (0, 0.5)", "pair_tail_eps");
  }
  if (s_kind == SKind::custom) {
    if (!custom) throw ConfigError("custom s_kind needs a registered statistic", "custom_statistic");
    if (custom->dim == 0) throw ConfigError("custom statistic has dimension 0", "custom_statistic");
  }
  if ((attributes.family == AttributeFamily::none) != (d_z == 0)) {
    throw ConfigError("attribute_law none goes with d_z = 0 and only then", "attribute_law");
  }
  if (attributes.family == AttributeFamily::bernoulli &&
      !(attributes.p >= 0.0 && attributes.p <= 1.0)) {
    throw ConfigError("bernoulli p must lie in [0,1]", "attribute_law");
  }
  const std::size_t k = s_dim();
  if (s_bounds.size() != k) throw ConfigError("s_bounds must have one entry per S component", "s_bounds");
  for (const auto& b : s_bounds) {
    if (!finite(b.lo) || !finite(b.hi) || b.lo > b.hi) {
      throw ConfigError("s_bounds entries must be finite with lo <= hi", "s_bounds");
    }
  }
  if (s_kind != SKind::custom) {
    // Built-in components are link indicators or counts starting at 0.
    for (const auto& b : s_bounds) {
      if (b.lo > 0.0 || b.hi < 1.0) {
        throw ConfigError("built-in S components need bounds covering [0,1]", "s_bounds");
      }
    }
  }
  for (auto [w, name] : {std::pair{Which::V, "v"}, std::pair{Which::V0, "v0"}}) {
    const LatentParams& p = params(w);
    if (p.beta_s.size() != k) {
      throw ConfigError(std::string(name) + ".beta_s must have one entry per S component",
                        std::string(name) + ".beta_s");
    }
    if (p.beta_z.size() != static_cast<std::size_t>(d_z)) {
      throw ConfigError(std::string(name) + ".beta_z must have d_z entries",
                        std::string(name) + ".beta_z");
    }
    for (double b : p.beta_s) {
      if (!finite(b)) throw ConfigError("non-finite coefficient", std::string(name) + ".beta_s");
    }
    for (double b : p.beta_z) {
      if (!finite(b)) throw ConfigError("non-finite coefficient", std::string(name) + ".beta_z");
    }
    if (!finite(p.intercept)) {
      throw ConfigError("non-finite intercept", std::string(name) + ".intercept");
    }
  }
}

SparsityScale SparsityScale::from(const ModelSpec& spec, std::int64_t n_ref) {
  if (n_ref < 1) throw ContractViolation("scale reference size must be positive");
  return {n_ref, std::pow(spec.kappa / static_cast<double>(n_ref), 1.0 / spec.d)};
}

double nonstrategic_part(const ModelSpec& spec, Which which, std::span<const double> z_i,
                         std::span<const double> z_j) {
  const LatentParams& p = spec.params(which);
  double acc = p.intercept;
  for (std::size_t k = 0; k < p.beta_z.size(); ++k) acc += p.beta_z[k] * (z_i[k] + z_j[k]);
  return acc;
}

double eval_latent(const ModelSpec& spec, Which which, double dist_scaled,
                   std::span<const double> s, std::span<const double> z_i,
                   std::span<const double> z_j, double zeta) {
  const LatentParams& p = spec.params(which);
  if (s.size() != p.beta_s.size()) throw ContractViolation("S has the wrong dimension");
  if (z_i.size() != p.beta_z.size() || z_j.size() != p.beta_z.size()) {
    throw ContractViolation("attribute vector has the wrong dimension");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < spec.s_bounds[k].lo || s[k] > spec.s_bounds[k].hi) {
      throw ContractViolation("S component " + std::to_string(k) + " outside s_bounds");
    }
    acc += p.beta_s[k] * s[k];
  }
  return acc + nonstrategic_part(spec, which, z_i, z_j) - dist_scaled + zeta;
}

std::vector<double> sup_corner(const ModelSpec& spec, Which which) {
  const LatentParams& p = spec.params(which);
  std::vector<double> s(p.beta_s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = p.beta_s[k] >= 0 ? spec.s_bounds[k].hi : spec.s_bounds[k].lo;
  }
  return s;
}

std::vector<double> inf_corner(const ModelSpec& spec, Which which) {
  const LatentParams& p = spec.params(which);
  std::vector<double> s(p.beta_s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = p.beta_s[k] >= 0 ? spec.s_bounds[k].lo : spec.s_bounds[k].hi;
  }
  return s;
}

double strategic_sup(const ModelSpec& spec, Which which) {
  const LatentParams& p = spec.params(which);
  double acc = 0.0;
  for (std::size_t k = 0; k < p.beta_s.size(); ++k) {
    acc += p.beta_s[k] * (p.beta_s[k] >= 0 ? spec.s_bounds[k].hi : spec.s_bounds[k].lo);
  }
  return acc;
}

double strategic_inf(const ModelSpec& spec, Which which) {
  const LatentParams& p = spec.params(which);
  double acc = 0.0;
  for (std::size_t k = 0; k < p.beta_s.size(); ++k) {
    acc += p.beta_s[k] * (p.beta_s[k] >= 0 ? spec.s_bounds[k].lo : spec.s_bounds[k].hi);
  }
  return acc;
}

LatentRange eval_latent_extremes(const ModelSpec& spec, Which which, double dist_scaled,
                                 std::span<const double> z_i, std::span<const double> z_j,
                                 double zeta) {
  const double base = nonstrategic_part(spec, which, z_i, z_j) - dist_scaled + zeta;
  return {strategic_inf(spec, which) + base, strategic_sup(spec, which) + base};
}

std::pair<double, double> attribute_term_range(const ModelSpec& spec, Which which) {
  const LatentParams& p = spec.params(which);
  double lo = 0.0, hi = 0.0;
  for (double b : p.beta_z) {
    // Both attribute laws live on [0,1].
    lo += 2.0 * std::min(b, 0.0);
    hi += 2.0 * std::max(b, 0.0);
  }
  return {lo, hi};
}

double link_horizon(const ModelSpec& spec, Which which) {
  const double c = strategic_sup(spec, which) + attribute_term_range(spec, which).second +
                   spec.params(which).intercept;
  return c + spec.shock.upper_quantile(spec.pair_tail_eps);
}

double unit_ball_volume(int d) {
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double unit_sphere_area(int d) {
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace netstab
