#include "netstab/branching.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <deque>
#include <limits>

#include "netstab/errors.hpp"
#include "netstab/formation.hpp"
#include "netstab/parallel.hpp"
#include "netstab/primitives.hpp"
#include "netstab/rng.hpp"

namespace netstab {

namespace {

constexpr double kFbar = 1.0;  // uniform density on the unit cube

double euclid(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

// P(y < zeta <= y + delta), written with survival functions so that it stays
// accurate far in the upper tail.
double shock_window(const ShockLaw& law, double y, double delta) {
  return std::max(0.0, law.survival(y) - law.survival(y + delta));
}

struct ZRule {
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;
};

// Exact (bernoulli) or Gauss-Legendre (uniform) rule for Phi*.
ZRule phi_star_rule(const ModelSpec& spec) {
  ZRule rule;
  const int dz = spec.d_z;
  if (dz == 0 || spec.attributes.family == AttributeFamily::none) {
    rule.nodes.push_back(std::vector<double>(static_cast<std::size_t>(dz), 0.0));
    rule.weights.push_back(1.0);
    return rule;
  }
  std::vector<double> pts, wts;
  if (spec.attributes.family == AttributeFamily::bernoulli) {
    pts = {0.0, 1.0};
    wts = {1.0 - spec.attributes.p, spec.attributes.p};
  } else {
    if (dz > 3) throw QuadratureFailure("uniform attribute quadrature supports d_z <= 3");
    using G = boost::math::quadrature::gauss<double, 16>;
    for (std::size_t k = 0; k < G::abscissa().size(); ++k) {
      const double a = G::abscissa()[k], w = G::weights()[k];
      pts.push_back(0.5 * (1.0 - a));
      wts.push_back(0.5 * w);
      if (a != 0.0) {
        pts.push_back(0.5 * (1.0 + a));
        wts.push_back(0.5 * w);
      }
    }
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(dz), 0);
  for (;;) {
    std::vector<double> z(static_cast<std::size_t>(dz));
    double w = 1.0;
    for (int c = 0; c < dz; ++c) {
      z[static_cast<std::size_t>(c)] = pts[idx[static_cast<std::size_t>(c)]];
      w *= wts[idx[static_cast<std::size_t>(c)]];
    }
    rule.nodes.push_back(std::move(z));
    rule.weights.push_back(w);
    int c = 0;
    for (; c < dz; ++c) {
      if (++idx[static_cast<std::size_t>(c)] < pts.size()) break;
      idx[static_cast<std::size_t>(c)] = 0;
    }
    if (c == dz) break;
  }
  return rule;
}

void draw_phi_star(const ModelSpec& spec, RngStream& rng, std::vector<double>& z) {
  z.resize(static_cast<std::size_t>(spec.d_z));
  for (auto& v : z) {
    const double u = rng.uniform();
    switch (spec.attributes.family) {
      case AttributeFamily::bernoulli: v = u < spec.attributes.p ? 1.0 : 0.0; break;
      case AttributeFamily::uniform: v = u; break;
      case AttributeFamily::none: v = 0.0; break;
    }
  }
}

// Integral of f over [0, inf) split at the given interior points.
template <class F>
double radial_integral(F f, std::vector<double> breaks) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [](double b) { return !(b > 0.0); }),
               breaks.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = 0.0, lo = 0.0;
  breaks.push_back(std::numeric_limits<double>::infinity());
  for (double hi : breaks) {
    double err = 0.0, l1 = 0.0;
    const double v = GK::integrate(f, lo, hi, 20, 1e-12, &err, &l1);
    if (!std::isfinite(v) || err > 1e-9 * std::max(1.0, l1)) {
      throw QuadratureFailure("radial integral did not converge");
    }
    total += v;
    lo = hi;
  }
  return total;
}

double pbar_threshold(const ModelSpec& spec, Which w) {
  return strategic_sup(spec, w) + attribute_term_range(spec, w).second + spec.params(w).intercept;
}

// Radial envelope: bins over [0, R] with an upper bound of the kernel in
// each bin, for exact thinning.
class Envelope {
 public:
  Envelope(const BranchingConfig& cfg, Intensity which) : spec_(*cfg.spec), which_(which) {
    const int d = spec_.d;
    factor_ = spec_.kappa * kFbar * (1.0 + cfg.slack_r);
    if (which == Intensity::D) {
      s_sup_ = strategic_sup(spec_, Which::V0);
      delta_ = s_sup_ - strategic_inf(spec_, Which::V0);
      const auto [alo, ahi] = attribute_term_range(spec_, Which::V0);
      c_lo_ = alo + spec_.v0.intercept;
      c_hi_ = ahi + spec_.v0.intercept;
      radius_ = link_horizon(spec_, Which::V0);
      if (delta_ <= 0.0) radius_ = 0.0;
    } else {
      radius_ = std::max(link_horizon(spec_, Which::V0), spec_.T > 0 ? link_horizon(spec_, Which::V) : 0.0);
    }
    if (!(radius_ > 0.0)) return;
    const int bins = std::max(1, cfg.bins);
    const double vd = unit_ball_volume(d);
    double cum = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double r0 = radius_ * b / bins, r1 = radius_ * (b + 1) / bins;
      const double bound = std::min(1.0, bin_bound(r0, r1) * (1.0 + 1e-12));
      const double vol = vd * (std::pow(r1, d) - std::pow(r0, d));
      lo_.push_back(r0);
      hi_.push_back(r1);
      bound_.push_back(bound);
      cum += bound * vol;
      cum_.push_back(cum);
    }
    mass_ = factor_ * cum;
  }

  double kernel(double dist, std::span<const double> z, std::span<const double> z2) const {
    return which_ == Intensity::D ? p1_at(spec_, dist, z, z2) : pbar_at(spec_, dist);
  }

  // Offspring of a parent, appended to `out`.
  void offspring(RngStream& rng, const ParticleType& parent, const std::optional<double>& cube,
                 std::vector<ParticleType>& out) const {
    if (mass_ <= 0.0) return;
    const auto count = rng.poisson(mass_);
    const int d = spec_.d;
    std::vector<double> dir(static_cast<std::size_t>(d));
    for (std::uint64_t c = 0; c < count; ++c) {
      const double u = rng.uniform() * cum_.back();
      const auto b = static_cast<std::size_t>(
          std::min<std::ptrdiff_t>(std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin(),
                                   static_cast<std::ptrdiff_t>(cum_.size()) - 1));
      const double a0 = std::pow(lo_[b], d), a1 = std::pow(hi_[b], d);
      const double rho = std::pow(a0 + rng.uniform() * (a1 - a0), 1.0 / d);
      if (d == 1) {
        dir[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
      } else {
        double norm = 0.0;
        do {
          norm = 0.0;
          for (auto& v : dir) {
            v = rng.normal();
            norm += v * v;
          }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        for (auto& v : dir) v /= norm;
      }
      ParticleType child;
      child.x.resize(static_cast<std::size_t>(d));
      for (int k = 0; k < d; ++k) {
        child.x[static_cast<std::size_t>(k)] = parent.x[static_cast<std::size_t>(k)] + rho * dir[static_cast<std::size_t>(k)];
      }
      draw_phi_star(spec_, rng, child.z);
      const double accept = kernel(rho, parent.z, child.z) / bound_[b];
      if (!(rng.uniform() < accept)) continue;
      if (cube) {
        const bool inside = std::all_of(child.x.begin(), child.x.end(),
                                        [&](double v) { return v >= 0.0 && v <= *cube; });
        if (!inside) continue;
      }
      out.push_back(std::move(child));
    }
  }

 private:
  double bin_bound(double r0, double r1) const {
    if (which_ == Intensity::M) return pbar_at(spec_, r0);
    // P(y < zeta <= y + delta) is unimodal in y.
    const double ylo = r0 - c_hi_ - s_sup_, yhi = r1 - c_lo_ - s_sup_;
    const double y = std::clamp(spec_.shock.window_peak(delta_), ylo, yhi);
    return shock_window(spec_.shock, y, delta_);
  }

  const ModelSpec& spec_;
  Intensity which_;
  double factor_ = 0.0;
  double s_sup_ = 0.0, delta_ = 0.0, c_lo_ = 0.0, c_hi_ = 0.0;
  double radius_ = 0.0;
  double mass_ = 0.0;
  std::vector<double> lo_, hi_, bound_, cum_;
};

class Runner {
 public:
  Runner(const BranchingConfig& cfg, const Envelope& d_env, const Envelope& m_env, std::uint64_t replication)
      : cfg_(cfg), d_env_(d_env), m_env_(m_env), rng_(cfg.seed, Stream::branching, replication) {}

  void children(const ParticleType& parent, Intensity which, std::vector<ParticleType>& out) {
    out.clear();
    if (cfg_.single_type_mean) {
      const auto c = rng_.poisson(*cfg_.single_type_mean);
      for (std::uint64_t k = 0; k < c; ++k) out.push_back(parent);
      return;
    }
    (which == Intensity::D ? d_env_ : m_env_).offspring(rng_, parent, cfg_.cube_side, out);
  }

  // Breadth-first growth; visit(particle) returns false to stop. max_depth < 0
  // means unlimited. Returns false when stopped early.
  template <class Visit>
  bool grow(const ParticleType& root, Intensity which, int max_depth, int& generations, Visit&& visit) {
    std::deque<std::pair<ParticleType, int>> queue;
    queue.emplace_back(root, 0);
    generations = 1;
    std::vector<ParticleType> kids;
    while (!queue.empty()) {
      auto [p, depth] = std::move(queue.front());
      queue.pop_front();
      generations = std::max(generations, depth + 1);
      if (!visit(p)) return false;
      if (max_depth >= 0 && depth >= max_depth) continue;
      children(p, which, kids);
      for (auto& k : kids) queue.emplace_back(std::move(k), depth + 1);
      if (queue.size() > static_cast<std::size_t>(cfg_.population_cap)) return false;
    }
    return true;
  }

 private:
  const BranchingConfig& cfg_;
  const Envelope& d_env_;
  const Envelope& m_env_;
  RngStream rng_;
};

BranchingSample run_one(const BranchingConfig& cfg, const Envelope& d_env, const Envelope& m_env,
                        const ParticleType& root, std::uint64_t replication) {
  Runner run(cfg, d_env, m_env, replication);
  BranchingSample out;
  out.root = root;
  const std::int64_t cap = cfg.population_cap;
  std::int64_t size = 0;
  bool complete = true;
  if (cfg.kind == Intensity::D || cfg.kind == Intensity::M) {
    const int depth = cfg.kind == Intensity::D ? -1 : cfg.K;
    complete = run.grow(root, cfg.kind, depth, out.generations, [&](const ParticleType&) {
      return ++size < cap;
    });
    if (size >= cap) complete = false;
  } else {
    const int depth = 2 * cfg.K + cfg.spec->T + 1;
    std::vector<ParticleType> fixed;
    complete = run.grow(root, Intensity::M, depth, out.generations, [&](const ParticleType& p) {
      fixed.push_back(p);
      return static_cast<std::int64_t>(fixed.size()) < cap;
    });
    std::vector<ParticleType> kids;
    for (std::size_t k = 0; complete && k < fixed.size(); ++k) {
      int gens = 0;
      complete = run.grow(fixed[k], Intensity::D, -1, gens, [&](const ParticleType& g) {
        run.children(g, Intensity::M, kids);
        size += 1 + static_cast<std::int64_t>(kids.size());
        return size < cap;
      });
    }
    if (size >= cap) complete = false;
  }
  out.truncated = !complete;
  out.total_size = complete ? size : cap;
  return out;
}

}  // namespace

double p1_at(const ModelSpec& spec, double dist, std::span<const double> z, std::span<const double> z_prime) {
  const double s_sup = strategic_sup(spec, Which::V0);
  const double delta = s_sup - strategic_inf(spec, Which::V0);
  if (delta <= 0.0) return 0.0;
  const double c = nonstrategic_part(spec, Which::V0, z, z_prime);
  return shock_window(spec.shock, dist - c - s_sup, delta);
}

double p1_kernel(const ModelSpec& spec, std::span<const double> x, std::span<const double> z,
                 std::span<const double> x_prime, std::span<const double> z_prime) {
  return p1_at(spec, euclid(x, x_prime), z, z_prime);
}

double pbar_at(const ModelSpec& spec, double dist) {
  const double s0 = spec.shock.survival(dist - pbar_threshold(spec, Which::V0));
  if (spec.T == 0) return s0;
  const double s1 = spec.shock.survival(dist - pbar_threshold(spec, Which::V));
  return -std::expm1(std::log1p(-s0) + spec.T * std::log1p(-s1));
}

double pbar_kernel(const ModelSpec& spec, std::span<const double> x, std::span<const double> x_prime) {
  return pbar_at(spec, euclid(x, x_prime));
}

void BranchingConfig::validate() const {
  if (!spec) throw ConfigError("branching config needs a model", "spec");
  if (population_cap < 1) throw ConfigError("population_cap must be >= 1", "population_cap");
  if (!(slack_r >= 0.0)) throw ConfigError("r must be >= 0", "r");
  if (K < 1) throw ConfigError("K must be >= 1", "K");
  if (bins < 1) throw ConfigError("bins must be >= 1", "bins");
  if (single_type_mean && !(*single_type_mean >= 0.0)) {
    throw ConfigError("offspring mean must be >= 0", "single_type_mean");
  }
}

double kernel_mass(const BranchingConfig& config, Intensity which, std::span<const double> z) {
  config.validate();
  if (config.single_type_mean) return *config.single_type_mean;
  const ModelSpec& spec = *config.spec;
  const double factor = spec.kappa * kFbar * (1.0 + config.slack_r) * unit_sphere_area(spec.d);
  const int d = spec.d;
  if (which == Intensity::M) {
    const double v = radial_integral(
        [&](double rho) { return std::pow(rho, d - 1) * pbar_at(spec, rho); },
        {pbar_threshold(spec, Which::V0), pbar_threshold(spec, Which::V)});
    return factor * v;
  }
  const ZRule rule = phi_star_rule(spec);
  std::vector<double> breaks;
  const double s_sup = strategic_sup(spec, Which::V0), s_inf = strategic_inf(spec, Which::V0);
  if (spec.attributes.family != AttributeFamily::uniform) {
    for (const auto& z2 : rule.nodes) {
      const double c = nonstrategic_part(spec, Which::V0, z, z2);
      breaks.push_back(c + s_sup);
      breaks.push_back(c + s_inf);
    }
  }
  const double v = radial_integral(
      [&](double rho) {
        double e = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) e += rule.weights[k] * p1_at(spec, rho, z, rule.nodes[k]);
        return std::pow(rho, d - 1) * e;
      },
      breaks);
  return factor * v;
}

BranchingSample simulate_branching(const BranchingConfig& config, const ParticleType& root,
                                   std::uint64_t replication) {
  config.validate();
  const Envelope d_env(config, Intensity::D), m_env(config, Intensity::M);
  return run_one(config, d_env, m_env, root, replication);
}

std::vector<BranchingSample> run_branching(const BranchingConfig& config,
                                           std::span<const ParticleType> roots, int threads) {
  config.validate();
  const Envelope d_env(config, Intensity::D), m_env(config, Intensity::M);
  std::vector<BranchingSample> out(roots.size());
  parallel_for(roots.size(), threads, [&](std::size_t k) {
    out[k] = run_one(config, d_env, m_env, roots[k], k);
  });
  const auto truncated = std::count_if(out.begin(), out.end(), [](const auto& s) { return s.truncated; });
  if (!out.empty() && 2 * static_cast<std::size_t>(truncated) > out.size()) {
    throw SupercriticalSuspected(std::to_string(truncated) + " of " + std::to_string(out.size()) +
                                 " replications hit the population cap");
  }
  return out;
}

std::vector<double> sample_phi_star(const ModelSpec& spec, std::uint64_t seed, std::uint64_t index) {
  RngStream rng(seed, Stream::monte_carlo, index);
  std::vector<double> z;
  draw_phi_star(spec, rng, z);
  return z;
}

double h_D_at(const ModelSpec& spec, std::span<const double> z) {
  const double s_sup = strategic_sup(spec, Which::V0), s_inf = strategic_inf(spec, Which::V0);
  if (s_sup - s_inf <= 0.0) return 0.0;
  const ZRule rule = phi_star_rule(spec);
  std::vector<double> breaks;
  if (spec.attributes.family != AttributeFamily::uniform) {
    for (const auto& z2 : rule.nodes) {
      const double c = nonstrategic_part(spec, Which::V0, z, z2);
      breaks.push_back(c + s_sup);
      breaks.push_back(c + s_inf);
    }
  }
  const int d = spec.d;
  const double v = radial_integral(
      [&](double rho) {
        double e = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          const double p = p1_at(spec, rho, z, rule.nodes[k]);
          e += rule.weights[k] * p * p;
        }
        return std::pow(rho, d - 1) * std::sqrt(e);
      },
      breaks);
  return spec.kappa * kFbar * unit_sphere_area(d) * v;
}

double h_D_norm(const ModelSpec& spec) {
  const ZRule rule = phi_star_rule(spec);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double h = h_D_at(spec, rule.nodes[k]);
    acc += rule.weights[k] * h * h;
  }
  return std::sqrt(acc);
}

NormEstimate h_D_norm_mc(const ModelSpec& spec, std::uint64_t seed, int outer, int inner) {
  if (outer < 2 || inner < 1) throw ContractViolation("Monte Carlo norm needs outer >= 2 and inner >= 1");
  const double s_sup = strategic_sup(spec, Which::V0), s_inf = strategic_inf(spec, Which::V0);
  if (s_sup - s_inf <= 0.0) return {0.0, 0.0};
  const double R = link_horizon(spec, Which::V0);
  if (!(R > 0.0)) return {0.0, 0.0};
  constexpr int kPanels = 16;
  using GL = boost::math::quadrature::gauss<double, 8>;
  const int d = spec.d;
  const double factor = spec.kappa * kFbar * unit_sphere_area(d);
  std::vector<double> h2(static_cast<std::size_t>(outer));
  std::vector<double> z;
  std::vector<std::vector<double>> zs(static_cast<std::size_t>(inner));
  for (int k = 0; k < outer; ++k) {
    RngStream rng(seed, Stream::monte_carlo, static_cast<std::uint64_t>(k));
    draw_phi_star(spec, rng, z);
    for (auto& z2 : zs) draw_phi_star(spec, rng, z2);
    double integral = 0.0;
    for (int p = 0; p < kPanels; ++p) {
      const double a = R * p / kPanels, b = R * (p + 1) / kPanels;
      integral += GL::integrate(
          [&](double rho) {
            double e = 0.0;
            for (const auto& z2 : zs) {
              const double v = p1_at(spec, rho, z, z2);
              e += v * v;
            }
            return std::pow(rho, d - 1) * std::sqrt(e / inner);
          },
          a, b);
    }
    const double h = factor * integral;
    h2[static_cast<std::size_t>(k)] = h * h;
  }
  double m = 0.0;
  for (double v : h2) m += v;
  m /= outer;
  double var = 0.0;
  for (double v : h2) var += (v - m) * (v - m);
  var /= (outer - 1);
  NormEstimate est;
  est.value = std::sqrt(m);
  est.se = est.value > 0.0 ? std::sqrt(var / outer) / (2.0 * est.value) : 0.0;
  return est;
}

SurvivalComparison compare_survival(std::span<const double> network, std::span<const double> branching,
                                    int max_threshold, double alpha) {
  if (network.empty() || branching.empty()) throw InsufficientData("survival comparison needs samples");
  SurvivalComparison out;
  out.network_samples = network.size();
  out.branching_samples = branching.size();
  const boost::math::normal nd;
  const double zq = boost::math::quantile(nd, 1.0 - alpha / max_threshold);
  auto frac_above = [](std::span<const double> v, double w) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), [&](double x) { return x > w; })) /
           static_cast<double>(v.size());
  };
  for (int w = 1; w <= max_threshold; ++w) {
    const double sn = frac_above(network, w), sb = frac_above(branching, w);
    const double se = std::sqrt(sn * (1 - sn) / static_cast<double>(network.size()) +
                                sb * (1 - sb) / static_cast<double>(branching.size()));
    out.thresholds.push_back(w);
    out.network.push_back(sn);
    out.branching.push_back(sb);
    out.tolerance.push_back(zq * se);
    if (sn > sb + zq * se) ++out.violations;
  }
  for (double v : network) out.network_mean += v;
  for (double v : branching) out.branching_mean += v;
  out.network_mean /= static_cast<double>(network.size());
  out.branching_mean /= static_cast<double>(branching.size());
  return out;
}

DominationReport compare_domination(const ModelSpec& spec, std::int64_t n, int reps, int K,
                                    std::uint64_t seed, int threads) {
  if (n < 1 || reps < 1) throw ContractViolation("domination check needs n >= 1 and reps >= 1");
  spec.validate();
  const SparsityScale scale = SparsityScale::from(spec, n);
  const auto networks = static_cast<std::size_t>((reps + n - 1) / n);
  std::vector<std::vector<double>> comp(networks), neigh(networks);
  std::vector<std::vector<ParticleType>> roots(networks);
  const auto ids = iota_ids(static_cast<std::size_t>(n));
  parallel_for(networks, threads, [&](std::size_t g) {
    const Primitives prims = sample_primitives(spec, ids, derive_seed(seed, Stream::instance, g));
    const PairSet pairs = candidate_pairs(spec, prims, scale);
    const auto decomp = classify_robustness(spec, prims, scale, &pairs);
    const auto labels = d_components(decomp.D);
    std::vector<double> comp_size(static_cast<std::size_t>(n), 0.0);
    for (int l : labels) comp_size[static_cast<std::size_t>(l)] += 1.0;
    const auto M = sup_networks(spec, prims, scale, &pairs);
    Net M_union(prims.size());
    for (const Net& net : M) {
      for (const auto& [a, b] : net.edges()) M_union.add(a, b);
    }
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(n),
                                                   static_cast<std::size_t>(reps) - g * static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < take; ++i) {
      comp[g].push_back(comp_size[static_cast<std::size_t>(labels[i])]);
      neigh[g].push_back(static_cast<double>(k_neighborhood(M_union, static_cast<int>(i), K).size()));
      ParticleType root;
      for (double v : prims.x(i)) root.x.push_back(v / scale.r);
      const auto z0 = prims.z(i, 0);
      root.z.assign(z0.begin(), z0.end());
      roots[g].push_back(std::move(root));
    }
  });
  std::vector<double> net_c, net_m;
  std::vector<ParticleType> all_roots;
  for (std::size_t g = 0; g < networks; ++g) {
    net_c.insert(net_c.end(), comp[g].begin(), comp[g].end());
    net_m.insert(net_m.end(), neigh[g].begin(), neigh[g].end());
    all_roots.insert(all_roots.end(), roots[g].begin(), roots[g].end());
  }
  BranchingConfig cfg;
  cfg.spec = &spec;
  cfg.slack_r = scale.r;
  cfg.K = K;
  cfg.kind = Intensity::D;
  cfg.seed = derive_seed(seed, Stream::branching, 0);
  std::vector<double> br_c, br_m;
  for (const auto& s : run_branching(cfg, all_roots, threads)) br_c.push_back(static_cast<double>(s.total_size));
  cfg.kind = Intensity::M;
  cfg.seed = derive_seed(seed, Stream::branching, 1);
  for (const auto& s : run_branching(cfg, all_roots, threads)) br_m.push_back(static_cast<double>(s.total_size));
  DominationReport rep;
  rep.K = K;
  rep.networks = networks;
  rep.component = compare_survival(net_c, br_c);
  rep.neighborhood = compare_survival(net_m, br_m);
  return rep;
}

}  // namespace netstab
