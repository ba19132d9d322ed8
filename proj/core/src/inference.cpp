#include "netstab/inference.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

#include "netstab/errors.hpp"
#include "netstab/formation.hpp"
#include "netstab/parallel.hpp"
#include "netstab/rng.hpp"

namespace netstab {

namespace {

constexpr std::size_t kMaxEnumerated = 14;

double sample_mean(std::span<const double> v) {
  return pairwise_sum(v) / static_cast<double>(v.size());
}

double sample_var(std::span<const double> v) {
  const double m = sample_mean(v);
  std::vector<double> sq(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) sq[k] = (v[k] - m) * (v[k] - m);
  return pairwise_sum(sq) / static_cast<double>(v.size() - 1);
}

double sample_cov(std::span<const double> a, std::span<const double> b) {
  const double ma = sample_mean(a), mb = sample_mean(b);
  std::vector<double> pr(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) pr[k] = (a[k] - ma) * (b[k] - mb);
  return pairwise_sum(pr) / static_cast<double>(a.size() - 1);
}

// Largest t-statistic over components of the sign-flipped centred means.
double max_t(const std::vector<std::vector<double>>& y, const std::vector<int>& sign, Alternative alt) {
  const std::size_t G = y.size(), dim = y[0].size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < dim; ++c) {
    double m = 0.0;
    for (std::size_t g = 0; g < G; ++g) m += sign[g] * y[g][c];
    m /= static_cast<double>(G);
    double v = 0.0;
    for (std::size_t g = 0; g < G; ++g) {
      const double e = sign[g] * y[g][c] - m;
      v += e * e;
    }
    v /= static_cast<double>(G - 1);
    double t;
    if (v > 0.0) {
      t = m / std::sqrt(v / static_cast<double>(G));
    } else {
      t = m == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), m);
    }
    best = std::max(best, alt == Alternative::two_sided ? std::abs(t) : t);
  }
  return best;
}

bool at_least(double t, double obs) {
  if (std::isinf(obs)) return t >= obs;
  return t >= obs - 1e-12 * std::max(1.0, std::abs(obs));
}

}  // namespace

double ks_statistic_normal(std::span<const double> sample) {
  if (sample.empty()) throw InsufficientData("KS needs a sample");
  std::vector<double> v(sample.begin(), sample.end());
  std::sort(v.begin(), v.end());
  const boost::math::normal nd;
  const double m = static_cast<double>(v.size());
  double D = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double F = boost::math::cdf(nd, v[k]);
    D = std::max({D, static_cast<double>(k + 1) / m - F, F - static_cast<double>(k) / m});
  }
  return D;
}

double ks_pvalue(double D, std::size_t m) {
  const double sm = std::sqrt(static_cast<double>(m));
  const double lambda = (sm + 0.12 + 0.11 / sm) * D;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

McReport mc_clt(const ModelSpec& spec, std::int64_t n, int reps, const StatKind& kind, std::uint64_t seed,
                int threads) {
  if (reps < 2) throw ContractViolation("mc_clt needs at least two replications");
  spec.validate();
  McReport rep;
  rep.kind = kind;
  rep.n = n;
  rep.reps = reps;
  rep.dim = kind.dim();
  const std::size_t dim = rep.dim, R = static_cast<std::size_t>(reps);
  rep.moment_draws.assign(R * dim, 0.0);
  const double root_n = std::sqrt(static_cast<double>(n));
  parallel_for(R, threads, [&](std::size_t r) {
    const Simulation sim = simulate(spec, n, n, false, derive_seed(seed, Stream::replication, r));
    const auto tot = aggregate(compute_stat(kind, spec, sim.prims, sim.scale, sim.series));
    for (std::size_t c = 0; c < dim; ++c) rep.moment_draws[r * dim + c] = tot[c] / root_n;
  });
  std::vector<std::vector<double>> cols(dim, std::vector<double>(R));
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < dim; ++c) cols[c][r] = rep.moment_draws[r * dim + c];
  }
  rep.variance.assign(dim * dim, 0.0);
  for (std::size_t a = 0; a < dim; ++a) {
    rep.mean.push_back(sample_mean(cols[a]));
    for (std::size_t b = 0; b < dim; ++b) rep.variance[a * dim + b] = sample_cov(cols[a], cols[b]);
  }
  rep.standardized.assign(R * dim, 0.0);
  for (std::size_t c = 0; c < dim; ++c) {
    const double v = rep.variance[c * dim + c];
    const double scale = std::sqrt(v);
    const bool zero = !(v > 1e-24 * std::max(1.0, rep.mean[c] * rep.mean[c]));
    rep.zero_variance.push_back(zero);
    std::vector<double> z(R);
    for (std::size_t r = 0; r < R; ++r) {
      z[r] = zero ? 0.0 : (cols[c][r] - rep.mean[c]) / scale;
      rep.standardized[r * dim + c] = z[r];
    }
    if (zero) {
      rep.ks_stat.push_back(std::numeric_limits<double>::quiet_NaN());
      rep.ks_pvalue.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      const double D = ks_statistic_normal(z);
      rep.ks_stat.push_back(D);
      rep.ks_pvalue.push_back(ks_pvalue(D, R));
    }
  }
  return rep;
}

std::vector<std::pair<double, double>> qq_pairs(const McReport& report, std::size_t component) {
  if (component >= report.dim) throw ContractViolation("component out of range");
  std::vector<double> z;
  for (int r = 0; r < report.reps; ++r) {
    z.push_back(report.standardized[static_cast<std::size_t>(r) * report.dim + component]);
  }
  std::sort(z.begin(), z.end());
  const boost::math::normal nd;
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double p = (static_cast<double>(k) + 0.5) / static_cast<double>(z.size());
    out.emplace_back(boost::math::quantile(nd, p), z[k]);
  }
  return out;
}

VarianceDecomposition poisson_variance_decomp(const ModelSpec& spec, std::int64_t n, int reps,
                                              const StatKind& kind, std::uint64_t seed, int threads) {
  if (reps < 2) throw ContractViolation("variance decomposition needs at least two replications");
  if (kind.dim() != 1) throw ContractViolation("variance decomposition needs a scalar statistic");
  spec.validate();
  const SparsityScale scale = SparsityScale::from(spec, n);
  const auto R = static_cast<std::size_t>(reps);
  std::vector<double> fixed(R), pois(R), counts(R), xi(R);
  parallel_for(R, threads, [&](std::size_t r) {
    const std::uint64_t s_fixed = derive_seed(seed, Stream::replication, 2 * r);
    const std::uint64_t s_pois = derive_seed(seed, Stream::replication, 2 * r + 1);
    const Simulation sim = simulate(spec, n, n, false, s_fixed);
    fixed[r] = aggregate(compute_stat(kind, spec, sim.prims, sim.scale, sim.series))[0];
    const std::int64_t N = poissonized_size(n, s_pois);
    const Primitives ext = sample_primitives(spec, iota_ids(static_cast<std::size_t>(N + 1)), s_pois);
    std::vector<int> first(static_cast<std::size_t>(N));
    for (std::int64_t k = 0; k < N; ++k) first[static_cast<std::size_t>(k)] = static_cast<int>(k);
    const Primitives base = ext.subset(first);
    const NodeStatVector small = compute_stat(kind, spec, base, scale, run_pipeline(spec, base, scale));
    const NodeStatVector big = compute_stat(kind, spec, ext, scale, run_pipeline(spec, ext, scale));
    pois[r] = aggregate(small)[0];
    counts[r] = static_cast<double>(N);
    double acc = big.values[static_cast<std::size_t>(N)];
    for (std::int64_t i = 0; i < N; ++i) {
      acc += big.values[static_cast<std::size_t>(i)] - small.values[static_cast<std::size_t>(i)];
    }
    xi[r] = acc;
  });
  VarianceDecomposition out;
  out.n = n;
  out.reps = reps;
  const double nd = static_cast<double>(n);
  out.sigma2 = sample_var(fixed) / nd;
  out.sigma2_tilde = sample_var(pois) / nd;
  const double beta = sample_cov(pois, counts) / sample_var(counts);
  std::vector<double> resid(R);
  for (std::size_t r = 0; r < R; ++r) resid[r] = pois[r] - beta * (counts[r] - nd);
  out.sigma2_tilde_cv = (sample_var(resid) + beta * beta * nd) / nd;
  out.alpha = sample_mean(xi);
  out.alpha_se = std::sqrt(sample_var(xi) / static_cast<double>(R));
  out.add_one_costs = xi;
  const double a2 = out.alpha * out.alpha;
  out.abs_gap_cv = std::abs(out.sigma2 - (out.sigma2_tilde_cv - a2));
  const double denom = out.sigma2;
  out.gap = denom > 0.0 ? std::abs(out.sigma2 - (out.sigma2_tilde - a2)) / denom
                        : std::numeric_limits<double>::quiet_NaN();
  out.gap_cv = denom > 0.0 ? out.abs_gap_cv / denom : std::numeric_limits<double>::quiet_NaN();
  return out;
}

RandomizationResult randomization_test(const std::vector<std::vector<double>>& network_means,
                                       std::span<const double> mu0, int draws, std::uint64_t seed,
                                       Alternative alt) {
  const std::size_t G = network_means.size();
  if (G < 2) throw TooFewNetworks("randomization test needs at least two networks");
  std::vector<std::vector<double>> y(G);
  for (std::size_t g = 0; g < G; ++g) {
    if (network_means[g].size() != mu0.size() || mu0.empty()) {
      throw ContractViolation("network mean dimension does not match mu0");
    }
    for (std::size_t c = 0; c < mu0.size(); ++c) y[g].push_back(network_means[g][c] - mu0[c]);
  }
  RandomizationResult res;
  std::vector<int> sign(G, 1);
  res.statistic = max_t(y, sign, alt);
  std::size_t hits = 0;
  if (G <= kMaxEnumerated) {
    res.exact = true;
    res.patterns = std::size_t{1} << G;
    for (std::size_t mask = 0; mask < res.patterns; ++mask) {
      for (std::size_t g = 0; g < G; ++g) sign[g] = (mask >> g) & 1 ? -1 : 1;
      if (at_least(max_t(y, sign, alt), res.statistic)) ++hits;
    }
    res.p_value = static_cast<double>(hits) / static_cast<double>(res.patterns);
  } else {
    if (draws < 1000) throw ContractViolation("randomization test needs at least 1000 draws");
    res.patterns = static_cast<std::size_t>(draws);
    for (int k = 0; k < draws; ++k) {
      RngStream rng(seed, Stream::sign_flip, static_cast<std::uint64_t>(k));
      for (std::size_t g = 0; g < G; ++g) sign[g] = rng.below(2) ? -1 : 1;
      if (at_least(max_t(y, sign, alt), res.statistic)) ++hits;
    }
    res.p_value = (1.0 + static_cast<double>(hits)) / (1.0 + static_cast<double>(draws));
  }
  return res;
}

TTestResult im_t_test(std::span<const double> network_means, double mu0, Alternative alt) {
  const std::size_t G = network_means.size();
  if (G < 2) throw TooFewNetworks("t-test needs at least two networks");
  std::vector<double> y(network_means.begin(), network_means.end());
  for (auto& v : y) v -= mu0;
  TTestResult res;
  res.df = static_cast<int>(G) - 1;
  const double m = sample_mean(y), v = sample_var(y);
  if (v > 0.0) {
    res.t = m / std::sqrt(v / static_cast<double>(G));
  } else {
    res.t = m == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), m);
  }
  if (std::isinf(res.t)) {
    res.p_value = alt == Alternative::greater && res.t < 0 ? 1.0 : 0.0;
    return res;
  }
  const boost::math::students_t dist(static_cast<double>(res.df));
  res.p_value = alt == Alternative::two_sided ? 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(res.t)))
                                              : boost::math::cdf(boost::math::complement(dist, res.t));
  return res;
}

std::vector<double> moment_inequality_stat(
    const NetSeries& series, const StatKind& g_kind,
    const std::function<double(std::size_t, std::span<const double>)>& h, std::span<const double> theta) {
  switch (g_kind.family) {
    case StatFamily::degree:
    case StatFamily::dyad:
    case StatFamily::triangle:
    case StatFamily::kstar: break;
    default: throw ContractViolation("moment inequalities need a subnetwork count");
  }
  const NodeStatVector g = count_stat(series, g_kind);
  std::vector<double> out(g.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g.values[i] - h(i, theta);
  return out;
}

}  // namespace netstab
