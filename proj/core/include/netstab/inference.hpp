#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "netstab/model.hpp"
#include "netstab/moments.hpp"
#include "netstab/net.hpp"

namespace netstab {

struct McReport {
  StatKind kind;
  std::int64_t n = 0;
  int reps = 0;
  std::size_t dim = 1;
  std::vector<double> moment_draws;   // reps x dim: n^{-1/2} sum_i psi_i
  std::vector<double> standardized;   // reps x dim
  std::vector<double> mean;           // per component
  std::vector<double> variance;       // dim x dim sample covariance
  std::vector<bool> zero_variance;
  std::vector<double> ks_stat;        // NaN for zero-variance components
  std::vector<double> ks_pvalue;
};

// Kolmogorov-Smirnov distance between the sample and N(0,1).
double ks_statistic_normal(std::span<const double> sample);
// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
double ks_pvalue(double D, std::size_t m);

McReport mc_clt(const ModelSpec& spec, std::int64_t n, int reps, const StatKind& kind, std::uint64_t seed,
                int threads = 1);

// (theoretical, empirical) quantile pairs of one standardized component.
std::vector<std::pair<double, double>> qq_pairs(const McReport& report, std::size_t component);

struct VarianceDecomposition {
  std::int64_t n = 0;
  int reps = 0;
  double sigma2 = 0.0;           // fixed-n variance of n^{-1/2} Lambda_n
  double sigma2_tilde = 0.0;     // Poissonized variance
  double sigma2_tilde_cv = 0.0;  // same, using Var(N) = n as a control variate
  double alpha = 0.0;            // mean add-one cost at Poissonized sizes
  double alpha_se = 0.0;
  double gap = 0.0;              // |sigma2 - (sigma2_tilde - alpha^2)| / sigma2
  double gap_cv = 0.0;
  double abs_gap_cv = 0.0;       // |sigma2 - (sigma2_tilde_cv - alpha^2)|
  std::vector<double> add_one_costs;
};

// Scalar statistics only.
VarianceDecomposition poisson_variance_decomp(const ModelSpec& spec, std::int64_t n, int reps,
                                              const StatKind& kind, std::uint64_t seed, int threads = 1);

enum class Alternative { two_sided, greater };

struct RandomizationResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool exact = false;
  std::size_t patterns = 0;
};

// Sign-flip test of E[mean_g] = mu0 with the max-t statistic over
// components. Enumerates all 2^G patterns when G <= 14, otherwise draws
// `draws` random patterns.
RandomizationResult randomization_test(const std::vector<std::vector<double>>& network_means,
                                       std::span<const double> mu0, int draws, std::uint64_t seed,
                                       Alternative alt = Alternative::two_sided);

struct TTestResult {
  double t = 0.0;
  double p_value = 1.0;
  int df = 0;
};

TTestResult im_t_test(std::span<const double> network_means, double mu0,
                      Alternative alt = Alternative::two_sided);

// Per-node G_i - H(i, theta) for a connected-subnetwork count G.
std::vector<double> moment_inequality_stat(
    const NetSeries& series, const StatKind& g_kind,
    const std::function<double(std::size_t, std::span<const double>)>& h, std::span<const double> theta);

}  // namespace netstab
