#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "netstab/model.hpp"
#include "netstab/tail.hpp"

namespace netstab {

// Positions are in scaled (r^{-1}) coordinates throughout.
double p1_kernel(const ModelSpec& spec, std::span<const double> x, std::span<const double> z,
                 std::span<const double> x_prime, std::span<const double> z_prime);
double p1_at(const ModelSpec& spec, double dist, std::span<const double> z, std::span<const double> z_prime);

double pbar_kernel(const ModelSpec& spec, std::span<const double> x, std::span<const double> x_prime);
double pbar_at(const ModelSpec& spec, double dist);

enum class Intensity { D, M, H };

struct BranchingConfig {
  Intensity kind = Intensity::D;
  int K = 1;  // depth for M, locality for H
  const ModelSpec* spec = nullptr;
  double slack_r = 0.0;  // the (1 + r) factor
  std::int64_t population_cap = 1'000'000;
  std::uint64_t seed = 0;
  // Poisson(mu) offspring whatever the types.
  std::optional<double> single_type_mean;
  // Keep only offspring inside [0, side]^d.
  std::optional<double> cube_side;
  int bins = 256;

  void validate() const;
};

struct ParticleType {
  std::vector<double> x;
  std::vector<double> z;
};

struct BranchingSample {
  ParticleType root;
  std::int64_t total_size = 1;
  bool truncated = false;
  int generations = 1;
};

// Expected offspring count of a parent: kappa * fbar * (1 + r) times the
// kernel integral over positions and Phi*.
double kernel_mass(const BranchingConfig& config, Intensity which, std::span<const double> z);

// Replication `replication` of the configured process from `root`.
BranchingSample simulate_branching(const BranchingConfig& config, const ParticleType& root,
                                   std::uint64_t replication);

// Replication k starts at roots[k]. Throws SupercriticalSuspected when more
// than half of them hit the population cap.
std::vector<BranchingSample> run_branching(const BranchingConfig& config,
                                           std::span<const ParticleType> roots, int threads = 1);

// Draw from Phi*, the marginal law of Z_i0.
std::vector<double> sample_phi_star(const ModelSpec& spec, std::uint64_t seed, std::uint64_t index);

// Mixed norm of h_D by quadrature.
double h_D_norm(const ModelSpec& spec);
// h_D(x, z); independent of x.
double h_D_at(const ModelSpec& spec, std::span<const double> z);

struct NormEstimate {
  double value = 0.0;
  double se = 0.0;
};

// Monte Carlo version: `outer` draws of z, each with `inner` fresh draws of z'.
NormEstimate h_D_norm_mc(const ModelSpec& spec, std::uint64_t seed, int outer = 1000, int inner = 1000);

struct SurvivalComparison {
  std::vector<int> thresholds;
  std::vector<double> network;    // P(size > w)
  std::vector<double> branching;
  std::vector<double> tolerance;
  std::size_t violations = 0;
  double network_mean = 0.0;
  double branching_mean = 0.0;
  std::size_t network_samples = 0;
  std::size_t branching_samples = 0;
};

struct DominationReport {
  SurvivalComparison component;     // |C_i| against |X^D|
  SurvivalComparison neighborhood;  // |N_M(i,K)| against |X^M(K)|
  int K = 1;
  std::size_t networks = 0;
};

// Survival at thresholds 1..20 with a one-sided tolerance of
// z_{1-0.05/20} standard errors per threshold.
DominationReport compare_domination(const ModelSpec& spec, std::int64_t n, int reps, int K,
                                    std::uint64_t seed, int threads = 1);

SurvivalComparison compare_survival(std::span<const double> network, std::span<const double> branching,
                                    int max_threshold = 20, double alpha = 0.05);

}  // namespace netstab
