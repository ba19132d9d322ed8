#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "netstab/formation.hpp"
#include "netstab/moments.hpp"
#include "netstab/tail.hpp"

namespace netstab {

struct MNetworks {
  std::vector<Net> M;  // periods 0..T
  Net M_union;
};

MNetworks build_M_networks(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale);

// Everything construct_Ji needs, computed once per realization.
struct StabContext {
  MNetworks m;
  std::vector<std::vector<int>> c_plus;  // strategic neighbourhoods, local indices

  static StabContext build(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale);
};

// J_i as ascending local indices.
std::vector<int> construct_Ji(const StabContext& ctx, int i, int K);
std::vector<int> construct_Ji(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                              int i, int K);

// Largest scaled distance from i to a member of J.
double radius(const Primitives& prims, const SparsityScale& scale, int i, std::span<const int> J);

struct VerifyResult {
  std::vector<double> psi_full;
  std::vector<double> psi_regrown;
  bool equal = false;
};

// Regrows the pipeline on the primitives of J (ascending local indices,
// containing i) and compares psi_i with the full-network value.
VerifyResult verify_on_set(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                           int i, std::span<const int> J, const StatKind& kind,
                           const NodeStatVector& full);
VerifyResult verify_on_set(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                           int i, std::span<const int> J, const StatKind& kind);

VerifyResult verify_stabilization(const ModelSpec& spec, const Primitives& prims,
                                  const SparsityScale& scale, int i, int K, const StatKind& kind);

struct StabRecord {
  NodeId node = 0;
  std::vector<NodeId> J;
  double radius = 0.0;
  bool checked = false;
  bool verified = false;
};

struct StabReport {
  std::vector<StabRecord> records;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::optional<TailFit> size_tail;
  std::optional<TailFit> radius_tail;
};

// J_i, radius and (optionally) exactness of every statistic in `kinds` for
// the listed local nodes. J_i uses the largest declared locality.
StabReport stabilization_report(const ModelSpec& spec, const Primitives& prims,
                                const SparsityScale& scale, std::span<const StatKind> kinds,
                                std::span<const int> nodes, bool verify, int threads = 1);

// CSV "node,J_size,radius,verified".
void write_stab_csv(std::ostream& os, const StabReport& report);

struct SparsityRow {
  std::int64_t n = 0;
  std::vector<double> mean_degree;  // per period
  std::vector<double> se;
};

struct SparsityReport {
  std::vector<SparsityRow> rows;
  // Limit of the period-t mean degree for pure-distance indices with
  // uniform positions, when it applies.
  std::vector<std::optional<double>> limit;
  // Least-squares slope of the period-0 mean degree against log n.
  double trend_slope = 0.0;
  double trend_se = 0.0;
  bool bounded() const { return trend_slope <= 2.0 * trend_se; }
};

std::optional<double> pure_distance_limit(const ModelSpec& spec, Which which);

SparsityReport sparsity_check(const ModelSpec& spec, std::span<const std::int64_t> n_grid, int reps,
                              std::uint64_t seed, int threads = 1);

}  // namespace netstab
