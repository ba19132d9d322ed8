#pragma once

#include <cstdint>
#include <vector>

#include "netstab/model.hpp"
#include "netstab/net.hpp"
#include "netstab/primitives.hpp"

namespace netstab {

struct CandidatePair {
  int a;
  int b;
  double dist;  // scaled distance
};

// Pairs close enough to link under V or V0, in lexicographic order of local
// indices. Everything else is linked in no period.
struct PairSet {
  std::vector<CandidatePair> pairs;
  double horizon_v = 0.0;
  double horizon_v0 = 0.0;
};

PairSet candidate_pairs(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale);

struct RobustnessDecomposition {
  Net M0;      // sup_s V0 > 0
  Net robust;  // inf_s V0 > 0
  Net D;       // M0 and not robust
};

Net form_dyadic_initial(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                        const PairSet* pairs = nullptr);

RobustnessDecomposition classify_robustness(const ModelSpec& spec, const Primitives& prims,
                                            const SparsityScale& scale,
                                            const PairSet* pairs = nullptr);

// M_t for t = 0..T: pairs whose index is positive at the most favourable s.
// M_0 uses V0 and equals the M0 of classify_robustness.
std::vector<Net> sup_networks(const ModelSpec& spec, const Primitives& prims,
                              const SparsityScale& scale, const PairSet* pairs = nullptr);

// Component label (smallest member) of each node in D.
std::vector<int> d_components(const Net& D);

// C_i^+ for every node as ascending local indices.
std::vector<std::vector<int>> strategic_neighborhoods(const RobustnessDecomposition& decomp);

struct SolveStats {
  std::size_t components = 0;        // D-components with at least one pair
  std::size_t nonrobust_pairs = 0;
  std::size_t max_sweeps = 0;        // sweeps including the final quiet one
  std::size_t max_component_pairs = 0;
  bool removed_link = false;         // a sweep ever switched a link off
  bool enumerated = false;           // non-monotone fallback used
};

// Pairwise-stable initial network. Each strategic neighbourhood is solved on
// its own: best response from the robust network, sweeping non-robust pairs
// in ascending (min id, max id) order until a sweep changes nothing. Configs
// that are not monotone enumerate each neighbourhood instead.
Net solve_pairwise_stable(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                          SolveStats* stats = nullptr, const PairSet* pairs = nullptr);

// All pairwise-stable networks by exhaustive search; at most 6 nodes.
std::vector<Net> enumerate_pairwise_stable(const ModelSpec& spec, const Primitives& prims,
                                           const SparsityScale& scale);

// Number of pairs whose stability condition fails on `A0`.
std::size_t stability_violations(const ModelSpec& spec, const Primitives& prims,
                                 const SparsityScale& scale, const Net& A0);

struct DecentralizationResult {
  std::size_t nodes = 0;
  // Nodes whose re-solve on C_i^+ disagrees on some pair touching C_i.
  std::size_t incident_mismatches = 0;
  // Nodes whose re-solve disagrees anywhere on the C_i^+ subnetwork.
  std::size_t full_mismatches = 0;
};

DecentralizationResult check_decentralization(const ModelSpec& spec, const Primitives& prims,
                                              const SparsityScale& scale, const Net& A0);

NetSeries roll_forward(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                       Net A0, const PairSet* pairs = nullptr);

// Initial condition (dyadic when V0 ignores S) followed by roll_forward.
NetSeries run_pipeline(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale);

struct Simulation {
  Primitives prims;
  NetSeries series;
  SparsityScale scale;
};

// Node count n, or N ~ Poisson(n) drawn from its own stream. Ids are 1..count
// so the first min(N, n) nodes share primitives with the fixed-n draw.
std::int64_t poissonized_size(std::int64_t n, std::uint64_t seed);
Simulation simulate(const ModelSpec& spec, std::int64_t n, std::int64_t scale_from, bool poissonized,
                    std::uint64_t seed);

}  // namespace netstab
