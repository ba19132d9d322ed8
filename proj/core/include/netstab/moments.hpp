#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "netstab/formation.hpp"
#include "netstab/model.hpp"
#include "netstab/net.hpp"
#include "netstab/primitives.hpp"

namespace netstab {

enum class StatFamily { degree, dyad, triangle, kstar, kneigh_size, graham, asf, constant };

// Which dyads enter the conditional likelihood.
//   isolated_switch:          A_ij,1 + A_ij,2 = 1, equal common-neighbour counts
//                            in periods 1 and 2, and neither i nor j has another
//                            link in period 1. The swap (0,1) <-> (1,0) then leaves
//                            every other dyad's regressors unchanged, so the odds
//                            depend on theta only.
//   switch_only:             A_ij,1 + A_ij,2 = 1
//   switch_with_equal_common: switch and equal common-neighbour counts in
//                            periods 1 and 2.
enum class StableDyadRule { isolated_switch, switch_only, switch_with_equal_common };

struct StatKind {
  StatFamily family = StatFamily::degree;
  int t = 0;                     // period for the count statistics
  int k = 2;                     // k-star order
  int K = 1;                     // kneigh_size radius
  std::vector<double> theta;     // graham
  StableDyadRule rule = StableDyadRule::isolated_switch;
  std::vector<double> s_target;  // asf: (s, z, z')
  double c = 1.0;                // constant

  // Declared locality radius.
  int locality() const;
  std::size_t dim() const;
  std::string label() const;
};

// Text form: degree[:t] dyad[:t] triangle[:t] kstar:k[:t] kneigh:K[:t]
// graham[:th1,th2][:stable|switch|equal_common] asf:v1,v2,... constant[:c]. A missing t
// means the last period.
StatKind parse_stat_kind(const std::string& text, const ModelSpec& spec);

struct NodeStatVector {
  StatKind kind;
  std::size_t dim = 1;
  std::vector<double> values;  // node-major

  std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
  bool operator==(const NodeStatVector& o) const { return dim == o.dim && values == o.values; }
};

// Column sums with a fixed pairwise reduction tree.
std::vector<double> aggregate(const NodeStatVector& psi);
double pairwise_sum(std::span<const double> v);

NodeStatVector count_stat(const NetSeries& series, const StatKind& kind);

// Dynamic K-neighbourhood of local node i, ascending local indices.
std::vector<int> dynamic_kneigh(const NetSeries& series, int i, int K);

NodeStatVector graham_score(const NetSeries& series, std::span<const double> theta,
                            StableDyadRule rule = StableDyadRule::isolated_switch);

struct GrahamObjective {
  double value = 0.0;               // sum over ordered pairs of l_ij
  std::vector<double> gradient;     // 2
  std::vector<double> hessian;      // 2x2 row-major
  std::size_t informative = 0;      // unordered dyads with I_ij = 1
};

GrahamObjective graham_objective(const NetSeries& series, std::span<const double> theta,
                                 StableDyadRule rule = StableDyadRule::isolated_switch);

struct GrahamFit {
  std::vector<double> theta;
  double log_likelihood = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  std::size_t informative = 0;
};

GrahamFit graham_fit(const NetSeries& series, StableDyadRule rule = StableDyadRule::isolated_switch);

NodeStatVector asf_stats(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                         const NetSeries& series, std::span<const double> s_target);

struct AsfBounds {
  double lower;
  double upper;
};

AsfBounds asf_bounds(const NodeStatVector& stats);

NodeStatVector compute_stat(const StatKind& kind, const ModelSpec& spec, const Primitives& prims,
                            const SparsityScale& scale, const NetSeries& series);

// Xi_n from two pipeline runs: on prims_extended (n+1 nodes) and on its
// first n nodes.
std::vector<double> add_one_cost(const ModelSpec& spec, const Primitives& prims_extended,
                                 const SparsityScale& scale, const StatKind& kind);

}  // namespace netstab
