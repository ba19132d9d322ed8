#include "netstab/formation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "netstab/errors.hpp"
#include "netstab/rng.hpp"
#include "netstab/strategic.hpp"

namespace netstab {

namespace {

constexpr std::size_t kEnumerationPairCap = 20;  // 2^20 candidate subnetworks
constexpr std::size_t kOracleNodeCap = 6;

// Non-strategic part of the index, always associated the same way so that
// corner comparisons and full evaluations round identically.
double pair_base(const ModelSpec& spec, Which which, const Primitives& prims, int a, int b, int t,
                 double dist) {
  return nonstrategic_part(spec, which, prims.z(static_cast<std::size_t>(a), t),
                           prims.z(static_cast<std::size_t>(b), t)) -
         dist + prims.zeta(static_cast<std::size_t>(a), static_cast<std::size_t>(b), t);
}

double index_with_s(const ModelSpec& spec, Which which, const Primitives& prims, int a, int b, int t,
                    double dist, std::span<const double> s) {
  const auto& p = spec.params(which);
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) acc += p.beta_s[k] * s[k];
  return acc + pair_base(spec, which, prims, a, b, t, dist);
}

// Whether (a, b) links under `which` when S is evaluated on `net`.
bool links_given(const ModelSpec& spec, Which which, const Primitives& prims, double r, int a, int b,
                 int t, double dist, double horizon, const Net& net, std::vector<double>& sbuf) {
  if (dist > horizon) return false;
  const int type_period = which == Which::V0 ? 0 : t - 1;
  eval_S_into(spec, a, b, TypeView{prims, type_period, r}, net, sbuf);
  return index_with_s(spec, which, prims, a, b, t, dist, sbuf) > 0.0;
}

void brute_force_pairs(const Primitives& prims, double r, double h, std::vector<CandidatePair>& out) {
  const int n = static_cast<int>(prims.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double dist = prims.distance(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) / r;
      if (dist <= h) out.push_back({a, b, dist});
    }
  }
}

}  // namespace

PairSet candidate_pairs(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale) {
  PairSet ps;
  ps.horizon_v0 = link_horizon(spec, Which::V0);
  ps.horizon_v = spec.T > 0 ? link_horizon(spec, Which::V) : -std::numeric_limits<double>::infinity();
  const double h = std::max(ps.horizon_v0, ps.horizon_v);
  const std::size_t n = prims.size();
  if (n < 2 || h < 0.0) return ps;
  const double radius = h * scale.r;
  const double cells_d = std::floor(1.0 / radius);
  const double total_cells = std::pow(cells_d, spec.d);
  if (cells_d < 3.0 || total_cells > 4.0 * static_cast<double>(n) + 64.0 || total_cells > 1e7) {
    brute_force_pairs(prims, scale.r, h, ps.pairs);
    return ps;
  }
  const long m = static_cast<long>(cells_d);
  const int d = spec.d;
  auto cell_of = [&](std::size_t k, std::vector<long>& c) {
    const auto x = prims.x(k);
    for (int q = 0; q < d; ++q) c[static_cast<std::size_t>(q)] = std::min(m - 1, static_cast<long>(x[q] * static_cast<double>(m)));
  };
  auto linear = [&](const std::vector<long>& c) {
    long idx = 0;
    for (int q = d - 1; q >= 0; --q) idx = idx * m + c[static_cast<std::size_t>(q)];
    return idx;
  };
  std::unordered_map<long, std::vector<int>> cells;
  std::vector<long> c(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < n; ++k) {
    cell_of(k, c);
    cells[linear(c)].push_back(static_cast<int>(k));
  }
  long offsets = 1;
  for (int q = 0; q < d; ++q) offsets *= 3;
  std::vector<long> nb(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < n; ++k) {
    cell_of(k, c);
    for (long o = 0; o < offsets; ++o) {
      long rem = o;
      bool inside = true;
      for (int q = 0; q < d; ++q) {
        nb[static_cast<std::size_t>(q)] = c[static_cast<std::size_t>(q)] + (rem % 3) - 1;
        rem /= 3;
        if (nb[static_cast<std::size_t>(q)] < 0 || nb[static_cast<std::size_t>(q)] >= m) inside = false;
      }
      if (!inside) continue;
      auto it = cells.find(linear(nb));
      if (it == cells.end()) continue;
      for (int b : it->second) {
        if (b <= static_cast<int>(k)) continue;
        const double dist = prims.distance(k, static_cast<std::size_t>(b)) / scale.r;
        if (dist <= h) ps.pairs.push_back({static_cast<int>(k), b, dist});
      }
    }
  }
  std::sort(ps.pairs.begin(), ps.pairs.end(), [](const CandidatePair& x, const CandidatePair& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  return ps;
}

Net form_dyadic_initial(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                        const PairSet* pairs) {
  PairSet local;
  if (!pairs) {
    local = candidate_pairs(spec, prims, scale);
    pairs = &local;
  }
  Net A(prims.size());
  for (const auto& p : pairs->pairs) {
    if (p.dist > pairs->horizon_v0) continue;
    if (0.0 + pair_base(spec, Which::V0, prims, p.a, p.b, 0, p.dist) > 0.0) A.add(p.a, p.b);
  }
  return A;
}

RobustnessDecomposition classify_robustness(const ModelSpec& spec, const Primitives& prims,
                                            const SparsityScale& scale, const PairSet* pairs) {
  PairSet local;
  if (!pairs) {
    local = candidate_pairs(spec, prims, scale);
    pairs = &local;
  }
  const std::size_t n = prims.size();
  RobustnessDecomposition out{Net(n), Net(n), Net(n)};
  const double sup = strategic_sup(spec, Which::V0);
  const double inf = strategic_inf(spec, Which::V0);
  for (const auto& p : pairs->pairs) {
    if (p.dist > pairs->horizon_v0) continue;
    const double base = pair_base(spec, Which::V0, prims, p.a, p.b, 0, p.dist);
    if (sup + base > 0.0) {
      out.M0.add(p.a, p.b);
      if (inf + base > 0.0) {
        out.robust.add(p.a, p.b);
      } else {
        out.D.add(p.a, p.b);
      }
    }
  }
  return out;
}

std::vector<Net> sup_networks(const ModelSpec& spec, const Primitives& prims,
                              const SparsityScale& scale, const PairSet* pairs) {
  PairSet local;
  if (!pairs) {
    local = candidate_pairs(spec, prims, scale);
    pairs = &local;
  }
  std::vector<Net> M;
  M.push_back(classify_robustness(spec, prims, scale, pairs).M0);
  const double sup = strategic_sup(spec, Which::V);
  for (int t = 1; t <= spec.T; ++t) {
    Net net(prims.size());
    for (const auto& p : pairs->pairs) {
      if (p.dist > pairs->horizon_v) continue;
      if (sup + pair_base(spec, Which::V, prims, p.a, p.b, t, p.dist) > 0.0) net.add(p.a, p.b);
    }
    M.push_back(std::move(net));
  }
  return M;
}

std::vector<int> d_components(const Net& D) {
  const int n = static_cast<int>(D.size());
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    label[static_cast<std::size_t>(s)] = s;
    stack.assign(1, s);
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int b : D.neighbors(a)) {
        if (label[static_cast<std::size_t>(b)] < 0) {
          label[static_cast<std::size_t>(b)] = s;
          stack.push_back(b);
        }
      }
    }
  }
  return label;
}

std::vector<std::vector<int>> strategic_neighborhoods(const RobustnessDecomposition& decomp) {
  const std::size_t n = decomp.D.size();
  const auto label = d_components(decomp.D);
  std::unordered_map<int, std::vector<int>> members;
  for (std::size_t k = 0; k < n; ++k) members[label[k]].push_back(static_cast<int>(k));
  std::unordered_map<int, std::vector<int>> plus;
  for (auto& [lab, mem] : members) {
    std::vector<int> set = mem;
    for (int k : mem) {
      const auto& nb = decomp.robust.neighbors(k);
      set.insert(set.end(), nb.begin(), nb.end());
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    plus.emplace(lab, std::move(set));
  }
  std::vector<std::vector<int>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = plus.at(label[k]);
  return out;
}

namespace {

struct Component {
  std::vector<std::pair<int, int>> pairs;  // lexicographic
  std::vector<double> dist;
};

std::vector<Component> nonrobust_components(const Net& D, const Primitives& prims, double r) {
  const auto label = d_components(D);
  std::unordered_map<int, std::size_t> slot;
  std::vector<Component> comps;
  for (auto [a, b] : D.edges()) {
    const int lab = label[static_cast<std::size_t>(a)];
    auto [it, fresh] = slot.emplace(lab, comps.size());
    if (fresh) comps.emplace_back();
    auto& c = comps[it->second];
    c.pairs.emplace_back(a, b);
    c.dist.push_back(prims.distance(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) / r);
  }
  return comps;
}

}  // namespace

Net solve_pairwise_stable(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                          SolveStats* stats, const PairSet* pairs) {
  PairSet local;
  if (!pairs) {
    local = candidate_pairs(spec, prims, scale);
    pairs = &local;
  }
  SolveStats st;
  if (!spec.strategic_initial()) {
    if (stats) *stats = st;
    return form_dyadic_initial(spec, prims, scale, pairs);
  }
  auto decomp = classify_robustness(spec, prims, scale, pairs);
  Net A = decomp.robust;
  const auto comps = nonrobust_components(decomp.D, prims, scale.r);
  const bool monotone = spec.monotone_initial();
  const double h0 = pairs->horizon_v0;
  std::vector<double> sbuf(spec.s_dim());
  st.components = comps.size();
  for (const auto& comp : comps) {
    const std::size_t m = comp.pairs.size();
    st.nonrobust_pairs += m;
    st.max_component_pairs = std::max(st.max_component_pairs, m);
    if (monotone) {
      const std::size_t cap = m + 1;
      std::size_t sweeps = 0;
      bool changed = true;
      while (changed) {
        if (sweeps == cap) {
          throw NonConvergence("best response did not settle within " + std::to_string(cap) + " sweeps");
        }
        ++sweeps;
        changed = false;
        for (std::size_t q = 0; q < m; ++q) {
          const auto [a, b] = comp.pairs[q];
          const bool on = links_given(spec, Which::V0, prims, scale.r, a, b, 0, comp.dist[q], h0, A, sbuf);
          if (on != A.has(a, b)) {
            A.set(a, b, on);
            changed = true;
            if (!on) st.removed_link = true;
          }
        }
      }
      st.max_sweeps = std::max(st.max_sweeps, sweeps);
    } else {
      st.enumerated = true;
      if (m > kEnumerationPairCap) {
        throw NeighborhoodTooLarge("strategic neighbourhood has " + std::to_string(m) +
                                   " non-robust pairs; enumeration is capped at " +
                                   std::to_string(kEnumerationPairCap));
      }
      bool found = false;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m) && !found; ++mask) {
        for (std::size_t q = 0; q < m; ++q) {
          A.set(comp.pairs[q].first, comp.pairs[q].second, (mask >> q) & 1U);
        }
        found = true;
        for (std::size_t q = 0; q < m && found; ++q) {
          const auto [a, b] = comp.pairs[q];
          const bool on = links_given(spec, Which::V0, prims, scale.r, a, b, 0, comp.dist[q], h0, A, sbuf);
          found = on == static_cast<bool>((mask >> q) & 1U);
        }
      }
      if (!found) throw NoEquilibrium("a strategic neighbourhood has no pairwise-stable subnetwork");
    }
  }
  if (stats) *stats = st;
  return A;
}

std::size_t stability_violations(const ModelSpec& spec, const Primitives& prims,
                                 const SparsityScale& scale, const Net& A0) {
  const double h0 = link_horizon(spec, Which::V0);
  std::vector<double> sbuf(spec.s_dim());
  std::size_t bad = 0;
  const int n = static_cast<int>(prims.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double dist = prims.distance(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) / scale.r;
      const bool want = links_given(spec, Which::V0, prims, scale.r, a, b, 0, dist, h0, A0, sbuf);
      if (want != A0.has(a, b)) ++bad;
    }
  }
  return bad;
}

std::vector<Net> enumerate_pairwise_stable(const ModelSpec& spec, const Primitives& prims,
                                           const SparsityScale& scale) {
  const std::size_t n = prims.size();
  if (n > kOracleNodeCap) {
    throw TooLarge("enumeration supports at most " + std::to_string(kOracleNodeCap) + " nodes");
  }
  std::vector<std::pair<int, int>> all;
  for (int a = 0; a < static_cast<int>(n); ++a) {
    for (int b = a + 1; b < static_cast<int>(n); ++b) all.emplace_back(a, b);
  }
  std::vector<Net> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << all.size()); ++mask) {
    Net A(n);
    for (std::size_t q = 0; q < all.size(); ++q) {
      if ((mask >> q) & 1U) A.add(all[q].first, all[q].second);
    }
    if (stability_violations(spec, prims, scale, A) == 0) out.push_back(std::move(A));
  }
  return out;
}

DecentralizationResult check_decentralization(const ModelSpec& spec, const Primitives& prims,
                                              const SparsityScale& scale, const Net& A0) {
  DecentralizationResult res;
  const auto decomp = classify_robustness(spec, prims, scale);
  const auto label = d_components(decomp.D);
  const auto plus = strategic_neighborhoods(decomp);
  const std::size_t n = prims.size();
  res.nodes = n;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cp = plus[i];
    const Primitives sub = prims.subset(cp);
    const Net solved = solve_pairwise_stable(spec, sub, scale);
    const Net restricted = A0.induced(cp);
    if (!(solved == restricted)) ++res.full_mismatches;
    bool incident_ok = true;
    for (std::size_t p = 0; p < cp.size() && incident_ok; ++p) {
      if (label[static_cast<std::size_t>(cp[p])] != label[i]) continue;
      for (std::size_t q = 0; q < cp.size(); ++q) {
        if (q == p) continue;
        if (solved.has(static_cast<int>(p), static_cast<int>(q)) !=
            restricted.has(static_cast<int>(p), static_cast<int>(q))) {
          incident_ok = false;
          break;
        }
      }
    }
    // Links from C_i to nodes outside C_i^+ must be absent in A0.
    for (std::size_t p = 0; p < cp.size() && incident_ok; ++p) {
      if (label[static_cast<std::size_t>(cp[p])] != label[i]) continue;
      for (int b : A0.neighbors(cp[p])) {
        if (!std::binary_search(cp.begin(), cp.end(), b)) {
          incident_ok = false;
          break;
        }
      }
    }
    if (!incident_ok) ++res.incident_mismatches;
  }
  return res;
}

NetSeries roll_forward(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale, Net A0,
                       const PairSet* pairs) {
  PairSet local;
  if (!pairs) {
    local = candidate_pairs(spec, prims, scale);
    pairs = &local;
  }
  if (A0.size() != prims.size()) throw ContractViolation("initial network does not match primitives");
  NetSeries out;
  out.ids = prims.ids;
  out.nets.reserve(static_cast<std::size_t>(spec.T + 1));
  out.nets.push_back(std::move(A0));
  const double sup = strategic_sup(spec, Which::V);
  std::vector<double> sbuf(spec.s_dim());
  for (int t = 1; t <= spec.T; ++t) {
    const Net& prev = out.nets.back();
    Net A(prims.size());
    for (const auto& p : pairs->pairs) {
      if (p.dist > pairs->horizon_v) continue;
      const double base = pair_base(spec, Which::V, prims, p.a, p.b, t, p.dist);
      if (sup + base <= 0.0) continue;
      eval_S_into(spec, p.a, p.b, TypeView{prims, t - 1, scale.r}, prev, sbuf);
      double acc = 0.0;
      for (std::size_t k = 0; k < sbuf.size(); ++k) acc += spec.v.beta_s[k] * sbuf[k];
      if (acc + base > 0.0) A.add(p.a, p.b);
    }
    out.nets.push_back(std::move(A));
  }
  return out;
}

NetSeries run_pipeline(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale) {
  const PairSet pairs = candidate_pairs(spec, prims, scale);
  Net A0 = spec.strategic_initial() ? solve_pairwise_stable(spec, prims, scale, nullptr, &pairs)
                                    : form_dyadic_initial(spec, prims, scale, &pairs);
  return roll_forward(spec, prims, scale, std::move(A0), &pairs);
}

std::int64_t poissonized_size(std::int64_t n, std::uint64_t seed) {
  RngStream rng(seed, Stream::poisson_count);
  return static_cast<std::int64_t>(rng.poisson(static_cast<double>(n)));
}

Simulation simulate(const ModelSpec& spec, std::int64_t n, std::int64_t scale_from, bool poissonized,
                    std::uint64_t seed) {
  if (n < 1) throw ContractViolation("simulate needs n >= 1");
  spec.validate();
  const std::int64_t count = poissonized ? poissonized_size(n, seed) : n;
  Simulation sim;
  sim.scale = SparsityScale::from(spec, scale_from);
  const auto ids = iota_ids(static_cast<std::size_t>(count));
  sim.prims = sample_primitives(spec, ids, seed);
  sim.series = run_pipeline(spec, sim.prims, sim.scale);
  return sim;
}

}  // namespace netstab
