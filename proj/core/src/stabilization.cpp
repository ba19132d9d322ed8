#include "netstab/stabilization.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <set>

#include "netstab/csv.hpp"
#include "netstab/errors.hpp"
#include "netstab/parallel.hpp"
#include "netstab/rng.hpp"

namespace netstab {

namespace {

void insert_all(std::set<int>& dst, const std::vector<int>& src) { dst.insert(src.begin(), src.end()); }

// M_{j,t}: every node whose primitives can reach the period-t links within
// K hops of j.
std::set<int> reach_set(const StabContext& ctx, int j, int t, int K) {
  const auto& M = ctx.m.M;
  std::set<int> acc;
  std::set<int> level;
  for (int a : k_neighborhood(M[static_cast<std::size_t>(t)], j, K)) level.insert(a);
  if (t > 0) {
    acc = level;
    for (int s = t - 1; s >= 1; --s) {
      std::set<int> next;
      for (int a : level) insert_all(next, k_neighborhood(M[static_cast<std::size_t>(s)], a, 1));
      acc.insert(next.begin(), next.end());
      level = std::move(next);
    }
  }
  for (int a : level) insert_all(acc, ctx.c_plus[static_cast<std::size_t>(a)]);
  return acc;
}

}  // namespace

MNetworks build_M_networks(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale) {
  MNetworks out;
  out.M = sup_networks(spec, prims, scale);
  out.M_union = Net(prims.size());
  for (const Net& net : out.M) {
    for (const auto& [a, b] : net.edges()) out.M_union.add(a, b);
  }
  return out;
}

StabContext StabContext::build(const ModelSpec& spec, const Primitives& prims,
                               const SparsityScale& scale) {
  const PairSet pairs = candidate_pairs(spec, prims, scale);
  StabContext ctx;
  ctx.m.M = sup_networks(spec, prims, scale, &pairs);
  ctx.m.M_union = Net(prims.size());
  for (const Net& net : ctx.m.M) {
    for (const auto& [a, b] : net.edges()) ctx.m.M_union.add(a, b);
  }
  ctx.c_plus = strategic_neighborhoods(classify_robustness(spec, prims, scale, &pairs));
  return ctx;
}

std::vector<int> construct_Ji(const StabContext& ctx, int i, int K) {
  if (K < 1) throw ContractViolation("K must be >= 1");
  const int T = static_cast<int>(ctx.m.M.size()) - 1;
  std::set<int> J{i};
  std::set<int> roots;
  for (int t = 0; t <= T; ++t) insert_all(roots, k_neighborhood(ctx.m.M[static_cast<std::size_t>(t)], i, K));
  for (int j : roots) {
    for (int t = 0; t <= T; ++t) {
      const auto r = reach_set(ctx, j, t, K);
      J.insert(r.begin(), r.end());
    }
  }
  return {J.begin(), J.end()};
}

std::vector<int> construct_Ji(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                              int i, int K) {
  return construct_Ji(StabContext::build(spec, prims, scale), i, K);
}

double radius(const Primitives& prims, const SparsityScale& scale, int i, std::span<const int> J) {
  if (std::find(J.begin(), J.end(), i) == J.end()) throw ContractViolation("J must contain i");
  double r = 0.0;
  for (int j : J) {
    r = std::max(r, prims.distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) / scale.r);
  }
  return r;
}

VerifyResult verify_on_set(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                           int i, std::span<const int> J, const StatKind& kind,
                           const NodeStatVector& full) {
  const auto it = std::lower_bound(J.begin(), J.end(), i);
  if (it == J.end() || *it != i) throw ContractViolation("J must contain i");
  if (!std::is_sorted(J.begin(), J.end())) throw ContractViolation("J must be ascending");
  const Primitives sub = prims.subset(J);
  const NodeStatVector part = compute_stat(kind, spec, sub, scale, run_pipeline(spec, sub, scale));
  const auto local = static_cast<std::size_t>(it - J.begin());
  VerifyResult res;
  const auto a = full.row(static_cast<std::size_t>(i));
  const auto b = part.row(local);
  res.psi_full.assign(a.begin(), a.end());
  res.psi_regrown.assign(b.begin(), b.end());
  res.equal = res.psi_full == res.psi_regrown;
  return res;
}

VerifyResult verify_on_set(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                           int i, std::span<const int> J, const StatKind& kind) {
  const NodeStatVector full = compute_stat(kind, spec, prims, scale, run_pipeline(spec, prims, scale));
  return verify_on_set(spec, prims, scale, i, J, kind, full);
}

VerifyResult verify_stabilization(const ModelSpec& spec, const Primitives& prims,
                                  const SparsityScale& scale, int i, int K, const StatKind& kind) {
  const auto J = construct_Ji(spec, prims, scale, i, K);
  return verify_on_set(spec, prims, scale, i, J, kind);
}

StabReport stabilization_report(const ModelSpec& spec, const Primitives& prims,
                                const SparsityScale& scale, std::span<const StatKind> kinds,
                                std::span<const int> nodes, bool verify, int threads) {
  int K = 1;
  for (const auto& k : kinds) K = std::max(K, k.locality());
  const StabContext ctx = StabContext::build(spec, prims, scale);
  std::vector<NodeStatVector> full;
  if (verify) {
    const NetSeries series = run_pipeline(spec, prims, scale);
    for (const auto& k : kinds) full.push_back(compute_stat(k, spec, prims, scale, series));
  }
  StabReport rep;
  rep.records.resize(nodes.size());
  parallel_for(nodes.size(), threads, [&](std::size_t idx) {
    const int i = nodes[idx];
    const auto J = construct_Ji(ctx, i, K);
    StabRecord& rec = rep.records[idx];
    rec.node = prims.ids[static_cast<std::size_t>(i)];
    for (int j : J) rec.J.push_back(prims.ids[static_cast<std::size_t>(j)]);
    rec.radius = radius(prims, scale, i, J);
    if (verify) {
      rec.checked = true;
      rec.verified = true;
      for (std::size_t k = 0; k < kinds.size(); ++k) {
        if (!verify_on_set(spec, prims, scale, i, J, kinds[k], full[k]).equal) rec.verified = false;
      }
    }
  });
  std::vector<double> sizes, radii;
  for (const auto& rec : rep.records) {
    rep.checked += rec.checked ? 1 : 0;
    rep.failures += rec.checked && !rec.verified ? 1 : 0;
    sizes.push_back(static_cast<double>(rec.J.size()));
    radii.push_back(rec.radius);
  }
  if (sizes.size() >= 500) {
    rep.size_tail = tail_fit(sizes);
    rep.radius_tail = tail_fit(radii);
  }
  return rep;
}

void write_stab_csv(std::ostream& os, const StabReport& report) {
  os << "node,J_size,radius,verified\n";
  for (const auto& rec : report.records) {
    os << rec.node << ',' << rec.J.size() << ',' << format_double(rec.radius) << ','
       << (rec.checked ? (rec.verified ? "1" : "0") : "") << '\n';
  }
}

std::optional<double> pure_distance_limit(const ModelSpec& spec, Which which) {
  const auto& p = spec.params(which);
  for (double b : p.beta_s) {
    if (b != 0.0) return std::nullopt;
  }
  if (spec.d_z > 0) {
    for (double b : p.beta_z) {
      if (b != 0.0) return std::nullopt;
    }
  }
  const double c = p.intercept;
  const int d = spec.d;
  auto integrand = [&](double rho) {
    return std::pow(rho, d - 1) * spec.shock.survival(rho - c);
  };
  using boost::math::quadrature::gauss_kronrod;
  double integral = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  if (c > 0.0) {
    integral = gauss_kronrod<double, 61>::integrate(integrand, 0.0, c, 15, 1e-12) +
               gauss_kronrod<double, 61>::integrate(integrand, c, inf, 15, 1e-12);
  } else {
    integral = gauss_kronrod<double, 61>::integrate(integrand, 0.0, inf, 15, 1e-12);
  }
  return spec.kappa * unit_sphere_area(d) * integral;
}

SparsityReport sparsity_check(const ModelSpec& spec, std::span<const std::int64_t> n_grid, int reps,
                              std::uint64_t seed, int threads) {
  if (reps < 2) throw ContractViolation("sparsity check needs at least two replications");
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) throw ContractViolation("n grid must be ascending");
  SparsityReport rep;
  const auto periods = static_cast<std::size_t>(spec.T + 1);
  for (std::size_t t = 0; t < periods; ++t) {
    rep.limit.push_back(pure_distance_limit(spec, t == 0 ? Which::V0 : Which::V));
  }
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const std::int64_t n = n_grid[g];
    const std::uint64_t grid_seed = derive_seed(seed, Stream::replication, g);
    std::vector<double> deg(static_cast<std::size_t>(reps) * periods);
    parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
      const Simulation sim = simulate(spec, n, n, false, derive_seed(grid_seed, Stream::replication, r));
      for (std::size_t t = 0; t < periods; ++t) {
        deg[r * periods + t] =
            2.0 * static_cast<double>(sim.series.nets[t].edge_count()) / static_cast<double>(n);
      }
    });
    SparsityRow row;
    row.n = n;
    for (std::size_t t = 0; t < periods; ++t) {
      double m = 0.0;
      for (int r = 0; r < reps; ++r) m += deg[static_cast<std::size_t>(r) * periods + t];
      m /= reps;
      double v = 0.0;
      for (int r = 0; r < reps; ++r) {
        const double e = deg[static_cast<std::size_t>(r) * periods + t] - m;
        v += e * e;
      }
      v /= (reps - 1);
      row.mean_degree.push_back(m);
      row.se.push_back(std::sqrt(v / reps));
    }
    rep.rows.push_back(std::move(row));
  }
  if (rep.rows.size() >= 2) {
    double mx = 0.0;
    for (const auto& row : rep.rows) mx += std::log(static_cast<double>(row.n));
    mx /= static_cast<double>(rep.rows.size());
    double sxx = 0.0;
    for (const auto& row : rep.rows) sxx += std::pow(std::log(static_cast<double>(row.n)) - mx, 2);
    double slope = 0.0, var = 0.0;
    for (const auto& row : rep.rows) {
      const double w = (std::log(static_cast<double>(row.n)) - mx) / sxx;
      slope += w * row.mean_degree[0];
      var += w * w * row.se[0] * row.se[0];
    }
    rep.trend_slope = slope;
    rep.trend_se = std::sqrt(var);
  }
  return rep;
}

}  // namespace netstab
