#include "netstab/moments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <iterator>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <set>
#include <sstream>

#include "netstab/errors.hpp"
#include "netstab/strategic.hpp"

namespace netstab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ConfigError("bad number '" + s + "' in " + what, "stat");
  }
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  const double v = parse_double(s, what);
  if (v != std::floor(v)) throw ConfigError("expected an integer in " + what, "stat");
  return static_cast<int>(v);
}

void check_period(const NetSeries& series, int t) {
  if (t < 0 || t > series.T()) {
    throw ContractViolation("period " + std::to_string(t) + " outside 0.." +
                            std::to_string(series.T()));
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct GrahamDyad {
  bool informative;
  double x[2];  // G * H
};

GrahamDyad graham_dyad(const NetSeries& s, int i, int j, StableDyadRule rule) {
  const bool a0 = s.nets[0].has(i, j), a1 = s.nets[1].has(i, j);
  const bool a2 = s.nets[2].has(i, j), a3 = s.nets[3].has(i, j);
  GrahamDyad g{false, {0.0, 0.0}};
  if (a1 == a2) return g;
  const int c1 = common_neighbors(s.nets[1], i, j);
  if (rule != StableDyadRule::switch_only && c1 != common_neighbors(s.nets[2], i, j)) {
    return g;
  }
  if (rule == StableDyadRule::isolated_switch) {
    const std::size_t own = a1 ? 1 : 0;
    if (s.nets[1].degree(i) != own || s.nets[1].degree(j) != own) return g;
  }
  const double G = a2 ? 1.0 : -1.0;
  const double h0 = static_cast<double>(a3) - static_cast<double>(a0);
  const double h1 = static_cast<double>(c1 - common_neighbors(s.nets[0], i, j));
  g.informative = true;
  g.x[0] = G * h0;
  g.x[1] = G * h1;
  return g;
}

void check_graham(const NetSeries& series, std::span<const double> theta) {
  if (series.T() < 3) throw ContractViolation("graham statistics need T >= 3");
  if (theta.size() != 2) throw ContractViolation("graham theta must have two components");
}

// Ever-neighbours in periods 1 and 2, ascending: the only dyads that can be
// informative.
std::vector<int> switch_candidates(const NetSeries& s, int i) {
  const auto& n1 = s.nets[1].neighbors(i);
  const auto& n2 = s.nets[2].neighbors(i);
  std::vector<int> out;
  std::set_union(n1.begin(), n1.end(), n2.begin(), n2.end(), std::back_inserter(out));
  return out;
}

}  // namespace

int StatKind::locality() const {
  return family == StatFamily::kneigh_size ? K : 1;
}

std::size_t StatKind::dim() const {
  switch (family) {
    case StatFamily::graham: return 2;
    case StatFamily::asf: return 3;
    default: return 1;
  }
}

std::string StatKind::label() const {
  switch (family) {
    case StatFamily::degree: return "degree:" + std::to_string(t);
    case StatFamily::dyad: return "dyad:" + std::to_string(t);
    case StatFamily::triangle: return "triangle:" + std::to_string(t);
    case StatFamily::kstar: return "kstar:" + std::to_string(k) + ":" + std::to_string(t);
    case StatFamily::kneigh_size: return "kneigh:" + std::to_string(K) + ":" + std::to_string(t);
    case StatFamily::graham: {
      std::string s = "graham:" + fmt(theta.at(0)) + "," + fmt(theta.at(1));
      if (rule == StableDyadRule::switch_only) s += ":switch";
      if (rule == StableDyadRule::switch_with_equal_common) s += ":equal_common";
      return s;
    }
    case StatFamily::asf: {
      std::string s = "asf:";
      for (std::size_t k2 = 0; k2 < s_target.size(); ++k2) {
        s += (k2 ? "," : "") + fmt(s_target[k2]);
      }
      return s;
    }
    case StatFamily::constant: return "constant:" + fmt(c);
  }
  return "unknown";
}

StatKind parse_stat_kind(const std::string& text, const ModelSpec& spec) {
  const auto parts = split(text, ':');
  const std::string& head = parts[0];
  StatKind kind;
  kind.t = spec.T;
  auto period_at = [&](std::size_t idx) {
    if (parts.size() > idx) kind.t = parse_int(parts[idx], text);
    if (parts.size() > idx + 1) throw ConfigError("too many fields in stat '" + text + "'", "stat");
    if (kind.t < 0 || kind.t > spec.T) {
      throw ConfigError("stat period outside 0..T in '" + text + "'", "stat");
    }
  };
  if (head == "degree" || head == "dyad" || head == "triangle") {
    kind.family = head == "degree" ? StatFamily::degree
                  : head == "dyad" ? StatFamily::dyad
                                   : StatFamily::triangle;
    period_at(1);
  } else if (head == "kstar" || head == "kneigh") {
    if (parts.size() < 2) throw ConfigError("stat '" + text + "' needs an order", "stat");
    const int v = parse_int(parts[1], text);
    if (v < 1) throw ConfigError("stat order must be >= 1 in '" + text + "'", "stat");
    if (head == "kstar") {
      kind.family = StatFamily::kstar;
      kind.k = v;
    } else {
      kind.family = StatFamily::kneigh_size;
      kind.K = v;
    }
    period_at(2);
  } else if (head == "graham") {
    kind.family = StatFamily::graham;
    kind.theta = {0.0, 0.0};
    std::size_t idx = 1;
    auto is_rule = [](const std::string& p) {
      return p == "stable" || p == "switch" || p == "equal_common";
    };
    if (parts.size() > idx && !is_rule(parts[idx])) {
      const auto th = split(parts[idx], ',');
      if (th.size() != 2) throw ConfigError("graham theta needs two values", "stat");
      kind.theta = {parse_double(th[0], text), parse_double(th[1], text)};
      ++idx;
    }
    if (parts.size() > idx) {
      if (!is_rule(parts[idx]) || parts.size() > idx + 1) {
        throw ConfigError("bad graham stat '" + text + "'", "stat");
      }
      kind.rule = parts[idx] == "stable"   ? StableDyadRule::isolated_switch
                  : parts[idx] == "switch" ? StableDyadRule::switch_only
                                           : StableDyadRule::switch_with_equal_common;
    }
    if (spec.T < 3) throw ConfigError("graham stat needs T >= 3", "stat");
  } else if (head == "asf") {
    kind.family = StatFamily::asf;
    if (parts.size() != 2) throw ConfigError("asf stat needs one list of values", "stat");
    for (const auto& v : split(parts[1], ',')) kind.s_target.push_back(parse_double(v, text));
    const std::size_t want = spec.s_dim() + 2 * static_cast<std::size_t>(spec.d_z);
    if (kind.s_target.size() != want) {
      throw ConfigError("asf target needs " + std::to_string(want) + " values", "stat");
    }
    if (spec.T < 1) throw ConfigError("asf stat needs T >= 1", "stat");
  } else if (head == "constant") {
    kind.family = StatFamily::constant;
    if (parts.size() > 2) throw ConfigError("bad constant stat '" + text + "'", "stat");
    if (parts.size() == 2) kind.c = parse_double(parts[1], text);
  } else {
    throw ConfigError("unknown stat '" + text + "'", "stat");
  }
  return kind;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

std::vector<double> aggregate(const NodeStatVector& psi) {
  const std::size_t n = psi.size();
  std::vector<double> out(psi.dim);
  std::vector<double> col(n);
  for (std::size_t c = 0; c < psi.dim; ++c) {
    for (std::size_t i = 0; i < n; ++i) col[i] = psi.values[i * psi.dim + c];
    out[c] = pairwise_sum(col);
  }
  return out;
}

NodeStatVector count_stat(const NetSeries& series, const StatKind& kind) {
  check_period(series, kind.t);
  const Net& net = series.nets[static_cast<std::size_t>(kind.t)];
  const std::size_t n = series.size();
  NodeStatVector out;
  out.kind = kind;
  out.dim = 1;
  out.values.assign(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    const int i = static_cast<int>(u);
    const double deg = static_cast<double>(net.degree(i));
    double v = 0.0;
    switch (kind.family) {
      case StatFamily::degree: v = deg; break;
      case StatFamily::dyad: v = deg / 2.0; break;
      case StatFamily::triangle: {
        long long ordered = 0;
        for (int j : net.neighbors(i)) ordered += common_neighbors(net, i, j);
        v = static_cast<double>(ordered);
        break;
      }
      case StatFamily::kstar: {
        if (kind.k < 1) throw ContractViolation("k-star order must be >= 1");
        double c = 1.0;
        for (int m = 0; m < kind.k; ++m) c = c * (deg - m) / (m + 1);
        v = std::max(c, 0.0);
        break;
      }
      case StatFamily::kneigh_size:
        if (kind.K < 1) throw ContractViolation("K must be >= 1");
        v = static_cast<double>(k_neighborhood(net, i, kind.K).size());
        break;
      default: throw ContractViolation("not a count statistic: " + kind.label());
    }
    out.values[u] = v;
  }
  return out;
}

std::vector<int> dynamic_kneigh(const NetSeries& series, int i, int K) {
  if (K < 1) throw ContractViolation("K must be >= 1");
  std::set<int> mid;
  for (const Net& net : series.nets) {
    for (int j : k_neighborhood(net, i, K)) mid.insert(j);
  }
  mid.insert(i);
  std::set<int> out;
  for (int j : mid) {
    for (const Net& net : series.nets) {
      for (int k : k_neighborhood(net, j, K)) out.insert(k);
    }
  }
  return {out.begin(), out.end()};
}

GrahamObjective graham_objective(const NetSeries& series, std::span<const double> theta,
                                 StableDyadRule rule) {
  check_graham(series, theta);
  GrahamObjective o;
  o.gradient.assign(2, 0.0);
  o.hessian.assign(4, 0.0);
  const int n = static_cast<int>(series.size());
  for (int i = 0; i < n; ++i) {
    for (int j : switch_candidates(series, i)) {
      const GrahamDyad g = graham_dyad(series, i, j, rule);
      if (!g.informative) continue;
      if (i < j) ++o.informative;
      const double u = g.x[0] * theta[0] + g.x[1] * theta[1];
      o.value += -softplus(-u);
      const double lam = logistic(u);
      const double w = 1.0 - lam;
      o.gradient[0] += g.x[0] * w;
      o.gradient[1] += g.x[1] * w;
      const double c = lam * w;
      o.hessian[0] -= g.x[0] * g.x[0] * c;
      o.hessian[1] -= g.x[0] * g.x[1] * c;
      o.hessian[3] -= g.x[1] * g.x[1] * c;
    }
  }
  o.hessian[2] = o.hessian[1];
  return o;
}

NodeStatVector graham_score(const NetSeries& series, std::span<const double> theta,
                            StableDyadRule rule) {
  check_graham(series, theta);
  const std::size_t n = series.size();
  NodeStatVector out;
  out.kind.family = StatFamily::graham;
  out.kind.theta.assign(theta.begin(), theta.end());
  out.kind.rule = rule;
  out.kind.t = series.T();
  out.dim = 2;
  out.values.assign(2 * n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    const int i = static_cast<int>(u);
    double g0 = 0.0, g1 = 0.0;
    for (int j : switch_candidates(series, i)) {
      const GrahamDyad g = graham_dyad(series, i, j, rule);
      if (!g.informative) continue;
      const double w = 1.0 - logistic(g.x[0] * theta[0] + g.x[1] * theta[1]);
      g0 += g.x[0] * w;
      g1 += g.x[1] * w;
    }
    out.values[2 * u] = g0;
    out.values[2 * u + 1] = g1;
  }
  return out;
}

GrahamFit graham_fit(const NetSeries& series, StableDyadRule rule) {
  if (series.T() < 3) throw ContractViolation("graham fit needs T >= 3");
  // Existence: the informative regressors must span R^2 and must not all lie
  // in a closed half-plane.
  std::vector<std::array<double, 2>> xs;
  Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
  const int n = static_cast<int>(series.size());
  for (int i = 0; i < n; ++i) {
    for (int j : switch_candidates(series, i)) {
      if (j < i) continue;
      const GrahamDyad g = graham_dyad(series, i, j, rule);
      if (!g.informative) continue;
      Eigen::Vector2d x(g.x[0], g.x[1]);
      gram += x * x.transpose();
      if (g.x[0] != 0.0 || g.x[1] != 0.0) xs.push_back({g.x[0], g.x[1]});
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(gram);
  const double top = eig.eigenvalues()(1);
  if (!(top > 0.0) || eig.eigenvalues()(0) <= 1e-12 * top) {
    throw Degenerate("informative dyads do not identify theta");
  }
  std::vector<double> angles;
  angles.reserve(xs.size());
  for (const auto& x : xs) angles.push_back(std::atan2(x[1], x[0]));
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2 * std::numbers::pi - angles.back();
  for (std::size_t k = 1; k < angles.size(); ++k) gap = std::max(gap, angles[k] - angles[k - 1]);
  if (gap >= std::numbers::pi - 1e-12) {
    throw Separation("conditional likelihood has no finite maximiser");
  }

  GrahamFit fit;
  std::vector<double> theta{0.0, 0.0};
  GrahamObjective cur = graham_objective(series, theta, rule);
  fit.informative = cur.informative;
  auto gnorm = [](const GrahamObjective& o) { return std::hypot(o.gradient[0], o.gradient[1]); };
  int it = 0;
  for (; it < 100 && gnorm(cur) >= 1e-8; ++it) {
    Eigen::Matrix2d negH;
    negH << -cur.hessian[0], -cur.hessian[1], -cur.hessian[2], -cur.hessian[3];
    const Eigen::Vector2d step = negH.ldlt().solve(Eigen::Vector2d(cur.gradient[0], cur.gradient[1]));
    double lambda = 1.0;
    bool moved = false;
    for (int h = 0; h < 60; ++h, lambda *= 0.5) {
      std::vector<double> next{theta[0] + lambda * step(0), theta[1] + lambda * step(1)};
      GrahamObjective cand = graham_objective(series, next, rule);
      const double tol = 1e-13 * (1.0 + std::abs(cur.value));
      if (cand.value > cur.value ||
          (cand.value >= cur.value - tol && gnorm(cand) < gnorm(cur))) {
        theta = next;
        cur = std::move(cand);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  fit.theta = theta;
  fit.log_likelihood = cur.value;
  fit.gradient_norm = gnorm(cur);
  fit.iterations = it;
  if (!(fit.gradient_norm < 1e-8)) {
    throw NonConvergence("Newton stopped with gradient norm " + fmt(fit.gradient_norm));
  }
  return fit;
}

NodeStatVector asf_stats(const ModelSpec& spec, const Primitives& prims, const SparsityScale& scale,
                         const NetSeries& series, std::span<const double> s_target) {
  if (series.T() < 1) throw ContractViolation("asf statistics need T >= 1");
  const std::size_t ds = spec.s_dim();
  const std::size_t dz = static_cast<std::size_t>(spec.d_z);
  if (s_target.size() != ds + 2 * dz) {
    throw ContractViolation("asf target has " + std::to_string(s_target.size()) +
                            " values, expected " + std::to_string(ds + 2 * dz));
  }
  for (std::size_t c = 0; c < ds; ++c) {
    const Bounds& b = spec.s_bounds[c];
    if (s_target[c] < b.lo || s_target[c] > b.hi) {
      throw ContractViolation("asf target component " + std::to_string(c) + " outside s_bounds");
    }
  }
  const auto s = s_target.first(ds);
  const auto z = s_target.subspan(ds, dz);
  const auto zp = s_target.subspan(ds + dz, dz);
  auto close = [](std::span<const double> a, std::span<const double> b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (std::abs(a[k] - b[k]) > 1e-9) return false;
    }
    return true;
  };
  const std::size_t n = series.size();
  NodeStatVector out;
  out.kind.family = StatFamily::asf;
  out.kind.s_target.assign(s_target.begin(), s_target.end());
  out.kind.t = series.T();
  out.dim = 3;
  out.values.assign(3 * n, 0.0);
  std::vector<double> sval(ds);
  for (std::size_t u = 0; u < n; ++u) {
    const int i = static_cast<int>(u);
    double hit_links = 0.0, unhit = 0.0;
    const auto& init = series.nets[0].neighbors(i);
    for (int j : init) {
      int first = -1;
      for (int t = 1; t <= series.T() && first < 0; ++t) {
        if (!close(prims.z(u, t), z) || !close(prims.z(static_cast<std::size_t>(j), t), zp)) continue;
        const TypeView types{prims, t - 1, scale.r};
        eval_S_into(spec, i, j, types, series.nets[static_cast<std::size_t>(t - 1)], sval);
        if (std::equal(sval.begin(), sval.end(), s.begin())) first = t;
      }
      if (first < 0) {
        unhit += 1.0;
      } else if (series.nets[static_cast<std::size_t>(first)].has(i, j)) {
        hit_links += 1.0;
      }
    }
    out.values[3 * u] = hit_links;
    out.values[3 * u + 1] = unhit;
    out.values[3 * u + 2] = static_cast<double>(init.size());
  }
  return out;
}

AsfBounds asf_bounds(const NodeStatVector& stats) {
  if (stats.dim != 3) throw ContractViolation("asf bounds need three components");
  const auto tot = aggregate(stats);
  if (!(tot[2] > 0.0)) throw ZeroDenominator("no initial links");
  return {tot[0] / tot[2], (tot[0] + tot[1]) / tot[2]};
}

NodeStatVector compute_stat(const StatKind& kind, const ModelSpec& spec, const Primitives& prims,
                            const SparsityScale& scale, const NetSeries& series) {
  switch (kind.family) {
    case StatFamily::graham: {
      NodeStatVector v = graham_score(series, kind.theta, kind.rule);
      v.kind = kind;
      return v;
    }
    case StatFamily::asf: {
      NodeStatVector v = asf_stats(spec, prims, scale, series, kind.s_target);
      v.kind = kind;
      return v;
    }
    case StatFamily::constant: {
      NodeStatVector v;
      v.kind = kind;
      v.dim = 1;
      v.values.assign(series.size(), kind.c);
      return v;
    }
    default: return count_stat(series, kind);
  }
}

std::vector<double> add_one_cost(const ModelSpec& spec, const Primitives& prims_extended,
                                 const SparsityScale& scale, const StatKind& kind) {
  const std::size_t n1 = prims_extended.size();
  if (n1 == 0) throw ContractViolation("add-one cost needs at least one node");
  const std::size_t n = n1 - 1;
  std::vector<int> first(n);
  for (std::size_t k = 0; k < n; ++k) first[k] = static_cast<int>(k);
  const Primitives base = prims_extended.subset(first);
  const NodeStatVector big =
      compute_stat(kind, spec, prims_extended, scale, run_pipeline(spec, prims_extended, scale));
  const NodeStatVector small = compute_stat(kind, spec, base, scale, run_pipeline(spec, base, scale));
  std::vector<double> xi(big.dim);
  for (std::size_t c = 0; c < big.dim; ++c) {
    double acc = big.values[n * big.dim + c];
    for (std::size_t i = 0; i < n; ++i) {
      acc += big.values[i * big.dim + c] - small.values[i * small.dim + c];
    }
    xi[c] = acc;
  }
  return xi;
}

}  // namespace netstab
