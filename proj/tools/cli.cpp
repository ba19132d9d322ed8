#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "netstab/branching.hpp"
#include "netstab/csv.hpp"
#include "netstab/errors.hpp"
#include "netstab/formation.hpp"
#include "netstab/inference.hpp"
#include "netstab/model_io.hpp"
#include "netstab/moments.hpp"
#include "netstab/parallel.hpp"
#include "netstab/primitives.hpp"
#include "netstab/rng.hpp"
#include "netstab/stabilization.hpp"

namespace netstab::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

const char* kDefaultModel = R"({
  "d": 2,
  "T": 3,
  "kappa": 0.5,
  "v": {"beta_s": [0.5, 0.25], "intercept": -1.5},
  "v0": {"beta_s": [0.3, 0.3], "intercept": -1.5},
  "shock_law": "logistic",
  "s_kind": "lagged_link_and_common_max"
})";

// Parameters each command accepts, with defaults.
json param_schema(Command c) {
  switch (c) {
    case Command::simulate: return {{"n", 100}, {"poissonized", false}};
    case Command::moments:
      return {{"n", 500}, {"stat", json::array({"degree"})}, {"fit_graham", false}};
    case Command::stabilize:
      return {{"n", 200}, {"K", 1}, {"stat", json::array({"degree"})}, {"verify", true}, {"max_nodes", 0}};
    case Command::branching:
      return {{"process", "D"},   {"K", 1},          {"reps", 10000},    {"offspring_mean", nullptr},
              {"population_cap", 1000000}, {"n", 1000}, {"norm", true}, {"mc_norm", false},
              {"mc_outer", 1000}, {"mc_inner", 1000}};
    case Command::clt:
      return {{"n", 500}, {"reps", 2000}, {"stat", json::array({"degree"})}, {"poisson", false}};
    case Command::infer:
      return {{"networks", 20}, {"n", 200}, {"stat", "degree"}, {"mu0", nullptr},
              {"draws", 9999},  {"alternative", "two_sided"}};
    case Command::sparsity: return {{"n_grid", json::array({250, 1000, 4000})}, {"reps", 200}};
  }
  return json::object();
}

[[noreturn]] void bad_type(const std::string& key, const std::string& want) {
  throw ConfigError("key 'params." + key + "' must be " + want, "params." + key);
}

std::int64_t get_int(const json& p, const std::string& key, std::int64_t lo) {
  const json& v = p.at(key);
  if (!v.is_number_integer()) bad_type(key, "an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo) throw ConfigError("key 'params." + key + "' must be >= " + std::to_string(lo), "params." + key);
  return x;
}

bool get_bool(const json& p, const std::string& key) {
  if (!p.at(key).is_boolean()) bad_type(key, "a boolean");
  return p.at(key).get<bool>();
}

std::string get_string(const json& p, const std::string& key) {
  if (!p.at(key).is_string()) bad_type(key, "a string");
  return p.at(key).get<std::string>();
}

std::vector<std::string> get_strings(const json& p, const std::string& key) {
  const json& v = p.at(key);
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array() || v.empty()) bad_type(key, "a string or a non-empty list of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) bad_type(key, "a list of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<double> get_doubles(const json& p, const std::string& key) {
  const json& v = p.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array() || v.empty()) bad_type(key, "a number or a list of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) bad_type(key, "a list of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string safe_label(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  return s;
}

// Output directory plus the list of artifacts written into it.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    names_.push_back(name);
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw Error("cannot write " + (dir_ / name).string());
    return os;
  }

  void manifest(const RunConfig& cfg, const std::string& config_hash) {
    std::sort(names_.begin(), names_.end());
    std::ofstream os(dir_ / "manifest.txt", std::ios::binary);
    os << "netstab_version=" << kVersion << '\n';
    os << "command=" << to_string(cfg.command) << '\n';
    os << "seed=" << cfg.seed << '\n';
    os << "config_hash=fnv1a64:" << config_hash << '\n';
    for (const auto& name : names_) {
      std::ifstream in(dir_ / name, std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      char hex[17];
      std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(buf.str())));
      os << "artifact." << name << "=fnv1a64:" << hex << '\n';
    }
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

// key=value lines in insertion order.
class Summary {
 public:
  void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
  void add(const std::string& key, double v) { add(key, format_double(v)); }
  void add_int(const std::string& key, long long v) { add(key, std::to_string(v)); }
  void write(std::ostream& os) const {
    for (const auto& [k, v] : lines_) os << k << '=' << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

std::vector<StatKind> parse_stats(const RunConfig& cfg) {
  std::vector<StatKind> kinds;
  for (const auto& s : get_strings(cfg.params, "stat")) kinds.push_back(parse_stat_kind(s, cfg.model));
  return kinds;
}

bool run_simulate(const RunConfig& cfg, Artifacts& art, Summary& sum) {
  const auto n = get_int(cfg.params, "n", 1);
  const Simulation sim = simulate(cfg.model, n, n, get_bool(cfg.params, "poissonized"), cfg.seed);
  {
    auto os = art.open("edges.csv");
    write_edge_list(os, sim.series);
  }
  {
    auto os = art.open("nodes.csv");
    os << "id";
    for (int k = 0; k < cfg.model.d; ++k) os << ",x" << k + 1;
    for (int t = 0; t <= cfg.model.T; ++t) {
      for (int k = 0; k < cfg.model.d_z; ++k) os << ",z" << t << '_' << k + 1;
    }
    os << '\n';
    for (std::size_t i = 0; i < sim.prims.size(); ++i) {
      os << sim.prims.ids[i];
      for (double v : sim.prims.x(i)) os << ',' << format_double(v);
      for (int t = 0; t <= cfg.model.T; ++t) {
        for (double v : sim.prims.z(i, t)) os << ',' << format_double(v);
      }
      os << '\n';
    }
  }
  sum.add_int("nodes", static_cast<long long>(sim.prims.size()));
  for (int t = 0; t <= sim.series.T(); ++t) {
    const auto e = sim.series.nets[static_cast<std::size_t>(t)].edge_count();
    sum.add_int("edges." + std::to_string(t), static_cast<long long>(e));
    sum.add("mean_degree." + std::to_string(t), 2.0 * static_cast<double>(e) / static_cast<double>(sim.prims.size()));
  }
  const auto bad = stability_violations(cfg.model, sim.prims, sim.scale, sim.series.nets[0]);
  sum.add_int("initial_stability_violations", static_cast<long long>(bad));
  return bad == 0;
}

bool run_moments(const RunConfig& cfg, Artifacts& art, Summary& sum) {
  const auto n = get_int(cfg.params, "n", 1);
  const auto kinds = parse_stats(cfg);
  const Simulation sim = simulate(cfg.model, n, n, false, cfg.seed);
  std::vector<NodeStatVector> stats;
  for (const auto& k : kinds) stats.push_back(compute_stat(k, cfg.model, sim.prims, sim.scale, sim.series));
  bool ok = true;
  {
    auto os = art.open("stats.csv");
    os << "node_id";
    for (const auto& s : stats) {
      for (std::size_t c = 0; c < s.dim; ++c) os << ',' << safe_label(s.kind.label()) << '[' << c << ']';
    }
    os << '\n';
    for (std::size_t i = 0; i < sim.prims.size(); ++i) {
      os << sim.prims.ids[i];
      for (const auto& s : stats) {
        for (double v : s.row(i)) os << ',' << format_double(v);
      }
      os << '\n';
    }
  }
  for (const auto& s : stats) {
    const auto tot = aggregate(s);
    for (std::size_t c = 0; c < tot.size(); ++c) {
      sum.add("total." + safe_label(s.kind.label()) + "[" + std::to_string(c) + "]", tot[c]);
    }
    if (s.kind.family == StatFamily::asf) {
      const AsfBounds b = asf_bounds(s);
      sum.add("asf.mu_lower", b.lower);
      sum.add("asf.mu_upper", b.upper);
      ok = ok && b.lower <= b.upper;
    }
  }
  if (get_bool(cfg.params, "fit_graham")) {
    const GrahamFit fit = graham_fit(sim.series);
    sum.add("graham.theta1", fit.theta[0]);
    sum.add("graham.theta2", fit.theta[1]);
    sum.add("graham.gradient_norm", fit.gradient_norm);
    sum.add_int("graham.iterations", fit.iterations);
    sum.add_int("graham.informative_dyads", static_cast<long long>(fit.informative));
    ok = ok && fit.gradient_norm < 1e-8;
  }
  return ok;
}

bool run_stabilize(const RunConfig& cfg, Artifacts& art, Summary& sum, int threads) {
  const auto n = get_int(cfg.params, "n", 1);
  const int K = static_cast<int>(get_int(cfg.params, "K", 1));
  auto kinds = parse_stats(cfg);
  for (auto& k : kinds) {
    if (k.family != StatFamily::kneigh_size) k.K = std::max(k.K, 1);
  }
  const Simulation sim = simulate(cfg.model, n, n, false, cfg.seed);
  const auto max_nodes = get_int(cfg.params, "max_nodes", 0);
  const std::size_t count = max_nodes > 0 ? std::min<std::size_t>(sim.prims.size(), static_cast<std::size_t>(max_nodes))
                                          : sim.prims.size();
  std::vector<int> nodes(count);
  for (std::size_t i = 0; i < count; ++i) nodes[i] = static_cast<int>(i);
  // The requested K widens J_i beyond the statistics' own locality.
  StatKind widen;
  widen.family = StatFamily::kneigh_size;
  widen.K = K;
  widen.t = 0;
  std::vector<StatKind> all = kinds;
  all.push_back(widen);
  const StabReport rep =
      stabilization_report(cfg.model, sim.prims, sim.scale, all, nodes, get_bool(cfg.params, "verify"), threads);
  {
    auto os = art.open("stab.csv");
    write_stab_csv(os, rep);
  }
  double mean_j = 0.0, max_r = 0.0;
  for (const auto& r : rep.records) {
    mean_j += static_cast<double>(r.J.size());
    max_r = std::max(max_r, r.radius);
  }
  sum.add_int("nodes", static_cast<long long>(rep.records.size()));
  sum.add_int("checked", static_cast<long long>(rep.checked));
  sum.add_int("failures", static_cast<long long>(rep.failures));
  sum.add("mean_J_size", rep.records.empty() ? 0.0 : mean_j / static_cast<double>(rep.records.size()));
  sum.add("max_radius", max_r);
  auto tail = [&](const std::string& name, const std::optional<TailFit>& t) {
    if (!t) return;
    sum.add(name + ".slope", t->slope);
    sum.add(name + ".slope_lo", t->slope_lo);
    sum.add(name + ".slope_hi", t->slope_hi);
    sum.add(name + ".exponential", t->exponential_tail() ? "1" : "0");
  };
  tail("tail.J_size", rep.size_tail);
  tail("tail.radius", rep.radius_tail);
  return rep.failures == 0;
}

bool run_branching(const RunConfig& cfg, Artifacts& art, Summary& sum, int threads) {
  const json& p = cfg.params;
  BranchingConfig bc;
  bc.spec = &cfg.model;
  const std::string process = get_string(p, "process");
  if (process == "D") {
    bc.kind = Intensity::D;
  } else if (process == "M") {
    bc.kind = Intensity::M;
  } else if (process == "H") {
    bc.kind = Intensity::H;
  } else {
    throw ConfigError("params.process must be D, M or H", "params.process");
  }
  bc.K = static_cast<int>(get_int(p, "K", 1));
  bc.population_cap = get_int(p, "population_cap", 1);
  const auto n = get_int(p, "n", 1);
  bc.slack_r = SparsityScale::from(cfg.model, n).r;
  bc.seed = derive_seed(cfg.seed, Stream::branching, 0);
  if (!p.at("offspring_mean").is_null()) {
    if (!p.at("offspring_mean").is_number()) bad_type("offspring_mean", "a number");
    bc.single_type_mean = p.at("offspring_mean").get<double>();
  }
  const auto reps = static_cast<std::size_t>(get_int(p, "reps", 1));
  std::vector<ParticleType> roots(reps);
  for (std::size_t k = 0; k < reps; ++k) {
    const auto id = static_cast<NodeId>(k + 1);
    roots[k].x.resize(static_cast<std::size_t>(cfg.model.d));
    roots[k].z.resize(static_cast<std::size_t>(cfg.model.d_z));
    sample_position(cfg.model, cfg.seed, id, roots[k].x);
    for (auto& v : roots[k].x) v /= bc.slack_r;
    sample_attributes(cfg.model, cfg.seed, id, 0, roots[k].z);
  }
  const auto samples = netstab::run_branching(bc, roots, threads);
  std::vector<double> sizes;
  std::size_t truncated = 0;
  {
    auto os = art.open("sizes.csv");
    os << "rep,size,truncated,generations\n";
    for (std::size_t k = 0; k < samples.size(); ++k) {
      os << k << ',' << samples[k].total_size << ',' << (samples[k].truncated ? 1 : 0) << ','
         << samples[k].generations << '\n';
      sizes.push_back(static_cast<double>(samples[k].total_size));
      truncated += samples[k].truncated ? 1 : 0;
    }
  }
  double mean = 0.0;
  for (double s : sizes) mean += s;
  mean /= static_cast<double>(std::max<std::size_t>(1, sizes.size()));
  sum.add("process", process);
  sum.add_int("reps", static_cast<long long>(reps));
  sum.add("mean_size", mean);
  sum.add_int("truncated", static_cast<long long>(truncated));
  if (sizes.size() >= 500) {
    const TailFit t = tail_fit(sizes);
    sum.add("tail.slope", t.slope);
    sum.add("tail.slope_lo", t.slope_lo);
    sum.add("tail.slope_hi", t.slope_hi);
    sum.add("tail.exponential", t.exponential_tail() ? "1" : "0");
  }
  bool ok = true;
  if (get_bool(p, "norm")) {
    const double norm = h_D_norm(cfg.model);
    sum.add("h_D_norm", norm);
    sum.add("subcritical", norm < 1.0 ? "1" : "0");
    ok = norm < 1.0;
  }
  if (get_bool(p, "mc_norm")) {
    const NormEstimate est = h_D_norm_mc(cfg.model, derive_seed(cfg.seed, Stream::monte_carlo, 0),
                                         static_cast<int>(get_int(p, "mc_outer", 2)),
                                         static_cast<int>(get_int(p, "mc_inner", 1)));
    sum.add("h_D_norm_mc", est.value);
    sum.add("h_D_norm_mc_se", est.se);
  }
  return ok;
}

bool run_clt(const RunConfig& cfg, Artifacts& art, Summary& sum, int threads) {
  const auto n = get_int(cfg.params, "n", 1);
  const int reps = static_cast<int>(get_int(cfg.params, "reps", 2));
  const auto kinds = parse_stats(cfg);
  bool ok = true;
  for (std::size_t s = 0; s < kinds.size(); ++s) {
    const std::string tag = "stat" + std::to_string(s);
    const McReport rep = mc_clt(cfg.model, n, reps, kinds[s], derive_seed(cfg.seed, Stream::replication, s), threads);
    {
      auto os = art.open(tag + "_draws.csv");
      os << "rep";
      for (std::size_t c = 0; c < rep.dim; ++c) os << ",moment" << c << ",standardized" << c;
      os << '\n';
      for (int r = 0; r < reps; ++r) {
        os << r;
        for (std::size_t c = 0; c < rep.dim; ++c) {
          const std::size_t at = static_cast<std::size_t>(r) * rep.dim + c;
          os << ',' << format_double(rep.moment_draws[at]) << ',' << format_double(rep.standardized[at]);
        }
        os << '\n';
      }
    }
    {
      auto os = art.open(tag + "_qq.csv");
      os << "component,theoretical,empirical\n";
      for (std::size_t c = 0; c < rep.dim; ++c) {
        if (rep.zero_variance[c]) continue;
        for (const auto& [a, b] : qq_pairs(rep, c)) os << c << ',' << format_double(a) << ',' << format_double(b) << '\n';
      }
    }
    sum.add(tag + ".kind", kinds[s].label());
    for (std::size_t c = 0; c < rep.dim; ++c) {
      const std::string key = tag + "[" + std::to_string(c) + "]";
      if (rep.zero_variance[c]) {
        sum.add(key + ".zero_variance", "1");
        continue;
      }
      sum.add(key + ".mean", rep.mean[c]);
      sum.add(key + ".variance", rep.variance[c * rep.dim + c]);
      sum.add(key + ".ks", rep.ks_stat[c]);
      sum.add(key + ".ks_pvalue", rep.ks_pvalue[c]);
      ok = ok && rep.ks_stat[c] < 0.04;
    }
    if (get_bool(cfg.params, "poisson") && kinds[s].dim() == 1) {
      const VarianceDecomposition vd = poisson_variance_decomp(
          cfg.model, n, reps, kinds[s], derive_seed(cfg.seed, Stream::poisson_count, s), threads);
      sum.add(tag + ".sigma2", vd.sigma2);
      sum.add(tag + ".sigma2_tilde", vd.sigma2_tilde);
      sum.add(tag + ".sigma2_tilde_cv", vd.sigma2_tilde_cv);
      sum.add(tag + ".alpha", vd.alpha);
      sum.add(tag + ".gap", vd.gap);
      sum.add(tag + ".gap_cv", vd.gap_cv);
      ok = ok && (vd.sigma2 > 0.0 ? vd.gap_cv <= 0.15 : vd.abs_gap_cv <= 1e-12 * std::max(1.0, vd.alpha * vd.alpha));
    }
  }
  return ok;
}

bool run_infer(const RunConfig& cfg, Artifacts& art, Summary& sum, int threads) {
  const json& p = cfg.params;
  const auto G = static_cast<std::size_t>(get_int(p, "networks", 2));
  const auto n = get_int(p, "n", 1);
  const StatKind kind = parse_stat_kind(get_string(p, "stat"), cfg.model);
  if (p.at("mu0").is_null()) throw ConfigError("missing required key 'params.mu0'", "params.mu0");
  const auto mu0 = get_doubles(p, "mu0");
  if (mu0.size() != kind.dim()) {
    throw ConfigError("params.mu0 needs " + std::to_string(kind.dim()) + " values", "params.mu0");
  }
  const std::string alt_s = get_string(p, "alternative");
  if (alt_s != "two_sided" && alt_s != "greater") {
    throw ConfigError("params.alternative must be two_sided or greater", "params.alternative");
  }
  const Alternative alt = alt_s == "greater" ? Alternative::greater : Alternative::two_sided;
  std::vector<std::vector<double>> means(G);
  parallel_for(G, threads, [&](std::size_t g) {
    const Simulation sim = simulate(cfg.model, n, n, false, derive_seed(cfg.seed, Stream::instance, g));
    auto tot = aggregate(compute_stat(kind, cfg.model, sim.prims, sim.scale, sim.series));
    for (auto& v : tot) v /= static_cast<double>(sim.prims.size());
    means[g] = tot;
  });
  {
    auto os = art.open("means.csv");
    os << "network";
    for (std::size_t c = 0; c < kind.dim(); ++c) os << ",mean" << c;
    os << '\n';
    for (std::size_t g = 0; g < G; ++g) {
      os << g;
      for (double v : means[g]) os << ',' << format_double(v);
      os << '\n';
    }
  }
  const RandomizationResult rt = randomization_test(means, mu0, static_cast<int>(get_int(p, "draws", 1000)),
                                                    derive_seed(cfg.seed, Stream::sign_flip, 0), alt);
  std::vector<double> first;
  for (const auto& m : means) first.push_back(m[0]);
  const TTestResult tt = im_t_test(first, mu0[0], alt);
  sum.add_int("networks", static_cast<long long>(G));
  sum.add("randomization.statistic", rt.statistic);
  sum.add("randomization.p_value", rt.p_value);
  sum.add("randomization.exact", rt.exact ? "1" : "0");
  sum.add("t_test.t", tt.t);
  sum.add("t_test.p_value", tt.p_value);
  sum.add_int("t_test.df", tt.df);
  return true;
}

bool run_sparsity(const RunConfig& cfg, Artifacts& art, Summary& sum, int threads) {
  const json& grid_j = cfg.params.at("n_grid");
  if (!grid_j.is_array() || grid_j.empty()) bad_type("n_grid", "a non-empty list of integers");
  std::vector<std::int64_t> grid;
  for (const auto& v : grid_j) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) bad_type("n_grid", "a list of positive integers");
    grid.push_back(v.get<std::int64_t>());
  }
  const SparsityReport rep =
      sparsity_check(cfg.model, grid, static_cast<int>(get_int(cfg.params, "reps", 2)), cfg.seed, threads);
  bool ok = true;
  {
    auto os = art.open("sparsity.csv");
    os << "n,period,mean_degree,se,limit\n";
    for (const auto& row : rep.rows) {
      for (std::size_t t = 0; t < row.mean_degree.size(); ++t) {
        os << row.n << ',' << t << ',' << format_double(row.mean_degree[t]) << ',' << format_double(row.se[t])
           << ',' << (rep.limit[t] ? format_double(*rep.limit[t]) : "") << '\n';
        if (rep.limit[t]) ok = ok && std::abs(row.mean_degree[t] - *rep.limit[t]) <= 0.1 * *rep.limit[t];
      }
    }
  }
  if (rep.limit[0]) sum.add("limit.0", *rep.limit[0]);
  sum.add("trend_slope", rep.trend_slope);
  sum.add("trend_se", rep.trend_se);
  sum.add("bounded", rep.bounded() ? "1" : "0");
  return ok && rep.bounded();
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& prefix) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + prefix + it.key() + "'", prefix + it.key());
  }
}

ModelSpec load_model(const json& j) {
  try {
    return model_from_json(j.dump());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("model: ") + e.what(), "model." + e.key());
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Command command_from_string(const std::string& s) {
  static const std::map<std::string, Command> table{
      {"simulate", Command::simulate}, {"moments", Command::moments}, {"stabilize", Command::stabilize},
      {"branching", Command::branching}, {"clt", Command::clt},       {"infer", Command::infer},
      {"sparsity", Command::sparsity}};
  const auto it = table.find(s);
  if (it == table.end()) throw ConfigError("unknown command '" + s + "'", "command");
  return it->second;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::moments: return "moments";
    case Command::stabilize: return "stabilize";
    case Command::branching: return "branching";
    case Command::clt: return "clt";
    case Command::infer: return "infer";
    case Command::sparsity: return "sparsity";
  }
  return "unknown";
}

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j, {"model", "command", "seed", "output_dir", "params"}, "");
  RunConfig cfg;
  if (!j.contains("model")) throw ConfigError("missing required key 'model'", "model");
  if (!j.contains("command")) throw ConfigError("missing required key 'command'", "command");
  if (!j["model"].is_object()) throw ConfigError("'model' must be an object", "model");
  cfg.model = load_model(j["model"]);
  cfg.model_json = json::parse(model_to_json(cfg.model));
  if (!j["command"].is_string()) throw ConfigError("'command' must be a string", "command");
  cfg.command = command_from_string(j["command"].get<std::string>());
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("'seed' must be a nonnegative integer", "seed");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("'output_dir' must be a string", "output_dir");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError("'params' must be an object", "params");
    cfg.params = j["params"];
  }
  return cfg;
}

RunConfig default_config(Command command) {
  RunConfig cfg;
  cfg.model = model_from_json(kDefaultModel);
  cfg.model_json = json::parse(model_to_json(cfg.model));
  cfg.command = command;
  return cfg;
}

RunConfig resolve(RunConfig cfg, const Overrides& over) {
  if (over.command && *over.command != cfg.command) {
    cfg.command = *over.command;
    // Parameters belong to the command named in the file; start afresh.
    cfg.params = json::object();
  }
  if (over.seed) cfg.seed = *over.seed;
  if (over.out) cfg.output_dir = *over.out;
  const json schema = param_schema(cfg.command);
  std::set<std::string> allowed;
  for (auto it = schema.begin(); it != schema.end(); ++it) allowed.insert(it.key());
  check_keys(cfg.params, allowed, "params.");
  auto set_flag = [&](const char* key, const json& v, const char* flag) {
    if (!allowed.count(key)) {
      throw ConfigError(std::string(flag) + " does not apply to '" + to_string(cfg.command) + "'", key);
    }
    cfg.params[key] = v;
  };
  if (over.n) set_flag("n", *over.n, "--n");
  if (over.K) set_flag("K", *over.K, "--K");
  if (over.reps) set_flag("reps", *over.reps, "--reps");
  if (over.stat) {
    if (schema.at("stat").is_array()) {
      set_flag("stat", json::array({*over.stat}), "--stat");
    } else {
      set_flag("stat", *over.stat, "--stat");
    }
  }
  for (auto it = schema.begin(); it != schema.end(); ++it) {
    if (!cfg.params.contains(it.key())) cfg.params[it.key()] = it.value();
  }
  // Parse stat strings now so that bad ones are configuration errors.
  if (cfg.params.contains("stat")) {
    for (const auto& s : get_strings(cfg.params, "stat")) parse_stat_kind(s, cfg.model);
  }
  return cfg;
}

int execute(const RunConfig& cfg, const Overrides& over, std::ostream& log) {
  const json effective = {{"model", cfg.model_json},
                          {"command", to_string(cfg.command)},
                          {"seed", cfg.seed},
                          {"params", cfg.params}};
  const std::string canonical = effective.dump();
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  Artifacts art(cfg.output_dir);
  {
    auto os = art.open("config.json");
    os << effective.dump(2) << '\n';
  }
  Summary sum;
  bool ok = true;
  switch (cfg.command) {
    case Command::simulate: ok = run_simulate(cfg, art, sum); break;
    case Command::moments: ok = run_moments(cfg, art, sum); break;
    case Command::stabilize: ok = run_stabilize(cfg, art, sum, over.threads); break;
    case Command::branching: ok = run_branching(cfg, art, sum, over.threads); break;
    case Command::clt: ok = run_clt(cfg, art, sum, over.threads); break;
    case Command::infer: ok = run_infer(cfg, art, sum, over.threads); break;
    case Command::sparsity: ok = run_sparsity(cfg, art, sum, over.threads); break;
  }
  sum.add("check", ok ? "pass" : "fail");
  {
    auto os = art.open("summary.txt");
    sum.write(os);
  }
  art.manifest(cfg, hash);
  sum.write(log);
  return over.check && !ok ? 3 : 0;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strategic network formation: simulation, stabilization and inference"};
  std::string command, config_path, stat, outdir;
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  int K = 0, reps = 0, threads = 1;
  bool check = false;
  app.add_option("command", command, "simulate | moments | stabilize | branching | clt | infer | sparsity");
  auto* o_config = app.add_option("--config", config_path, "JSON run config");
  auto* o_seed = app.add_option("--seed", seed, "Master seed");
  auto* o_out = app.add_option("--out", outdir, "Output directory");
  auto* o_n = app.add_option("--n", n, "Number of nodes");
  auto* o_K = app.add_option("--K", K, "Locality radius");
  auto* o_reps = app.add_option("--reps", reps, "Replications");
  auto* o_stat = app.add_option("--stat", stat, "Statistic, e.g. degree:1 or triangle");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--check", check, "Exit 3 when the command's acceptance check fails");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  }
  RunConfig cfg;
  Overrides over;
  try {
    if (*o_config) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot read config file '" + config_path + "'", "config");
      std::stringstream buf;
      buf << in.rdbuf();
      cfg = parse_run_config(buf.str());
    } else {
      if (command.empty()) throw ConfigError("give a command or --config", "command");
      cfg = default_config(command_from_string(command));
    }
    if (!command.empty()) over.command = command_from_string(command);
    if (*o_seed) over.seed = seed;
    if (*o_out) over.out = outdir;
    if (*o_n) over.n = n;
    if (*o_K) over.K = K;
    if (*o_reps) over.reps = reps;
    if (*o_stat) over.stat = stat;
    over.threads = threads;
    over.check = check;
    cfg = resolve(std::move(cfg), over);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what();
    if (!e.key().empty()) err << " [key: " << e.key() << "]";
    err << '\n';
    return 1;
  }
  try {
    return execute(cfg, over, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what();
    if (!e.key().empty()) err << " [key: " << e.key() << "]";
    err << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace netstab::cli
