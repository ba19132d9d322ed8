#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace netstab::cli;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "netstab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("netstab_cli_" + name);
  fs::remove_all(p);
  return p;
}

constexpr const char* kModel =
    R"({"d":1,"T":0,"kappa":1,"v":{"intercept":0},"v0":{"intercept":0},"shock_law":"logistic","s_kind":"none"})";

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = fs::path(::testing::TempDir()) / ("netstab_cfg_" + name + ".json");
  std::ofstream(p) << text;
  return p;
}

// Data artifacts: everything except the human-readable summary and manifest.
std::vector<std::pair<std::string, std::string>> data_files(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name == "summary.txt") continue;
    out.emplace_back(name, slurp(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Cli, SimulateIsReproducible) {
  const fs::path a = scratch("sim_a"), b = scratch("sim_b");
  ASSERT_EQ(run({"simulate", "--n", "100", "--seed", "7", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"simulate", "--n", "100", "--seed", "7", "--out", b.string()}).code, 0);
  const std::string edges = slurp(a / "edges.csv");
  EXPECT_EQ(edges.substr(0, edges.find('\n')), "period,i,j");
  EXPECT_EQ(edges, slurp(b / "edges.csv"));
  EXPECT_EQ(slurp(a / "manifest.txt"), slurp(b / "manifest.txt"));
  const fs::path c = scratch("sim_c");
  ASSERT_EQ(run({"simulate", "--n", "100", "--seed", "8", "--out", c.string()}).code, 0);
  EXPECT_NE(edges, slurp(c / "edges.csv"));
}

TEST(Cli, StabilizeVerifiesEveryNode) {
  const fs::path dir = scratch("stab");
  const CliRun r = run({"stabilize", "--n", "200", "--K", "1", "--stat", "degree", "--check", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(dir / "stab.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "node,J_size,radius,verified");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(line.back(), '1') << line;
  }
  EXPECT_EQ(rows, 200);
  const std::string manifest = slurp(dir / "manifest.txt");
  EXPECT_NE(manifest.find("config_hash=fnv1a64:"), std::string::npos);
  EXPECT_NE(manifest.find("artifact.stab.csv="), std::string::npos);
  EXPECT_NE(manifest.find("seed=1"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitOneAndNameTheKey) {
  const fs::path missing = write_config("missing", R"({"model":{"d":1,"T":1,"v":{},"v0":{},
    "shock_law":"logistic","s_kind":"none"},"command":"simulate"})");
  CliRun r = run({"--config", missing.string(), "--out", scratch("err1").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("kappa"), std::string::npos) << r.err;
  const fs::path unknown = write_config("unknown", std::string(R"({"model":)") + kModel + R"(,"command":"simulate","params":{"nodes":5}})");
  r = run({"--config", unknown.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("params.nodes"), std::string::npos) << r.err;
  r = run({"explode"});
  EXPECT_EQ(r.code, 1);
  r = run({"moments", "--stat", "kstar", "--out", scratch("err2").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("stat"), std::string::npos);
  r = run({"simulate", "--n", "abc"});
  EXPECT_EQ(r.code, 1);
  r = run({"--config", "/nonexistent/cfg.json"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, RuntimeErrorsExitTwo) {
  const fs::path cfg = write_config("super", std::string(R"({"model":)") + kModel + R"(,"command":"branching",
    "params":{"offspring_mean":3.0,"population_cap":200,"reps":50,"norm":false}})");
  const CliRun r = run({"--config", cfg.string(), "--out", scratch("super").string()});
  EXPECT_EQ(r.code, 2) << r.err;
  EXPECT_NE(r.err.find("population cap"), std::string::npos) << r.err;
}

TEST(Cli, FailedCheckExitsThree) {
  // Forty replications cannot bring the KS distance under 0.04.
  const CliRun r = run({"clt", "--n", "100", "--reps", "40", "--check", "--out", scratch("reject").string()});
  EXPECT_EQ(r.code, 3) << r.out << r.err;
}

TEST(Cli, ArtifactsIndependentOfThreads) {
  for (const char* cmd : {"clt", "stabilize", "branching"}) {
    const fs::path a = scratch(std::string(cmd) + "_t1"), b = scratch(std::string(cmd) + "_t8");
    std::vector<std::string> base{cmd, "--seed", "3", "--n", "150", "--reps", "40"};
    if (std::string(cmd) == "stabilize") base = {cmd, "--seed", "3", "--n", "150"};
    auto args_a = base, args_b = base;
    args_a.insert(args_a.end(), {"--threads", "1", "--out", a.string()});
    args_b.insert(args_b.end(), {"--threads", "8", "--out", b.string()});
    const CliRun ra = run(args_a), rb = run(args_b);
    ASSERT_EQ(ra.code, 0) << cmd << ra.err;
    ASSERT_EQ(rb.code, 0) << cmd << rb.err;
    EXPECT_EQ(data_files(a), data_files(b)) << cmd;
  }
}

TEST(Cli, HashIsFnv1a) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}
