#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "netstab/model.hpp"

namespace netstab::cli {

enum class Command { simulate, moments, stabilize, branching, clt, infer, sparsity };

Command command_from_string(const std::string& s);
std::string to_string(Command c);

struct RunConfig {
  ModelSpec model;
  nlohmann::json model_json;
  Command command = Command::simulate;
  std::uint64_t seed = 1;
  std::string output_dir = "netstab_out";
  nlohmann::json params = nlohmann::json::object();
};

// {"model": {...}, "command": "...", "seed": 1, "output_dir": "...",
//  "params": {...}}. Unknown keys anywhere are ConfigErrors.
RunConfig parse_run_config(const std::string& text);
RunConfig default_config(Command command);

struct Overrides {
  std::optional<Command> command;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::int64_t> n;
  std::optional<int> K;
  std::optional<int> reps;
  std::optional<std::string> stat;
  int threads = 1;
  bool check = false;
};

// Applies overrides, fills parameter defaults and rejects unknown parameters.
RunConfig resolve(RunConfig config, const Overrides& over);

// Runs the resolved config and writes artifacts plus manifest.txt.
// Returns 0, or 3 when --check fails. Library errors propagate.
int execute(const RunConfig& config, const Overrides& over, std::ostream& log);

// Full command line: exit 0 ok, 1 config error, 2 runtime error, 3 check failure.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace netstab::cli
