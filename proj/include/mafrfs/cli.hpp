#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mafrfs/eval.hpp"
#include "mafrfs/select.hpp"
#include "mafrfs/serialize.hpp"

namespace mafrfs {

// Everything a command needs, fully resolved. Serialized to run.json minus
// the output path and thread count, neither of which affects results.
struct RunConfig {
  std::string command;
  std::string data;
  std::string label = "last";
  SelectorConfig selector;
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  EvalOptions eval;
  std::string rankings;

  // compare
  std::string scores;
  std::optional<double> q_alpha;
  bool lower_is_better = false;

  // sweep
  std::vector<MeasureKind> measures;
  std::vector<Framework> frameworks;
  std::vector<std::size_t> sops;
  std::vector<MarginStrategy> strategies;

  std::string out;
  std::size_t threads = 1;
};

Json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const Json& j);

// Exit codes returned by run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDegenerate = 3;
inline constexpr int kExitData = 4;

// args excludes the program name. Errors go to `err` as a single line
// "error: <Kind>: <message>".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Command bodies; they throw instead of returning exit codes.
void cmd_rank(const RunConfig& cfg, std::ostream& out);
void cmd_eval(const RunConfig& cfg, std::ostream& out);
void cmd_compare(const RunConfig& cfg, std::ostream& out);
void cmd_sweep(const RunConfig& cfg, std::ostream& out);

// Hash tying rankings to one dataset file, label choice and fold plan.
std::string config_hash(const std::string& data_path, const std::string& label, std::size_t folds,
                        std::uint64_t seed);

}  // namespace mafrfs
