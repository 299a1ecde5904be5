#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "towernorm/tables.hpp"

namespace towernorm {

// One experiment invocation; shared by the command line tool and the
// config-file runner.  String fields keep the wire syntax (words, growth
// specs, k lists) so a config file and flags read identically.
struct ExperimentConfig {
  std::string experiment;
  std::string backend = "ag";  // ag | sl2 | file
  int levels = 2;
  std::vector<int> unwind;     // per cover step; 0 or missing = full
  std::int64_t modulus = 3;
  std::string path;            // permutation file for the file backend
  std::string element = "0.25*a+0.25*A+0.25*b+0.25*B";
  int level = -1;              // -1 = top level
  int radius = -1;             // ball / lifting radius; -1 = per-experiment default
  std::string gamma = "nu";    // iota | nu | <growth file>
  std::string gamma2 = "iota";
  std::string k = "auto";      // folner k list / interpolation multiplier
  std::int64_t budget = -1;    // -1 = per-experiment default
  std::string strategy = "auto";
  std::uint64_t seed = 1;
  double tol = 1e-9;
  bool deficiency = false;
  std::string out;             // empty = stdout only
  std::string format = "csv";
};

// key = value lines, '#' comments; keys match the config field names.
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

struct RunResult {
  Table table;
  std::vector<std::string> failures;  // embedded assertion failures
  bool ok() const { return failures.empty(); }
};

// Executes one experiment; deterministic for a fixed config.
RunResult run_experiment(const ExperimentConfig& cfg);

// Renders, optionally writes cfg.out, and returns the process exit code
// (0 ok, 1 assertion failures).
int run_and_emit(const ExperimentConfig& cfg, std::string* rendered = nullptr);

}  // namespace towernorm
