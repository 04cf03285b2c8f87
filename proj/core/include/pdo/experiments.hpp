#pragma once

// Named, config-driven experiments wiring the modules together.  Each
// experiment writes a manifest.json (config echo, verdicts, wall time),
// deterministic CSV tables and, where natural, `.cplx` arrays into the
// output directory.  Gated verdict failures are reported through the exit
// code so the harness can be scripted.

#include <string>
#include <vector>

namespace pdo {

struct ExperimentConfig {
  std::string experiment;
  int n = 1;
  int M = 1024;
  double r = 1.0, R = 2.0;
  int h = 3;
  // symbol spec
  std::string symbol_kind = "ching";
  double d = 0.0;
  int sigma = 0;
  int theta = 1;
  int jmax = -1;  // -1: maximal admissible
  // probe parameters
  std::vector<std::string> psi_list = {"default", "wide"};
  int m_max = -1;  // -1: saturation + 2
  double N = 0.0;
  double tau = 1e-10;
  std::uint64_t seed = 0x5eed0001u;
  std::string out_dir;

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);
};

struct Verdict {
  std::string name;
  double measured = 0;
  std::string relation;  // e.g. "<=", ">=", "within"
  double target = 0;
  double tolerance = 0;
  bool pass = false;
  bool gated = true;
};

struct ExperimentOutcome {
  std::vector<Verdict> verdicts;
  std::vector<std::string> tables;  // CSV file names
  double wall_ms = 0;
  bool all_gated_pass = true;
  std::string first_failure;
};

std::vector<std::string> experiment_names();

// Runs and persists; returns the process exit code (0 pass, 1 gated failure,
// 2 invalid config / unknown experiment).
int run_experiment(const ExperimentConfig& cfg, std::string* error = nullptr);

// Prints the verdict table from a previously written manifest; never
// recomputes.  Returns 0, or 2 when the manifest is missing or corrupt.
int report_experiment(const std::string& out_dir);

}  // namespace pdo
