// pdolab: experiment harness for pseudo-differential operators of type 1,1
// on a discretized torus.
//
//   pdolab run <config.json> [--out DIR] [--seed S] [--grid-M M]
//   pdolab report <DIR>
//   pdolab list
//
// Exit codes: 0 all gated verdicts pass; 1 a gated verdict failed (named on
// stderr); 2 unknown experiment, invalid config or missing manifest.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "pdo/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for type 1,1 pseudo-differential operators"};
  app.require_subcommand(1);

  std::string config_path, out_dir, report_dir;
  std::uint64_t seed = 0;
  int grid_M = 0;
  bool seed_set = false, m_set = false;

  CLI::App* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--grid-M", grid_M, "override points per axis")
      ->each([&](const std::string&) { m_set = true; });

  CLI::App* rep = app.add_subcommand("report", "print verdicts from a manifest");
  rep->add_option("dir", report_dir, "experiment output directory")->required();

  CLI::App* list = app.add_subcommand("list", "list known experiments");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& n : pdo::experiment_names()) std::printf("%s\n", n.c_str());
    return 0;
  }
  if (rep->parsed()) return pdo::report_experiment(report_dir);

  pdo::ExperimentConfig cfg;
  try {
    cfg = pdo::ExperimentConfig::from_json_file(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed_set) cfg.seed = seed;
  if (m_set) cfg.M = grid_M;

  std::string error;
  int rc = pdo::run_experiment(cfg, &error);
  if (rc != 0) std::fprintf(stderr, "error: %s\n", error.c_str());
  if (rc == 0 && !cfg.out_dir.empty())
    pdo::report_experiment(cfg.out_dir);
  else if (rc == 0)
    pdo::report_experiment("pdolab-out/" + cfg.experiment);
  return rc;
}
