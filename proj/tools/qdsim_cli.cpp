#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qdsim/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum-double lattice code experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int64_t seed_override = -1;
  int workers_override = 0;

  CLI::App* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed_override, "Override the config seed");
  run->add_option("--workers", workers_override, "Override the worker count");

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config " << config_path << "\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  qdsim::ExperimentConfig cfg;
  try {
    cfg = qdsim::config_from_json(buffer.str());
    if (seed_override >= 0) cfg.seed = static_cast<uint64_t>(seed_override);
    if (workers_override > 0) cfg.workers = workers_override;
    qdsim::validate_config(cfg);
  } catch (const qdsim::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const int code = qdsim::run_experiment(cfg, out_dir);
  if (code == 0)
    std::cout << "wrote " << out_dir << "/results.csv, results.json, transcript.log\n";
  else
    std::cerr << "experiment failed with code " << code << "\n";
  return code;
}
