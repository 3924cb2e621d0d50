#pragma once

#include <string>
#include <vector>

#include "qdsim/noise.hpp"

namespace qdsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Declarative experiment description, loaded from a single JSON document.
struct ExperimentConfig {
  std::string kind;  // protocol-demo | noise-sweep | six-spin-report | engine-crosscheck
  int d = 3;
  int lx = 3;
  int ly = 2;
  int separation = 1;
  int rows = 1;
  std::vector<double> theta;
  std::vector<double> p_grid;
  int trials = 1000;
  uint64_t seed = 1;
  std::string engine = "auto";  // dense | tableau | auto
  std::string protocol;         // for protocol-demo
  int workers = 1;
};

ExperimentConfig config_from_json(const std::string& text);
void validate_config(const ExperimentConfig& cfg);  // throws ConfigError / CapacityError

/// Scaling summary for one (separation, rows) configuration.
struct ScalingReport {
  std::vector<RatePoint> points;
  double x_exponent = std::numeric_limits<double>::quiet_NaN();
  int points_used_in_fit = 0;
};

ScalingReport run_noise_sweep(const ExperimentConfig& cfg);

/// One seeded random Clifford circuit executed on both engines with
/// synchronized measurement trajectories; true when every interleaved
/// outcome distribution and final stabilizer phase agrees exactly.
bool engines_agree_on_circuit(int lx, int ly, int d, uint64_t seed);

/// Runs the experiment and writes results.csv, results.json and
/// transcript.log under out_dir. Output bytes depend only on
/// (config, seed). Returns a process exit code: 0 success, 2 invalid
/// config, 3 capacity exceeded, 1 other failure.
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace qdsim
