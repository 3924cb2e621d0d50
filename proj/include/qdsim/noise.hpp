#pragma once

#include "qdsim/code_state.hpp"

namespace qdsim {

/// Independent per-spin faults: with probability p_x a shift-type fault
/// X^k, with probability p_z a clock-type fault Z^k, powers uniform over
/// the nonzero elements of Z_d.
struct NoiseModel {
  double p_x = 0.0;
  double p_z = 0.0;
};

struct FaultRecord {
  PauliOperator pauli;
  int weight = 0;  // number of faulted spins
};

FaultRecord sample_fault(const LatticeGeometry& g, int d, const NoiseModel& m, Rng& rng);

struct Correction {
  PauliOperator applied;
  std::vector<std::pair<int, int>> assignments;  // (anyon site, matched anyon-or-hole site)
};

/// Syndrome a fault would produce, by pure commutation algebra (exactly
/// what noiseless stabilizer measurement reports on both engines).
Syndrome syndrome_of_fault(const LatticeGeometry& g, int d, const HoleSet& holes,
                           const PauliOperator& fault);

/// Greedy nearest-assignment decoding: every visible anyon pairs with the
/// closest canceling anyon or hole by taxicab distance. Candidate order is
/// (distance, anyon-before-hole, anyon site, partner site); correction
/// strings run along canonical shortest paths.
Correction decode_greedy(const Syndrome& syn, const HoleSet& holes, const LatticeGeometry& g,
                         int d);

enum class LogicalErrorKind { none, x_type, z_type };

struct TrialResult {
  LogicalErrorKind kind = LogicalErrorKind::none;
  int x_power = 0;
  int z_power = 0;
  int fault_weight = 0;
  uint64_t seed = 0;
};

struct TrialConfig {
  int d = 3;
  int lx = 8;
  int ly = 4;
  SiteKind kind = SiteKind::vertex;
  int separation = 4;
  int rows = 1;
  NoiseModel noise;
  EngineKind engine = EngineKind::tableau;
};

/// Hole layout and logical representatives shared by all trials of a
/// configuration: primary rows grow downward from (0,0) and (s,0).
struct EncodingFrame {
  std::shared_ptr<const LatticeGeometry> geom;
  int d = 2;
  SiteKind kind = SiteKind::vertex;
  HoleSet holes;
  LogicalQudit q;
  PauliOperator x_rep;   // canonical partner-to-primary string
  PauliOperator z_loop;  // loop around the whole primary row
  std::vector<PauliOperator> cross_strings;
};

EncodingFrame make_frame(const TrialConfig& cfg);

/// Logical action of a syndrome-free residual (fault times correction):
/// the charge it injects into the primary row, and the row-loop power by
/// majority vote over the cross-row string readouts (ties resolve toward
/// no error, then the smaller exponent, mirroring majority-vote readout).
int logical_x_power(const EncodingFrame& f, const PauliOperator& residual);
int logical_z_power(const EncodingFrame& f, const PauliOperator& residual);

/// One decode cycle: sample, decode, classify. Pure function of
/// (cfg, seed). Uses the frame algebra; `run_trial_stateful` drives the
/// same cycle through an engine-backed state and must agree.
TrialResult run_trial(const TrialConfig& cfg, uint64_t seed);

/// Engine-backed validation trial. `check_x` selects the encoded basis:
/// occupancy eigenstate |0> (detects X errors) or the X eigenstate |0~>
/// (detects Z errors). On the dense engine the final state is also
/// compared against the pre-fault snapshot by fidelity.
TrialResult run_trial_stateful(const TrialConfig& cfg, uint64_t seed, bool check_x);

struct RatePoint {
  double p = 0.0;
  int trials = 0;
  int x_errors = 0;
  int z_errors = 0;
  double x_rate = 0.0, x_lo = 0.0, x_hi = 0.0;
  double z_rate = 0.0, z_lo = 0.0, z_hi = 0.0;
};

RatePoint estimate_logical_rate(const TrialConfig& cfg, int trials, uint64_t master_seed,
                                int workers = 1);

std::pair<double, double> wilson_interval(int successes, int trials);

/// Least-squares slope of log rate against log p. Needs >= 3 positive
/// points.
double fit_scaling_exponent(const std::vector<std::pair<double, double>>& rates);

struct ExhaustiveReport {
  bool found = false;
  int weight = 0;
  PauliOperator example;
};

/// Sweep every fault of weight <= max_weight of one species (clock faults
/// threaten X readout; shift faults threaten Z readout) through the
/// decoder and report the minimal weight that leaves a logical error.
ExhaustiveReport exhaustive_search_logical(const TrialConfig& cfg, int max_weight,
                                           bool clock_faults, bool detect_x);

/// Exact decoding-failure probability from enumerating all faults of the
/// chosen species up to max_weight (weights beyond that are not counted).
double enumerate_failure_probability(const TrialConfig& cfg, int max_weight, bool clock_faults,
                                     bool detect_x, double p);

}  // namespace qdsim
