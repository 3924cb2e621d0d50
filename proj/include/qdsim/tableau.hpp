#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qdsim/pauli.hpp"
#include "qdsim/rng.hpp"

namespace qdsim {

/// Symplectic stabilizer tableau over Z_d, d prime.
///
/// Holds `rank` stabilizer generators with matched destabilizers
/// (comm(destab_i, stab_i) = 1, everything else commutes) plus one
/// symplectically paired (a, b) operator pair per encoded qudit
/// (comm(b_k, a_k) = 1). rank + encoded == n always. Stored generator
/// phases are part of the state: g|psi> = |psi> for every stabilizer g.
struct Tableau {
  int n = 0;
  int d = 2;
  std::vector<PauliOperator> stabs;
  std::vector<PauliOperator> destabs;
  std::vector<std::pair<PauliOperator, PauliOperator>> logicals;

  int rank() const { return static_cast<int>(stabs.size()); }
  int encoded_qudits() const { return static_cast<int>(logicals.size()); }
};

struct PauliMeasurementOutcome {
  int exponent = 0;  // eigenvalue w^exponent
  bool was_deterministic = false;
};

/// |00...0>: stabilizers Z_i, destabilizers X_i^{d-1}.
Tableau tableau_zero_state(int n, int d);

/// Canonical tableau of the group generated by `gens` (mutually commuting,
/// possibly dependent). Dependent generators must re-derive with phase
/// numerator 0 or the input is inconsistent. An empty list is rejected:
/// the tableau always describes a concrete (possibly encoded) state family,
/// not the trivial group.
Tableau from_generators(int n, int d, const std::vector<PauliOperator>& gens);

void apply_pauli_gate(Tableau& t, const PauliOperator& q);
void apply_fourier_gate(Tableau& t, int site, bool inverse = false);
void apply_controlled_z_gate(Tableau& t, int site_a, int site_b, int k);

/// Outcome probabilities of measuring P (requires P^d = I): a delta when P
/// is in the stabilizer group, else uniform over Z_d.
Eigen::ArrayXd tableau_outcome_distribution(const Tableau& t, const PauliOperator& p);

/// Deterministic eigenvalue exponent of P on this state, or nullopt when P
/// is not (up to phase) in the stabilizer group. Does not mutate.
std::optional<int> stabilizer_value(const Tableau& t, const PauliOperator& p);

/// Measure P: deterministic from phase bookkeeping when P is in the group,
/// otherwise a uniformly random outcome with the standard symplectic
/// update (this covers both anticommuting and logical measurements; the
/// latter grow the rank by one).
PauliMeasurementOutcome measure_pauli(Tableau& t, const PauliOperator& p, Rng& rng);

/// Force a measurement outcome (used for cross-engine trajectory sync).
/// Only legal where the outcome has nonzero probability.
PauliMeasurementOutcome project_pauli(Tableau& t, const PauliOperator& p, int outcome);

/// Test hook: verify symplectic pairing and mutual commutation.
void check_tableau(const Tableau& t);

}  // namespace qdsim
