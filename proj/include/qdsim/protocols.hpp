#pragma once

#include "qdsim/code_state.hpp"

namespace qdsim {

struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProtocolTranscript {
  int attempts = 1;
  std::vector<int> outcomes;
  std::vector<PauliOperator> corrections;
  bool success = true;
};

std::string transcript_to_json(const ProtocolTranscript& t, const std::string& name);

/// Open a hole pair and register the logical qudit it stores. On the
/// vacuum this encodes |0>: both occupancies zero.
int encode_qudit(CodeState& cs, SiteKind kind, int primary, int partner);
LogicalQudit& qudit(CodeState& cs, int id);
const LogicalQudit& qudit(const CodeState& cs, int id);
void discard_qudit(CodeState& cs, int id, Rng& rng);

/// X^k: a string carrying charge k from the partner row into the primary
/// row. Z^k: an anyon loop around the whole primary row, realized as the
/// product of the (unenforced) hole stabilizers it encircles.
PauliOperator logical_x_pauli(const CodeState& cs, int id, int k);
PauliOperator logical_z_pauli(const CodeState& cs, int id, int k);
void logical_x(CodeState& cs, int id, int k);
void logical_z(CodeState& cs, int id, int k);

/// Occupancy readout: sum of the primary-row hole stabilizer outcomes.
int measure_logical_z(CodeState& cs, int id, Rng& rng);

/// X-basis readout via hole-to-hole strings; with split rows every
/// cross-row pair is measured and the majority value wins (ties resolve
/// toward 0, then toward the smaller exponent).
int measure_logical_x(CodeState& cs, int id, Rng& rng);

/// Single-spin form: when the two primary holes sit across `spin` in the
/// canonical orientation, the X readout is one spin measurement.
int measure_logical_x_spin(CodeState& cs, int id, int spin, Rng& rng, int forced_outcome = -1);

/// Fresh qudit in the +1 X eigenstate: encode |0> on an adjacent pair,
/// measure X through the shared spin, rotate the outcome away with Z^m.
int prepare_x_eigenstate(CodeState& cs, SiteKind kind, Rng& rng);
int prepare_x_eigenstate_at(CodeState& cs, SiteKind kind, int primary, int partner, Rng& rng);

/// Entangling gate by braiding: carry one qudit's primary hole (contents
/// and all) around the other qudit's primary hole and back. Clockwise
/// gives diag(w^{+ab}); anticlockwise its inverse. `mover` picks which
/// hole travels (the vertex hole by default).
void braid_controlled_z(CodeState& cs, int qv, int qp, bool clockwise, Rng& rng,
                        SiteKind mover = SiteKind::vertex);

/// Teleport the source qudit onto a freshly prepared opposite-kind
/// ancilla, applying the Fourier gate in transit. The X measurement
/// outcome `m` is corrected with X^m on the destination; `forced_x`
/// pins that outcome for branch-exhaustive tests (dense engine only).
std::pair<ProtocolTranscript, int> fourier_teleport(CodeState& cs, int source, Rng& rng,
                                                    int forced_x = -1);

/// Phase-state ancilla preparation (dense engine). Measures a cluster
/// spin in the basis {Z^k |phi>} with phi telescoped from theta, recycles
/// every spin outcome with a Z correction, applies X^dagger to the
/// plaquette qudit and post-selects its occupancy on 0 (retrying with
/// fresh holes otherwise). `prepare_theta_intermediate` stops before the
/// final Fourier teleport and hands back the conjugate-basis form on the
/// vertex qudit; `prepare_ancilla_theta` finishes the job.
std::pair<ProtocolTranscript, int> prepare_theta_intermediate(CodeState& cs,
                                                              const std::vector<double>& theta,
                                                              Rng& rng, int max_attempts = 100);
std::pair<ProtocolTranscript, int> prepare_ancilla_theta(CodeState& cs,
                                                         const std::vector<double>& theta,
                                                         Rng& rng, int max_attempts = 100);

/// Repeat-until-success diagonal rotation U(theta) = sum_j e^{i theta_j}
/// |j><j| on a plaquette-type qudit. Each attempt consumes one ancilla;
/// outcome m != 0 retries with theta'_k = theta_k - theta_{k+m}.
ProtocolTranscript phase_gate_rus(CodeState& cs, int id, const std::vector<double>& theta,
                                  Rng& rng, int max_attempts = 100);

/// Controlled-X between same-kind qudits: Fourier the target (teleport),
/// braid the controlled-Z, Fourier-cube back. Returns the target's new id.
std::pair<ProtocolTranscript, int> controlled_x(CodeState& cs, int control, int target, Rng& rng);

/// Grow a row by one hole: open a neighbor, measure the shared spin and
/// flatten it to the identity element with a power of the new hole's own
/// stabilizer, so no anyons are created and the logical content spreads
/// over the enlarged hole set.
void split_hole(CodeState& cs, int id, int row, Rng& rng);

/// Dense-engine fixtures: load an arbitrary logical state onto a freshly
/// encoded |0> qudit, and read logical amplitudes back out (in the frame
/// anchored by the state's own dominant occupancy sector).
void set_logical_state(CodeState& cs, int id, const Eigen::VectorXcd& coeffs);
Eigen::VectorXcd extract_logical_amplitudes(const CodeState& cs, int id);
double logical_fidelity(const CodeState& cs, int id, const Eigen::VectorXcd& target);

/// Move one hole of a qudit, keeping the registry in step.
void move_qudit_hole(CodeState& cs, int id, int row, int index, int to, Rng& rng);

}  // namespace qdsim
