#pragma once

#include <map>
#include <memory>
#include <variant>

#include "qdsim/dense.hpp"
#include "qdsim/lattice.hpp"
#include "qdsim/tableau.hpp"

namespace qdsim {

enum class EngineKind { dense, tableau };

/// Vertices and plaquettes whose stabilizer is not enforced.
struct HoleSet {
  std::set<int> vertices;
  std::set<int> plaquettes;

  bool is_open(SiteKind kind, int site) const {
    return kind == SiteKind::vertex ? vertices.count(site) > 0 : plaquettes.count(site) > 0;
  }
};

/// Eigenvalue exponents of the enforced stabilizers: charge(v) = g means
/// A(v) reads w^g. Only closed sites appear.
struct Syndrome {
  std::map<int, int> vertex_charges;
  std::map<int, int> plaquette_fluxes;

  bool empty() const;
  int charge(int v) const;
  int flux(int p) const;
};

/// A logical qudit stored in holes. row1 starts at the primary hole
/// (v1 / p1), row2 at its partner (v2 / p2); splits append to the rows.
struct LogicalQudit {
  SiteKind kind = SiteKind::vertex;
  std::vector<int> row1;
  std::vector<int> row2;
  int d = 2;
};

/// Lattice code state: geometry, hole bookkeeping, the engine-backed
/// quantum state and the registry of encoded qudits.
struct CodeState {
  std::shared_ptr<const LatticeGeometry> geom;
  int d = 2;
  HoleSet holes;
  std::variant<StateVector, Tableau> engine;
  std::vector<LogicalQudit> qudits;

  bool is_dense() const { return std::holds_alternative<StateVector>(engine); }
  StateVector& dense() { return std::get<StateVector>(engine); }
  const StateVector& dense() const { return std::get<StateVector>(engine); }
  Tableau& tableau() { return std::get<Tableau>(engine); }
  const Tableau& tableau() const { return std::get<Tableau>(engine); }
};

PauliOperator site_stabilizer(const CodeState& cs, SiteKind kind, int site);

/// The anyonic vacuum: every stabilizer (and both non-contractible clock
/// loops) at eigenvalue w^0. Built by measuring each vertex stabilizer
/// from |0...0> and routing the anyons it reveals into a reference vertex;
/// the construction is measurement-based but the result is the unique
/// all-zero stabilizer state, identical on both engines.
CodeState ground_state(std::shared_ptr<const LatticeGeometry> geom, int d, EngineKind engine,
                       Rng& rng);

void apply_pauli_op(CodeState& cs, const PauliOperator& p);
int measure_pauli_op(CodeState& cs, const PauliOperator& p, Rng& rng);
/// Forced-outcome collapse (dense: Born projection; tableau: symplectic).
void project_pauli_op(CodeState& cs, const PauliOperator& p, int outcome);
Eigen::ArrayXd pauli_op_distribution(const CodeState& cs, const PauliOperator& p);

void open_hole(CodeState& cs, SiteKind kind, int site);
/// Measure the site stabilizer, report the absorbed anyon value, and
/// re-enforce the site. The state is not otherwise modified, so closing
/// over a nonzero occupancy leaves a visible anyon there.
int close_hole(CodeState& cs, SiteKind kind, int site, Rng& rng);

/// Stabilizer values on all closed sites. Nondestructive: every enforced
/// stabilizer must have a definite value (which holds for code states hit
/// by Pauli faults); an indefinite one raises.
Syndrome extract_syndrome(const CodeState& cs);

/// Move a hole (with its anyonic contents, superpositions included) to an
/// adjacent free site: delocalize across the shared edge by measuring the
/// edge spin, measure the old site's stabilizer, and push the revealed
/// occupancy into the destination with a feedback string.
void move_hole(CodeState& cs, SiteKind kind, int from, int to, Rng& rng);

/// Charge value a correction power t must satisfy so that applying C^t
/// shifts the measured value of observable O by -g: t = -g / comm(O, C).
int correction_power(const PauliOperator& observable, const PauliOperator& corrector, int g);

}  // namespace qdsim
