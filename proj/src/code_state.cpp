#include "qdsim/code_state.hpp"

#include <stdexcept>

namespace qdsim {

bool Syndrome::empty() const {
  for (const auto& [site, g] : vertex_charges)
    if (g != 0) return false;
  for (const auto& [site, g] : plaquette_fluxes)
    if (g != 0) return false;
  return true;
}

int Syndrome::charge(int v) const {
  auto it = vertex_charges.find(v);
  return it == vertex_charges.end() ? 0 : it->second;
}

int Syndrome::flux(int p) const {
  auto it = plaquette_fluxes.find(p);
  return it == plaquette_fluxes.end() ? 0 : it->second;
}

PauliOperator site_stabilizer(const CodeState& cs, SiteKind kind, int site) {
  return kind == SiteKind::vertex ? vertex_stabilizer(*cs.geom, cs.d, site)
                                  : plaquette_stabilizer(*cs.geom, cs.d, site);
}

void apply_pauli_op(CodeState& cs, const PauliOperator& p) {
  if (cs.is_dense())
    apply_pauli(cs.dense(), p);
  else
    apply_pauli_gate(cs.tableau(), p);
}

int measure_pauli_op(CodeState& cs, const PauliOperator& p, Rng& rng) {
  if (cs.is_dense()) return measure_pauli(cs.dense(), p, rng).outcome;
  return measure_pauli(cs.tableau(), p, rng).exponent;
}

void project_pauli_op(CodeState& cs, const PauliOperator& p, int outcome) {
  if (cs.is_dense())
    project_pauli(cs.dense(), p, outcome);
  else
    project_pauli(cs.tableau(), p, outcome);
}

Eigen::ArrayXd pauli_op_distribution(const CodeState& cs, const PauliOperator& p) {
  if (cs.is_dense()) return pauli_outcome_probabilities(cs.dense(), p);
  return tableau_outcome_distribution(cs.tableau(), p);
}

CodeState ground_state(std::shared_ptr<const LatticeGeometry> geom, int d, EngineKind engine,
                       Rng& rng) {
  CodeState cs;
  cs.geom = std::move(geom);
  cs.d = d;
  const int n = cs.geom->n_edges();
  if (engine == EngineKind::dense)
    cs.engine = make_zero_state(n, d);
  else
    cs.engine = tableau_zero_state(n, d);

  // |0...0> already satisfies every plaquette stabilizer and both
  // non-contractible clock loops. Fix the vertex sector: measure each
  // A(v), v != reference, and haul the revealed charge into the
  // reference vertex. Charge conservation zeroes the reference for free.
  const int reference = 0;
  for (int v = 1; v < cs.geom->n_vertices(); ++v) {
    const PauliOperator a = vertex_stabilizer(*cs.geom, d, v);
    const int got = measure_pauli_op(cs, a, rng);
    if (got != 0) {
      // String into v carrying -got cancels the charge at v and deposits
      // it at the reference.
      const auto path = shortest_site_path(*cs.geom, reference, v);
      const PauliOperator str =
          string_operator(*cs.geom, d, SiteKind::vertex, path, GroupElement(-got, d));
      apply_pauli_op(cs, str);
    }
  }
  return cs;
}

void open_hole(CodeState& cs, SiteKind kind, int site) {
  auto& set = kind == SiteKind::vertex ? cs.holes.vertices : cs.holes.plaquettes;
  if (set.count(site)) throw std::invalid_argument("code: hole already open");
  set.insert(site);
}

int close_hole(CodeState& cs, SiteKind kind, int site, Rng& rng) {
  auto& set = kind == SiteKind::vertex ? cs.holes.vertices : cs.holes.plaquettes;
  if (!set.count(site)) throw std::invalid_argument("code: hole not open");
  const int absorbed = measure_pauli_op(cs, site_stabilizer(cs, kind, site), rng);
  set.erase(site);
  return absorbed;
}

Syndrome extract_syndrome(const CodeState& cs) {
  Syndrome syn;
  auto definite_value = [&](const PauliOperator& p) -> int {
    if (cs.is_dense()) {
      const Eigen::ArrayXd probs = pauli_outcome_probabilities(cs.dense(), p);
      for (int m = 0; m < cs.d; ++m)
        if (probs[m] > 1.0 - 1e-9) return m;
      throw std::runtime_error("code: stabilizer has no definite value");
    }
    const auto v = stabilizer_value(cs.tableau(), p);
    if (!v) throw std::runtime_error("code: stabilizer has no definite value");
    return *v;
  };
  for (int v = 0; v < cs.geom->n_vertices(); ++v) {
    if (cs.holes.is_open(SiteKind::vertex, v)) continue;
    const int g = definite_value(vertex_stabilizer(*cs.geom, cs.d, v));
    if (g != 0) syn.vertex_charges[v] = g;
  }
  for (int p = 0; p < cs.geom->n_plaquettes(); ++p) {
    if (cs.holes.is_open(SiteKind::plaquette, p)) continue;
    const int g = definite_value(plaquette_stabilizer(*cs.geom, cs.d, p));
    if (g != 0) syn.plaquette_fluxes[p] = g;
  }
  return syn;
}

int correction_power(const PauliOperator& observable, const PauliOperator& corrector, int g) {
  const int kappa = commutation_exponent(observable, corrector);
  if (kappa == 0) throw std::invalid_argument("code: corrector does not move the observable");
  return mod_pos(-static_cast<int64_t>(g) * inv_mod(kappa, observable.d), observable.d);
}

void move_hole(CodeState& cs, SiteKind kind, int from, int to, Rng& rng) {
  if (!cs.holes.is_open(kind, from)) throw std::invalid_argument("code: source is not a hole");
  if (cs.holes.is_open(kind, to)) throw std::invalid_argument("code: destination is occupied");
  const auto edge = connecting_edge(*cs.geom, kind, from, to);
  if (!edge) throw std::invalid_argument("code: hole moves are between adjacent sites");

  open_hole(cs, kind, to);

  // Delocalize the occupancy over {from, to}: the edge observable
  // anticommutes with both site stabilizers (opposite signs), so its
  // measurement merges the holes without learning the total charge.
  const PauliOperator edge_obs = kind == SiteKind::vertex
                                     ? pauli_z(cs.geom->n_edges(), cs.d, *edge)
                                     : pauli_x(cs.geom->n_edges(), cs.d, *edge);
  measure_pauli_op(cs, edge_obs, rng);

  // Split again: read the old site and push what it shows across the edge.
  const PauliOperator stab_from = site_stabilizer(cs, kind, from);
  const int revealed = measure_pauli_op(cs, stab_from, rng);
  if (revealed != 0) {
    PauliOperator mover = pauli_identity(cs.geom->n_edges(), cs.d);
    if (kind == SiteKind::vertex)
      mover.z[*edge] = 1;
    else
      mover.x[*edge] = 1;
    const int t = correction_power(stab_from, mover, revealed);
    apply_pauli_op(cs, pauli_power(mover, t));
  }

  auto& set = kind == SiteKind::vertex ? cs.holes.vertices : cs.holes.plaquettes;
  set.erase(from);
}

}  // namespace qdsim
