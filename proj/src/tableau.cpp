#include "qdsim/tableau.hpp"

#include <stdexcept>

namespace qdsim {

namespace {

void check_prime(int d) {
  if (!is_prime(d)) throw std::invalid_argument("tableau: d must be prime");
}

void check_operator(const Tableau& t, const PauliOperator& p) {
  if (p.sites() != t.n || p.d != t.d) throw std::invalid_argument("tableau: operator shape mismatch");
}

bool same_xz(const PauliOperator& a, const PauliOperator& b) {
  return (a.x == b.x).all() && (a.z == b.z).all();
}

bool zero_xz(const PauliOperator& p) { return (p.x == 0).all() && (p.z == 0).all(); }

/// Multiply `p` by pair elements until it commutes with both members of
/// every pair in `pairs`. Pairs satisfy comm(second, first) = 1.
PauliOperator reduce_against(PauliOperator p,
                             const std::vector<std::pair<PauliOperator, PauliOperator>>& pairs) {
  for (const auto& [a, b] : pairs) {
    const int cb = commutation_exponent(p, b);
    if (cb != 0) p = compose(p, pauli_power(a, cb));  // comm(a,b) = -1
    const int ca = commutation_exponent(p, a);
    if (ca != 0) p = compose(p, pauli_power(b, mod_pos(-ca, p.d)));  // comm(b,a) = +1
  }
  return p;
}

/// Symplectically pair up a pool of mutually reduced operators. Consumed
/// by from_generators (logical completion) and by logical measurements.
std::vector<std::pair<PauliOperator, PauliOperator>> pair_up(std::vector<PauliOperator> pool,
                                                             int d) {
  std::vector<std::pair<PauliOperator, PauliOperator>> pairs;
  while (!pool.empty()) {
    PauliOperator a = reduce_against(pool.front(), pairs);
    pool.erase(pool.begin());
    if (zero_xz(a)) continue;
    bool paired = false;
    for (size_t j = 0; j < pool.size(); ++j) {
      PauliOperator b = reduce_against(pool[j], pairs);
      const int r = commutation_exponent(b, a);
      if (r != 0) {
        pool.erase(pool.begin() + static_cast<long>(j));
        pairs.emplace_back(a, pauli_power(b, inv_mod(r, d)));
        paired = true;
        break;
      }
    }
    if (!paired) throw std::logic_error("tableau: symplectic completion failed");
  }
  return pairs;
}

/// Rebuild the encoded-pair completion from the elementary operators,
/// given the current stab/destab pairs.
void complete_logicals(Tableau& t) {
  std::vector<std::pair<PauliOperator, PauliOperator>> pairs;
  for (int i = 0; i < t.rank(); ++i) pairs.emplace_back(t.stabs[i], t.destabs[i]);
  std::vector<PauliOperator> pool;
  for (int site = 0; site < t.n; ++site) {
    pool.push_back(reduce_against(pauli_x(t.n, t.d, site), pairs));
    pool.push_back(reduce_against(pauli_z(t.n, t.d, site), pairs));
  }
  t.logicals = pair_up(std::move(pool), t.d);
  if (t.rank() + t.encoded_qudits() != t.n)
    throw std::logic_error("tableau: rank accounting failed");
}

std::optional<int> in_group_value(const Tableau& t, const PauliOperator& p) {
  PauliOperator rep = pauli_identity(t.n, t.d);
  for (int i = 0; i < t.rank(); ++i) {
    const int a = commutation_exponent(t.destabs[i], p);
    if (a != 0) rep = compose(rep, pauli_power(t.stabs[i], a));
  }
  if (!same_xz(rep, p)) return std::nullopt;
  const int dnu = mod_pos(p.phase - rep.phase, 2 * t.d);
  if (dnu % 2 != 0) throw std::logic_error("tableau: non-integer eigenvalue exponent");
  return dnu / 2;
}

/// Symplectic update for an outcome that was not determined: the state
/// collapses onto the w^m eigenspace of P. Pivot on an anticommuting
/// stabilizer when one exists, otherwise extract a pivot from the encoded
/// (logical) space and grow the rank.
void collapse(Tableau& t, const PauliOperator& p, int m) {
  PauliOperator new_stab = p;
  new_stab.phase = mod_pos(new_stab.phase - 2 * m, 2 * t.d);

  int pivot = -1;
  for (int i = 0; i < t.rank(); ++i)
    if (commutation_exponent(p, t.stabs[i]) != 0) {
      pivot = i;
      break;
    }

  if (pivot >= 0) {
    const PauliOperator old = t.stabs[pivot];
    const int c = commutation_exponent(p, old);
    const int c_inv = inv_mod(c, t.d);
    auto fix = [&](PauliOperator& g) {
      const int e = commutation_exponent(p, g);
      if (e != 0) g = compose(g, pauli_power(old, mod_pos(-static_cast<int64_t>(e) * c_inv, t.d)));
    };
    for (int i = 0; i < t.rank(); ++i) {
      if (i != pivot) fix(t.stabs[i]);
      fix(t.destabs[i]);
    }
    for (auto& [a, b] : t.logicals) {
      fix(a);
      fix(b);
    }
    t.destabs[pivot] = pauli_power(old, mod_pos(-c_inv, t.d));
    t.stabs[pivot] = new_stab;
    return;
  }

  // Logical measurement: find a partner among the encoded pairs, then
  // rebuild the completion around the grown stabilizer group.
  PauliOperator q = pauli_identity(t.n, t.d);
  bool found = false;
  for (auto& [a, b] : t.logicals) {
    int r = commutation_exponent(a, p);
    if (r != 0) {
      q = pauli_power(a, inv_mod(r, t.d));
      found = true;
      break;
    }
    r = commutation_exponent(b, p);
    if (r != 0) {
      q = pauli_power(b, inv_mod(r, t.d));
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("tableau: no symplectic partner for logical measurement");
  // Old destabilizers may carry the group components of P; make them
  // commute with the new stabilizer (q commutes with everything placed,
  // so this breaks no existing pairing).
  for (auto& dst : t.destabs) {
    const int e = commutation_exponent(p, dst);
    if (e != 0) dst = compose(dst, pauli_power(q, e));
  }
  t.stabs.push_back(new_stab);
  t.destabs.push_back(q);
  complete_logicals(t);
}

}  // namespace

Tableau tableau_zero_state(int n, int d) {
  check_prime(d);
  if (n < 1) throw std::invalid_argument("tableau: need n >= 1");
  Tableau t;
  t.n = n;
  t.d = d;
  for (int i = 0; i < n; ++i) {
    t.stabs.push_back(pauli_z(n, d, i));
    t.destabs.push_back(pauli_x(n, d, i, d - 1));  // comm(X^{d-1}, Z) = 1
  }
  return t;
}

Tableau from_generators(int n, int d, const std::vector<PauliOperator>& gens) {
  check_prime(d);
  if (gens.empty())
    throw std::invalid_argument("tableau: empty generator list does not define a state");
  Tableau t;
  t.n = n;
  t.d = d;
  for (const auto& g : gens) check_operator(t, g);
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = i + 1; j < gens.size(); ++j)
      if (commutation_exponent(gens[i], gens[j]) != 0)
        throw std::invalid_argument("tableau: generators do not commute");

  std::vector<std::pair<PauliOperator, PauliOperator>> pairs;
  for (const auto& g : gens) {
    // Only destabilizer commutations can be nonzero here (stabilizers are
    // generator products), and killing them multiplies by stabilizers, so
    // the reduced generator stays inside the group.
    PauliOperator gr = g;
    for (const auto& [s, dst] : pairs) {
      const int c = commutation_exponent(gr, dst);
      if (c != 0) gr = compose(gr, pauli_power(s, c));
    }
    if (zero_xz(gr)) {
      if (gr.phase != 0)
        throw std::invalid_argument("tableau: dependent generators with inconsistent phase");
      continue;
    }
    bool paired = false;
    for (int site = 0; site < n && !paired; ++site) {
      for (int which = 0; which < 2 && !paired; ++which) {
        PauliOperator cand =
            which == 0 ? pauli_x(n, d, site) : pauli_z(n, d, site);
        cand = reduce_against(cand, pairs);
        const int r = commutation_exponent(cand, gr);
        if (r != 0) {
          pairs.emplace_back(gr, pauli_power(cand, inv_mod(r, d)));
          paired = true;
        }
      }
    }
    if (!paired) throw std::logic_error("tableau: no destabilizer candidate found");
  }

  for (const auto& [s, dst] : pairs) {
    t.stabs.push_back(s);
    t.destabs.push_back(dst);
  }
  complete_logicals(t);
  return t;
}

void apply_pauli_gate(Tableau& t, const PauliOperator& q) {
  check_operator(t, q);
  for (auto& g : t.stabs) g = pauli_gate_conjugate(g, q);
  for (auto& g : t.destabs) g = pauli_gate_conjugate(g, q);
  for (auto& [a, b] : t.logicals) {
    a = pauli_gate_conjugate(a, q);
    b = pauli_gate_conjugate(b, q);
  }
}

void apply_fourier_gate(Tableau& t, int site, bool inverse) {
  if (site < 0 || site >= t.n) throw std::invalid_argument("tableau: site out of range");
  for (auto& g : t.stabs) g = fourier_conjugate(g, site, inverse);
  for (auto& g : t.destabs) g = fourier_conjugate(g, site, inverse);
  for (auto& [a, b] : t.logicals) {
    a = fourier_conjugate(a, site, inverse);
    b = fourier_conjugate(b, site, inverse);
  }
}

void apply_controlled_z_gate(Tableau& t, int site_a, int site_b, int k) {
  if (site_a < 0 || site_a >= t.n || site_b < 0 || site_b >= t.n)
    throw std::invalid_argument("tableau: site out of range");
  for (auto& g : t.stabs) g = controlled_z_conjugate(g, site_a, site_b, k);
  for (auto& g : t.destabs) g = controlled_z_conjugate(g, site_a, site_b, k);
  for (auto& [a, b] : t.logicals) {
    a = controlled_z_conjugate(a, site_a, site_b, k);
    b = controlled_z_conjugate(b, site_a, site_b, k);
  }
}

Eigen::ArrayXd tableau_outcome_distribution(const Tableau& t, const PauliOperator& p) {
  check_operator(t, p);
  if (!has_omega_spectrum(p))
    throw std::invalid_argument("tableau: measured Pauli must satisfy P^d = I");
  for (const auto& s : t.stabs)
    if (commutation_exponent(p, s) != 0) return Eigen::ArrayXd::Constant(t.d, 1.0 / t.d);
  if (auto v = in_group_value(t, p)) {
    Eigen::ArrayXd probs = Eigen::ArrayXd::Zero(t.d);
    probs[*v] = 1.0;
    return probs;
  }
  return Eigen::ArrayXd::Constant(t.d, 1.0 / t.d);
}

std::optional<int> stabilizer_value(const Tableau& t, const PauliOperator& p) {
  check_operator(t, p);
  if (!has_omega_spectrum(p))
    throw std::invalid_argument("tableau: measured Pauli must satisfy P^d = I");
  for (const auto& s : t.stabs)
    if (commutation_exponent(p, s) != 0) return std::nullopt;
  return in_group_value(t, p);
}

PauliMeasurementOutcome measure_pauli(Tableau& t, const PauliOperator& p, Rng& rng) {
  if (auto v = stabilizer_value(t, p)) return {*v, true};
  const int m = rng.uniform_int(t.d);
  collapse(t, p, m);
  return {m, false};
}

PauliMeasurementOutcome project_pauli(Tableau& t, const PauliOperator& p, int outcome) {
  outcome = mod_pos(outcome, t.d);
  if (auto v = stabilizer_value(t, p)) {
    if (*v != outcome) throw std::invalid_argument("tableau: forced outcome has probability 0");
    return {*v, true};
  }
  collapse(t, p, outcome);
  return {outcome, false};
}

void check_tableau(const Tableau& t) {
  std::vector<PauliOperator> all;
  std::vector<int> partner;  // index of the symplectic partner, -1 if none yet
  for (int i = 0; i < t.rank(); ++i) {
    all.push_back(t.stabs[i]);
    all.push_back(t.destabs[i]);
  }
  for (const auto& [a, b] : t.logicals) {
    all.push_back(a);
    all.push_back(b);
  }
  partner.resize(all.size());
  for (size_t i = 0; i < all.size(); ++i) partner[i] = static_cast<int>(i ^ 1);
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = 0; j < all.size(); ++j) {
      const int c = commutation_exponent(all[i], all[j]);
      int expected = 0;
      if (partner[i] == static_cast<int>(j)) expected = (i % 2 == 1) ? 1 : mod_pos(-1, t.d);
      if (c != expected) throw std::logic_error("tableau: symplectic pairing violated");
    }
  if (t.rank() + t.encoded_qudits() != t.n) throw std::logic_error("tableau: rank accounting violated");
}

}  // namespace qdsim
