#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>

#include "qdsim/zd.hpp"

namespace qdsim {

/// An n-site generalized Pauli operator over qudits of dimension d:
///
///   exp(i*pi*phase/d) * prod_i  X_i^{x[i]} Z_i^{z[i]}
///
/// in normal order (every shift factor to the left of the clock factor on
/// its site). X is the cyclic shift |g> -> |g+1>, Z the clock
/// |g> -> w^g |g> with w = exp(2*pi*i/d); they obey Z X = w X Z.
/// Powers live in [0, d), the phase numerator in [0, 2d) (see
/// PhaseExponent for why 2d). Values are immutable in spirit: every
/// operation returns a fresh operator.
struct PauliOperator {
  int d = 2;
  Eigen::ArrayXi x;  // shift powers per site
  Eigen::ArrayXi z;  // clock powers per site
  int phase = 0;     // numerator of exp(i*pi*phase/d)

  int sites() const { return static_cast<int>(x.size()); }

  bool operator==(const PauliOperator& o) const {
    return d == o.d && phase == o.phase && (x == o.x).all() && (z == o.z).all();
  }
};

PauliOperator pauli_identity(int n, int d);
PauliOperator pauli_x(int n, int d, int site, int power = 1);
PauliOperator pauli_z(int n, int d, int site, int power = 1);
PauliOperator make_pauli(int d, const Eigen::ArrayXi& x, const Eigen::ArrayXi& z, int phase = 0);

bool is_identity(const PauliOperator& p);
int pauli_weight(const PauliOperator& p);

/// Normal-ordered product P*Q with the reordering phase accumulated
/// (each Z^a passing an X^b contributes w^{ab}).
PauliOperator compose(const PauliOperator& p, const PauliOperator& q);

/// c with P*Q = w^c Q*P; the symplectic form sum_i (zP_i xQ_i - xP_i zQ_i) mod d.
int commutation_exponent(const PauliOperator& p, const PauliOperator& q);

PauliOperator pauli_inverse(const PauliOperator& p);
PauliOperator pauli_power(const PauliOperator& p, int64_t k);

/// F P F^dag (or F^dag P F) on one site. Convention, fixed against the
/// dense engine: F X F^dag = Z and F Z F^dag = X^{-1}.
PauliOperator fourier_conjugate(const PauliOperator& p, int site, bool inverse = false);

/// CZ^k P CZ^-k for the controlled phase gate diag(w^{k*a*b}) on (a, b).
PauliOperator controlled_z_conjugate(const PauliOperator& p, int site_a, int site_b, int k);

/// Q P Q^{-1} for a Pauli Q: P picks up w^{-comm(P,Q)}.
PauliOperator pauli_gate_conjugate(const PauliOperator& p, const PauliOperator& q);

/// True when P^d is exactly the identity, i.e. P's spectrum is the d-th
/// roots of unity and "measuring P" yields exponents mod d.
bool has_omega_spectrum(const PauliOperator& p);

std::complex<double> phase_value(int numerator, int d);

/// Rendering for logs and golden tests, e.g. "w^2 X0^1 Z2^2".
std::string to_string(const PauliOperator& p);

}  // namespace qdsim
