#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qdsim/pauli.hpp"
#include "qdsim/rng.hpp"

namespace qdsim {

/// Thrown when a requested state would exceed the amplitude cap.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact state vector of n qudits of dimension d.
///
/// Basis index convention: site 0 is the most significant digit, so
/// |v_0 v_1 ... v_{n-1}> lives at index sum_i v_i * d^{n-1-i}. States are
/// single-owner mutable; operations below modify in place and reallocate
/// only where a permutation requires scratch space.
struct StateVector {
  int n = 0;
  int d = 2;
  Eigen::VectorXcd amps;
};

struct MeasurementRecord {
  int site = -1;  // -1 for joint (multi-site Pauli) measurements
  std::string basis_label;
  int outcome = 0;
  double probability = 0.0;
};

/// Desk-scale oracle: refuse more than 2^24 amplitudes.
inline constexpr int64_t kDenseCapacity = int64_t{1} << 24;

int64_t dense_dimension(int n, int d);  // d^n with capacity check

StateVector make_zero_state(int n, int d);                              // |00...0>
StateVector make_basis_state(int n, int d, const std::vector<int>& digits);

int64_t basis_index(const StateVector& s, const std::vector<int>& digits);

double norm(const StateVector& s);
std::complex<double> overlap(const StateVector& a, const StateVector& b);  // <a|b>

void apply_pauli(StateVector& s, const PauliOperator& p);
void apply_fourier(StateVector& s, int site, bool inverse = false);
void apply_controlled_z_power(StateVector& s, int control, int target, int k);

/// Outcome probabilities of the generalized Pauli measurement of P
/// (eigenvalues w^m, requires P^d = I). Entry m is Pr[w^m].
Eigen::ArrayXd pauli_outcome_probabilities(const StateVector& s, const PauliOperator& p);

/// Sample an outcome by the Born rule, collapse, renormalize.
MeasurementRecord measure_pauli(StateVector& s, const PauliOperator& p, Rng& rng);

/// Collapse onto the w^outcome eigenspace of P; returns the probability
/// that branch had. Throws if the branch has probability < 1e-14.
double project_pauli(StateVector& s, const PauliOperator& p, int outcome);

/// Measure one site in an arbitrary orthonormal basis (columns of
/// `basis`). Outcome k collapses the site onto column k.
MeasurementRecord measure_in_basis(StateVector& s, int site, const Eigen::MatrixXcd& basis,
                                   Rng& rng, const std::string& label = "custom");
double project_in_basis(StateVector& s, int site, const Eigen::MatrixXcd& basis, int outcome);

/// Probabilities of the basis measurement above without collapsing.
Eigen::ArrayXd basis_outcome_probabilities(const StateVector& s, int site,
                                           const Eigen::MatrixXcd& basis);

/// Von Neumann entropy (natural log) of the reduced state on `sites`.
double subsystem_entropy(const StateVector& s, const std::vector<int>& sites);

/// Debug dump: n, d and interleaved re/im amplitude pairs.
std::string state_to_json(const StateVector& s);
StateVector state_from_json(const std::string& text);
void save_state_binary(const StateVector& s, const std::string& path);
StateVector load_state_binary(const std::string& path);

}  // namespace qdsim
