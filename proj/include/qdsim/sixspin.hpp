#pragma once

#include "qdsim/dense.hpp"
#include "qdsim/tableau.hpp"

namespace qdsim {

/// Six-qubit stabilizer code used to demonstrate hole storage outside
/// anyonic codes: four weight-two clock checks, the all-shift check and a
/// weight-four clock check (which is their product).
struct SixSpinCode {
  std::vector<PauliOperator> stabilizers;  // S1..S6, d = 2, 6 qubits
};

SixSpinCode make_six_spin_code();

enum class SixSpinVariant {
  a,     // holes at S1, S2: Z = S1 (or S2), X = X on spin 2
  b,     // holes at S2, S3: Z = S2 (or S3), X = X3 X4
  full,  // no holes: the code's own encoded qubit
};

struct SixSpinEncoding {
  std::vector<PauliOperator> enforced;
  PauliOperator logical_z;
  PauliOperator logical_x;
};

SixSpinEncoding six_spin_encoding(SixSpinVariant v);

/// Logical-zero codeword with every stabilizer (dropped ones included) at
/// +1, on the requested engine.
StateVector six_spin_zero_dense();
Tableau six_spin_zero_tableau();

/// Exhaustive sweep over fault weights 1 and 2: the minimum weight that
/// commutes with every enforced stabilizer yet acts on the stored qubit.
int protection_report(SixSpinVariant v);

}  // namespace qdsim
