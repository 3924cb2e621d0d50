#include "qdsim/sixspin.hpp"

namespace qdsim {

namespace {

constexpr int kSpins = 6;

PauliOperator z_on(std::initializer_list<int> spins) {
  PauliOperator p = pauli_identity(kSpins, 2);
  for (int s : spins) p.z[s] = 1;
  return p;
}

PauliOperator x_on(std::initializer_list<int> spins) {
  PauliOperator p = pauli_identity(kSpins, 2);
  for (int s : spins) p.x[s] = 1;
  return p;
}

}  // namespace

SixSpinCode make_six_spin_code() {
  SixSpinCode code;
  code.stabilizers = {
      z_on({0, 1}),                // S1
      z_on({1, 2}),                // S2
      z_on({3, 4}),                // S3
      z_on({4, 5}),                // S4
      x_on({0, 1, 2, 3, 4, 5}),    // S5
      z_on({0, 2, 3, 5}),          // S6
  };
  return code;
}

SixSpinEncoding six_spin_encoding(SixSpinVariant v) {
  const SixSpinCode code = make_six_spin_code();
  SixSpinEncoding enc;
  switch (v) {
    case SixSpinVariant::a:
      for (int i : {2, 3, 4, 5}) enc.enforced.push_back(code.stabilizers[i]);
      enc.logical_z = code.stabilizers[0];
      enc.logical_x = x_on({1});
      break;
    case SixSpinVariant::b:
      for (int i : {0, 3, 4, 5}) enc.enforced.push_back(code.stabilizers[i]);
      enc.logical_z = code.stabilizers[1];
      enc.logical_x = x_on({2, 3});
      break;
    case SixSpinVariant::full:
      enc.enforced = code.stabilizers;
      enc.logical_z = z_on({1, 4});
      enc.logical_x = x_on({0, 1, 2});
      break;
  }
  return enc;
}

StateVector six_spin_zero_dense() {
  StateVector s = make_zero_state(kSpins, 2);
  // |0...0> already satisfies every clock-type check; fixing the all-shift
  // check yields the codeword (a GHZ state).
  project_pauli(s, make_six_spin_code().stabilizers[4], 0);
  return s;
}

Tableau six_spin_zero_tableau() {
  SixSpinCode code = make_six_spin_code();
  std::vector<PauliOperator> gens = code.stabilizers;
  gens.push_back(z_on({1, 4}));  // pins the code's own encoded qubit
  return from_generators(kSpins, 2, gens);
}

int protection_report(SixSpinVariant v) {
  const SixSpinEncoding enc = six_spin_encoding(v);
  auto is_silent_logical = [&](const PauliOperator& fault) {
    for (const auto& s : enc.enforced)
      if (commutation_exponent(fault, s) != 0) return false;
    return commutation_exponent(fault, enc.logical_z) != 0 ||
           commutation_exponent(fault, enc.logical_x) != 0;
  };
  // weight 1
  for (int spin = 0; spin < kSpins; ++spin)
    for (int xp = 0; xp < 2; ++xp)
      for (int zp = 0; zp < 2; ++zp) {
        if (xp == 0 && zp == 0) continue;
        PauliOperator fault = pauli_identity(kSpins, 2);
        fault.x[spin] = xp;
        fault.z[spin] = zp;
        if (is_silent_logical(fault)) return 1;
      }
  // weight 2
  for (int s1 = 0; s1 < kSpins; ++s1)
    for (int s2 = s1 + 1; s2 < kSpins; ++s2)
      for (int f1 = 1; f1 < 4; ++f1)
        for (int f2 = 1; f2 < 4; ++f2) {
          PauliOperator fault = pauli_identity(kSpins, 2);
          fault.x[s1] = f1 & 1;
          fault.z[s1] = (f1 >> 1) & 1;
          fault.x[s2] = f2 & 1;
          fault.z[s2] = (f2 >> 1) & 1;
          if (is_silent_logical(fault)) return 2;
        }
  throw std::logic_error("six-spin: no logical fault of weight <= 2");
}

}  // namespace qdsim
