#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "qdsim/dense.hpp"

using namespace qdsim;

namespace {

StateVector random_state(int n, int d, Rng& rng) {
  StateVector s = make_zero_state(n, d);
  for (int64_t i = 0; i < s.amps.size(); ++i)
    s.amps[i] = {rng.uniform01() - 0.5, rng.uniform01() - 0.5};
  s.amps /= s.amps.norm();
  return s;
}

}  // namespace

TEST_CASE("digit order: site 0 is the most significant digit") {
  StateVector s = make_basis_state(2, 3, {1, 2});
  CHECK(s.amps[1 * 3 + 2] == std::complex<double>(1.0, 0.0));
}

TEST_CASE("shift moves |0> to |1>") {
  StateVector s = make_zero_state(1, 3);
  apply_pauli(s, pauli_x(1, 3, 0));
  CHECK(std::abs(s.amps[1] - 1.0) < 1e-15);
}

TEST_CASE("clock phases |g> by the g-th root of unity") {
  StateVector s = make_basis_state(1, 3, {2});
  apply_pauli(s, pauli_z(1, 3, 0));
  CHECK(std::abs(s.amps[2] - oracle::root_of_unity(3, 2)) < 1e-15);
}

TEST_CASE("identity operator leaves the state untouched") {
  Rng rng(3);
  StateVector s = random_state(2, 3, rng);
  StateVector t = s;
  apply_pauli(t, pauli_identity(2, 3));
  CHECK((s.amps - t.amps).norm() < 1e-15);
}

TEST_CASE("apply_pauli matches matrix arithmetic") {
  Rng rng(5);
  for (int d : {2, 3, 5}) {
    for (int rep = 0; rep < 6; ++rep) {
      PauliOperator p = pauli_identity(2, d);
      p.x[0] = rng.uniform_int(d);
      p.z[0] = rng.uniform_int(d);
      p.x[1] = rng.uniform_int(d);
      p.z[1] = rng.uniform_int(d);
      p.phase = rng.uniform_int(2 * d);
      StateVector s = random_state(2, d, rng);
      Eigen::VectorXcd expect = oracle::matrix_of(p) * s.amps;
      apply_pauli(s, p);
      CHECK((s.amps - expect).norm() < 1e-12);
    }
  }
}

TEST_CASE("sequential application equals composed operator") {
  Rng rng(7);
  for (int d : {2, 3}) {
    PauliOperator p = pauli_identity(2, d), q = pauli_identity(2, d);
    p.x[0] = 1;
    p.z[1] = d - 1;
    q.z[0] = 1;
    q.x[1] = 1;
    StateVector a = random_state(2, d, rng);
    StateVector b = a;
    apply_pauli(a, q);
    apply_pauli(a, p);
    apply_pauli(b, compose(p, q));
    CHECK((a.amps - b.amps).norm() < 1e-12);
  }
}

TEST_CASE("fourier takes |0> to the uniform superposition") {
  StateVector s = make_zero_state(1, 5);
  apply_fourier(s, 0);
  for (int g = 0; g < 5; ++g) CHECK(std::abs(s.amps[g] - 1.0 / std::sqrt(5.0)) < 1e-12);
}

TEST_CASE("fourier squared is negation") {
  StateVector s = make_basis_state(1, 5, {1});
  apply_fourier(s, 0);
  apply_fourier(s, 0);
  CHECK(std::abs(s.amps[4] - 1.0) < 1e-12);
}

TEST_CASE("four fouriers are the identity") {
  Rng rng(11);
  StateVector s = random_state(2, 3, rng);
  StateVector t = s;
  for (int k = 0; k < 4; ++k) apply_fourier(t, 1);
  CHECK(std::abs(std::abs(overlap(s, t)) - 1.0) < 1e-10);
  CHECK((s.amps - t.amps).norm() < 1e-10);
}

TEST_CASE("inverse fourier inverts") {
  Rng rng(13);
  StateVector s = random_state(2, 5, rng);
  StateVector t = s;
  apply_fourier(t, 0);
  apply_fourier(t, 0, true);
  CHECK((s.amps - t.amps).norm() < 1e-12);
}

TEST_CASE("controlled-Z phases |1,1> by w") {
  StateVector s = make_basis_state(2, 3, {1, 1});
  apply_controlled_z_power(s, 0, 1, 1);
  CHECK(std::abs(s.amps[4] - oracle::root_of_unity(3, 1)) < 1e-15);
}

TEST_CASE("controlled-Z with k = 0 or k = d is the identity") {
  Rng rng(17);
  StateVector s = random_state(2, 3, rng);
  StateVector t = s;
  apply_controlled_z_power(t, 0, 1, 0);
  CHECK((s.amps - t.amps).norm() < 1e-15);
  apply_controlled_z_power(t, 0, 1, 3);
  CHECK((s.amps - t.amps).norm() < 1e-12);
}

TEST_CASE("norm is preserved by the unitary operations") {
  Rng rng(19);
  StateVector s = random_state(3, 3, rng);
  apply_pauli(s, pauli_x(3, 3, 1));
  apply_fourier(s, 2);
  apply_controlled_z_power(s, 0, 2, 2);
  CHECK(std::abs(norm(s) - 1.0) < 1e-12);
}

TEST_CASE("overlap basics") {
  Rng rng(23);
  StateVector s = random_state(2, 3, rng);
  CHECK(std::abs(overlap(s, s) - 1.0) < 1e-12);
  StateVector t = s;
  PauliOperator global = pauli_identity(2, 3);
  global.phase = 2;
  apply_pauli(t, global);
  CHECK(std::abs(overlap(s, t) - oracle::root_of_unity(3, 1)) < 1e-12);
}

TEST_CASE("clock-basis measurement of a basis state is deterministic") {
  Rng rng(29);
  StateVector s = make_basis_state(2, 3, {2, 1});
  const auto rec = measure_pauli(s, pauli_z(2, 3, 0), rng);
  CHECK(rec.outcome == 2);
  CHECK(rec.probability == doctest::Approx(1.0));
}

TEST_CASE("shift-basis measurement of the uniform state is deterministic") {
  Rng rng(31);
  StateVector s = make_zero_state(1, 3);
  apply_fourier(s, 0);  // |0-tilde>, shift eigenvalue w^0
  const auto rec = measure_pauli(s, pauli_x(1, 3, 0), rng);
  CHECK(rec.outcome == 0);
  CHECK(rec.probability == doctest::Approx(1.0));
}

TEST_CASE("phase-basis measurement statistics match the projector") {
  // Explicit rank-1 projector expectations against engine probabilities.
  const int d = 3;
  Rng rng(37);
  StateVector s = random_state(2, d, rng);
  Eigen::MatrixXcd basis(d, d);
  const double phi[3] = {0.0, 0.4, 1.3};
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      const double angle = phi[j] + 2.0 * std::numbers::pi * k * j / d;
      basis(j, k) = std::complex<double>(std::cos(angle), std::sin(angle)) / std::sqrt(3.0);
    }
  const Eigen::ArrayXd probs = basis_outcome_probabilities(s, 0, basis);
  for (int k = 0; k < d; ++k) {
    const Eigen::MatrixXcd proj =
        oracle::embed(basis.col(k) * basis.col(k).adjoint(), 2, d, 0);
    const double expect = (s.amps.adjoint() * proj * s.amps).real()(0);
    CHECK(probs[k] == doctest::Approx(expect).epsilon(1e-10));
  }
  CHECK(probs.sum() == doctest::Approx(1.0));
}

TEST_CASE("non-orthonormal measurement bases are rejected") {
  Rng rng(41);
  StateVector s = make_zero_state(1, 3);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Ones(3, 3);
  CHECK_THROWS_AS(measure_in_basis(s, 0, bad, rng), std::invalid_argument);
}

TEST_CASE("measurement frequencies follow the Born rule") {
  const int samples = 100000;
  StateVector base = make_zero_state(1, 3);
  base.amps << std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2);
  Rng rng(43);
  int counts[3] = {0, 0, 0};
  for (int t = 0; t < samples; ++t) {
    StateVector s = base;
    ++counts[measure_pauli(s, pauli_z(1, 3, 0), rng).outcome];
  }
  const double expect[3] = {0.5, 0.3, 0.2};
  for (int g = 0; g < 3; ++g) {
    const double sigma = std::sqrt(expect[g] * (1 - expect[g]) * samples);
    CHECK(std::abs(counts[g] - expect[g] * samples) < 3 * sigma);
  }
}

TEST_CASE("forced projection renormalizes and reports the branch weight") {
  StateVector s = make_zero_state(1, 2);
  apply_fourier(s, 0);
  const double prob = project_pauli(s, pauli_z(1, 2, 0), 1);
  CHECK(prob == doctest::Approx(0.5));
  CHECK(std::abs(s.amps[1] - 1.0) < 1e-12);
  CHECK_THROWS(project_pauli(s, pauli_z(1, 2, 0), 0));  // zero-probability branch
}

TEST_CASE("measurement is deterministic for a fixed seed") {
  for (int rep = 0; rep < 3; ++rep) {
    Rng rng(99);
    StateVector s = make_zero_state(1, 5);
    apply_fourier(s, 0);
    const auto rec = measure_pauli(s, pauli_z(1, 5, 0), rng);
    static int first = -1;
    if (first < 0) first = rec.outcome;
    CHECK(rec.outcome == first);
  }
}

TEST_CASE("capacity cap is enforced") {
  CHECK_THROWS_AS(make_zero_state(25, 2), CapacityError);
  CHECK_THROWS_AS(make_zero_state(11, 5), CapacityError);
}

TEST_CASE("subsystem entropy of a product and an entangled state") {
  StateVector s = make_zero_state(2, 2);
  CHECK(subsystem_entropy(s, {0}) == doctest::Approx(0.0).epsilon(1e-10));
  apply_fourier(s, 0);
  apply_fourier(s, 1);
  apply_controlled_z_power(s, 0, 1, 1);  // maximally entangled pair
  CHECK(subsystem_entropy(s, {0}) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("state dumps round-trip") {
  Rng rng(47);
  StateVector s = random_state(2, 3, rng);
  const StateVector j = state_from_json(state_to_json(s));
  CHECK((s.amps - j.amps).norm() < 1e-15);
  save_state_binary(s, "/tmp/qdsim_state_test.bin");
  const StateVector b = load_state_binary("/tmp/qdsim_state_test.bin");
  CHECK((s.amps - b.amps).norm() == 0.0);
}
