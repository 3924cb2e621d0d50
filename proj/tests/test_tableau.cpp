#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "qdsim/dense.hpp"
#include "qdsim/lattice.hpp"
#include "qdsim/tableau.hpp"

using namespace qdsim;

namespace {

/// Independent rank oracle: Gaussian elimination on the (x|z) rows mod d.
int symplectic_rank(const std::vector<PauliOperator>& gens, int n, int d) {
  std::vector<std::vector<int>> rows;
  for (const auto& g : gens) {
    std::vector<int> row(2 * n);
    for (int i = 0; i < n; ++i) {
      row[i] = g.x[i];
      row[n + i] = g.z[i];
    }
    rows.push_back(row);
  }
  int rank = 0;
  for (int col = 0; col < 2 * n && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][col] % d != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    const int inv = inv_mod(rows[rank][col], d);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][col] % d == 0) continue;
      const int f = mod_pos(-static_cast<int64_t>(rows[r][col]) * inv, d);
      for (int c = 0; c < 2 * n; ++c) rows[r][c] = mod_pos(rows[r][c] + f * rows[rank][c], d);
    }
    ++rank;
  }
  return rank;
}

std::vector<PauliOperator> lattice_generators(const LatticeGeometry& g, int d) {
  std::vector<PauliOperator> gens;
  for (int v = 0; v < g.n_vertices(); ++v) gens.push_back(vertex_stabilizer(g, d, v));
  for (int p = 0; p < g.n_plaquettes(); ++p) gens.push_back(plaquette_stabilizer(g, d, p));
  return gens;
}

}  // namespace

TEST_CASE("zero state: clock measurements deterministic, shift uniform") {
  Rng rng(3);
  Tableau t = tableau_zero_state(3, 5);
  check_tableau(t);
  const auto out = measure_pauli(t, pauli_z(3, 5, 1), rng);
  CHECK(out.was_deterministic);
  CHECK(out.exponent == 0);

  int counts[5] = {0};
  for (int rep = 0; rep < 2000; ++rep) {
    Tableau fresh = tableau_zero_state(1, 5);
    Rng r(rep);
    ++counts[measure_pauli(fresh, pauli_x(1, 5, 0), r).exponent];
  }
  for (int g = 0; g < 5; ++g) CHECK(std::abs(counts[g] - 400) < 150);
}

TEST_CASE("non-prime dimensions are rejected") {
  CHECK_THROWS_AS(tableau_zero_state(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(tableau_zero_state(2, 6), std::invalid_argument);
}

TEST_CASE("from_generators on the 2x2 lattice set has rank deficiency 2") {
  const LatticeGeometry g = make_lattice(2, 2);
  for (int d : {2, 3, 5}) {
    const auto gens = lattice_generators(g, d);
    const Tableau t = from_generators(g.n_edges(), d, gens);
    check_tableau(t);
    const int oracle_rank = symplectic_rank(gens, g.n_edges(), d);
    CHECK(t.rank() == oracle_rank);
    CHECK(static_cast<int>(gens.size()) - oracle_rank == 2);
    CHECK(t.encoded_qudits() == g.n_edges() - oracle_rank);
  }
}

TEST_CASE("empty generator lists are rejected") {
  CHECK_THROWS_AS(from_generators(2, 3, {}), std::invalid_argument);
}

TEST_CASE("single clock generator stabilizes |0> with encoded freedom") {
  const Tableau t = from_generators(1, 3, {pauli_z(1, 3, 0)});
  check_tableau(t);
  CHECK(t.rank() == 1);
  CHECK(t.encoded_qudits() == 0);
  CHECK(stabilizer_value(t, pauli_z(1, 3, 0)).value() == 0);
}

TEST_CASE("non-commuting and phase-inconsistent inputs are rejected") {
  CHECK_THROWS_AS(from_generators(1, 3, {pauli_z(1, 3, 0), pauli_x(1, 3, 0)}),
                  std::invalid_argument);
  PauliOperator twisted = pauli_z(1, 3, 0);
  twisted.phase = 2;
  CHECK_THROWS_AS(from_generators(1, 3, {pauli_z(1, 3, 0), twisted}), std::invalid_argument);
}

TEST_CASE("phases of dependent generators are tracked") {
  PauliOperator z2 = pauli_z(1, 5, 0, 2);
  z2.phase = 4;  // w^2 Z^2
  const Tableau t = from_generators(1, 5, {z2});
  // w^2 Z^2 = +1 forces Z = w^{-1}: measuring Z must give exponent 4.
  CHECK(stabilizer_value(t, pauli_z(1, 5, 0)).value() == 4);
}

TEST_CASE("fourier gate maps stabilizers by the fixed convention") {
  Tableau t = from_generators(1, 3, {pauli_x(1, 3, 0)});
  apply_fourier_gate(t, 0);
  CHECK(stabilizer_value(t, pauli_z(1, 3, 0)).value() == 0);  // F X F^dag = Z
}

TEST_CASE("controlled-Z on two uniform states yields the entangled pair stabilizers") {
  // X (x) I and I (x) X conjugate to X Z^k and Z^k X.
  Tableau t = from_generators(2, 3, {pauli_x(2, 3, 0), pauli_x(2, 3, 1)});
  apply_controlled_z_gate(t, 0, 1, 1);
  check_tableau(t);
  const PauliOperator xz = compose(pauli_x(2, 3, 0), pauli_z(2, 3, 1));
  CHECK(stabilizer_value(t, xz).value() == 0);
}

TEST_CASE("measuring a stabilizer generator returns its phase deterministically") {
  Rng rng(5);
  Tableau t = tableau_zero_state(2, 3);
  apply_pauli_gate(t, pauli_x(2, 3, 0));  // state |1,0>
  const auto out = measure_pauli(t, pauli_z(2, 3, 0), rng);
  CHECK(out.was_deterministic);
  CHECK(out.exponent == 1);
}

TEST_CASE("random-outcome measurement updates keep a valid tableau") {
  Rng rng(7);
  for (int d : {2, 3, 5}) {
    Tableau t = tableau_zero_state(3, d);
    for (int step = 0; step < 12; ++step) {
      PauliOperator obs = pauli_identity(3, d);
      const bool clock = rng.uniform_int(2) == 1;
      for (int i = 0; i < 2; ++i) {
        const int site = rng.uniform_int(3);
        if (clock)
          obs.z[site] = rng.uniform_int(d);
        else
          obs.x[site] = rng.uniform_int(d);
      }
      if (is_identity(obs)) continue;
      measure_pauli(t, obs, rng);
      check_tableau(t);
    }
  }
}

TEST_CASE("logical measurement grows the rank") {
  const LatticeGeometry g = make_lattice(2, 2);
  const int d = 3;
  Tableau t = from_generators(g.n_edges(), d, lattice_generators(g, d));
  const int r0 = t.rank();
  CHECK(t.encoded_qudits() == 2);
  // A non-contractible clock loop commutes with everything but is not in
  // the group: measuring it is a logical measurement.
  const std::vector<int> cycle{vertex_index(g, {0, 0}), vertex_index(g, {0, 1}),
                               vertex_index(g, {0, 0})};
  const PauliOperator loop =
      string_operator(g, d, SiteKind::vertex, cycle, GroupElement(1, d));
  for (const auto& s : t.stabs) CHECK(commutation_exponent(loop, s) == 0);
  Rng rng(11);
  const auto out = measure_pauli(t, loop, rng);
  CHECK(!out.was_deterministic);
  check_tableau(t);
  CHECK(t.rank() == r0 + 1);
  CHECK(t.encoded_qudits() == 1);
  CHECK(stabilizer_value(t, loop).value() == out.exponent);
}

TEST_CASE("identical seeds give identical outcome transcripts") {
  auto run = [](uint64_t seed) {
    Rng rng(seed);
    Tableau t = tableau_zero_state(4, 3);
    std::vector<int> outcomes;
    for (int step = 0; step < 10; ++step) {
      apply_fourier_gate(t, step % 4);
      PauliOperator obs = pauli_x(4, 3, (step * 2) % 4);
      outcomes.push_back(measure_pauli(t, obs, rng).exponent);
    }
    return outcomes;
  };
  CHECK(run(123) == run(123));
}

TEST_CASE("measurement requires an omega spectrum") {
  Rng rng(13);
  Tableau t = tableau_zero_state(1, 2);
  const PauliOperator xz = compose(pauli_x(1, 2, 0), pauli_z(1, 2, 0));
  CHECK_THROWS_AS(measure_pauli(t, xz, rng), std::invalid_argument);
}

TEST_CASE("measurements match the dense engine distribution-by-distribution") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 3, d = 3;
    Rng rng(seed);
    Tableau t = tableau_zero_state(n, d);
    StateVector s = make_zero_state(n, d);
    for (int step = 0; step < 10; ++step) {
      const int what = rng.uniform_int(4);
      if (what == 0) {
        const int site = rng.uniform_int(n);
        apply_fourier_gate(t, site);
        apply_fourier(s, site);
      } else if (what == 1) {
        const int a = rng.uniform_int(n), b = (a + 1) % n;
        const int k = 1 + rng.uniform_int(d - 1);
        apply_controlled_z_gate(t, a, b, k);
        apply_controlled_z_power(s, a, b, k);
      } else if (what == 2) {
        PauliOperator p = pauli_identity(n, d);
        p.x[rng.uniform_int(n)] = 1 + rng.uniform_int(d - 1);
        p.z[rng.uniform_int(n)] = rng.uniform_int(d);
        apply_pauli_gate(t, p);
        apply_pauli(s, p);
      } else {
        PauliOperator obs = pauli_identity(n, d);
        if (rng.uniform_int(2))
          obs.z[rng.uniform_int(n)] = 1 + rng.uniform_int(d - 1);
        else
          obs.x[rng.uniform_int(n)] = 1 + rng.uniform_int(d - 1);
        const Eigen::ArrayXd dense_probs = pauli_outcome_probabilities(s, obs);
        const Eigen::ArrayXd tab_probs = tableau_outcome_distribution(t, obs);
        REQUIRE((dense_probs - tab_probs).abs().maxCoeff() < 1e-9);
        const auto out = measure_pauli(t, obs, rng);
        project_pauli(s, obs, out.exponent);
      }
    }
  }
}
