#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdsim/code_state.hpp"

using namespace qdsim;

namespace {

CodeState vacuum(int lx, int ly, int d, EngineKind engine, uint64_t seed = 1) {
  Rng rng(seed);
  auto geom = std::make_shared<LatticeGeometry>(make_lattice(lx, ly));
  return ground_state(geom, d, engine, rng);
}

}  // namespace

TEST_CASE("the vacuum has an empty syndrome on both engines") {
  for (int d : {2, 3, 5}) {
    CHECK(extract_syndrome(vacuum(2, 2, d, EngineKind::dense)).empty());
    CHECK(extract_syndrome(vacuum(2, 2, d, EngineKind::tableau)).empty());
  }
  CHECK(extract_syndrome(vacuum(3, 2, 3, EngineKind::dense)).empty());
  CHECK(extract_syndrome(vacuum(4, 4, 5, EngineKind::tableau)).empty());
}

TEST_CASE("ground-state construction is seed independent and engines agree") {
  const CodeState a = vacuum(3, 2, 3, EngineKind::dense, 1);
  const CodeState b = vacuum(3, 2, 3, EngineKind::dense, 999);
  CHECK(std::abs(std::abs(overlap(a.dense(), b.dense())) - 1.0) < 1e-10);

  // Dense and tableau vacua assign the same value to every stabilizer and
  // to the non-contractible clock loops.
  const CodeState t = vacuum(3, 2, 3, EngineKind::tableau, 7);
  for (int v = 0; v < a.geom->n_vertices(); ++v) {
    const PauliOperator obs = vertex_stabilizer(*a.geom, 3, v);
    CHECK(stabilizer_value(t.tableau(), obs).value() == 0);
    CHECK(pauli_outcome_probabilities(a.dense(), obs)[0] == doctest::Approx(1.0));
  }
  const std::vector<int> cycle{vertex_index(*a.geom, {0, 0}), vertex_index(*a.geom, {0, 1}),
                               vertex_index(*a.geom, {0, 0})};
  const PauliOperator loop =
      string_operator(*a.geom, 3, SiteKind::vertex, cycle, GroupElement(1, 3));
  CHECK(stabilizer_value(t.tableau(), loop).value() == 0);
  CHECK(pauli_outcome_probabilities(a.dense(), loop)[0] == doctest::Approx(1.0));
}

TEST_CASE("single spin faults show the textbook syndrome pattern") {
  for (EngineKind engine : {EngineKind::dense, EngineKind::tableau}) {
    CodeState cs = engine == EngineKind::dense ? vacuum(3, 2, 3, engine) : vacuum(3, 3, 3, engine);
    const int edge = edge_index(*cs.geom, {1, 1}, false);
    apply_pauli_op(cs, pauli_z(cs.geom->n_edges(), 3, edge, 1));
    const Syndrome syn = extract_syndrome(cs);
    const auto [v_first, v_second] = edge_vertices(*cs.geom, edge);
    CHECK(syn.charge(v_first) == 1);
    CHECK(syn.charge(v_second) == 2);
    CHECK(syn.plaquette_fluxes.empty());

    apply_pauli_op(cs, pauli_z(cs.geom->n_edges(), 3, edge, 2));  // undo
    apply_pauli_op(cs, pauli_x(cs.geom->n_edges(), 3, edge, 1));
    const Syndrome syn2 = extract_syndrome(cs);
    const auto [p_first, p_second] = edge_plaquettes(*cs.geom, edge);
    CHECK(syn2.flux(p_first) == 1);
    CHECK(syn2.flux(p_second) == 2);
    CHECK(syn2.vertex_charges.empty());
  }
}

TEST_CASE("contractible loops act trivially on the vacuum") {
  CodeState cs = vacuum(3, 3, 2, EngineKind::dense);
  const StateVector before = cs.dense();
  const std::vector<int> loop{vertex_index(*cs.geom, {0, 0}), vertex_index(*cs.geom, {1, 0}),
                              vertex_index(*cs.geom, {1, 1}), vertex_index(*cs.geom, {0, 1}),
                              vertex_index(*cs.geom, {0, 0})};
  apply_pauli_op(cs, string_operator(*cs.geom, 2, SiteKind::vertex, loop, GroupElement(1, 2)));
  CHECK(std::abs(overlap(before, cs.dense()) - 1.0) < 1e-10);
}

TEST_CASE("open then close on the vacuum absorbs nothing") {
  Rng rng(5);
  for (EngineKind engine : {EngineKind::dense, EngineKind::tableau}) {
    CodeState cs = vacuum(3, 2, 3, engine);
    open_hole(cs, SiteKind::vertex, 2);
    CHECK(close_hole(cs, SiteKind::vertex, 2, rng) == 0);
  }
}

TEST_CASE("double open and double close are rejected") {
  Rng rng(7);
  CodeState cs = vacuum(2, 2, 3, EngineKind::tableau);
  open_hole(cs, SiteKind::plaquette, 1);
  CHECK_THROWS_AS(open_hole(cs, SiteKind::plaquette, 1), std::invalid_argument);
  close_hole(cs, SiteKind::plaquette, 1, rng);
  CHECK_THROWS_AS(close_hole(cs, SiteKind::plaquette, 1, rng), std::invalid_argument);
}

TEST_CASE("anyons hidden in holes reappear when the holes close") {
  Rng rng(11);
  for (EngineKind engine : {EngineKind::dense, EngineKind::tableau}) {
    CodeState cs = engine == EngineKind::dense ? vacuum(3, 2, 3, engine) : vacuum(4, 3, 3, engine);
    const int v1 = vertex_index(*cs.geom, {1, 1});
    const int v2 = vertex_index(*cs.geom, {0, 0});
    open_hole(cs, SiteKind::vertex, v1);
    open_hole(cs, SiteKind::vertex, v2);
    apply_pauli_op(cs, string_operator(*cs.geom, 3, SiteKind::vertex,
                                       shortest_site_path(*cs.geom, v2, v1), GroupElement(1, 3)));
    CHECK(extract_syndrome(cs).empty());  // anyons are inside the holes
    CHECK(close_hole(cs, SiteKind::vertex, v1, rng) == 1);
    CHECK(close_hole(cs, SiteKind::vertex, v2, rng) == 2);
    // now visible
    const Syndrome syn = extract_syndrome(cs);
    CHECK(syn.charge(v1) == 1);
    CHECK(syn.charge(v2) == 2);
  }
}

TEST_CASE("a string entering a hole leaves one visible endpoint") {
  CodeState cs = vacuum(4, 3, 3, EngineKind::tableau);
  const int v1 = vertex_index(*cs.geom, {1, 1});
  const int far = vertex_index(*cs.geom, {3, 1});
  open_hole(cs, SiteKind::vertex, v1);
  apply_pauli_op(cs, string_operator(*cs.geom, 3, SiteKind::vertex,
                                     shortest_site_path(*cs.geom, v1, far), GroupElement(1, 3)));
  const Syndrome syn = extract_syndrome(cs);
  CHECK(syn.vertex_charges.size() == 1);
  CHECK(syn.charge(far) == 1);
}

TEST_CASE("hole movement carries definite occupancies") {
  Rng rng(13);
  for (EngineKind engine : {EngineKind::dense, EngineKind::tableau}) {
    CodeState cs = engine == EngineKind::dense ? vacuum(3, 2, 3, engine) : vacuum(4, 3, 3, engine);
    const int a = vertex_index(*cs.geom, {1, 1});
    const int b = vertex_index(*cs.geom, {2, 1});
    const int far = vertex_index(*cs.geom, {0, 0});
    open_hole(cs, SiteKind::vertex, a);
    open_hole(cs, SiteKind::vertex, far);
    // charge 1 into the hole at a
    apply_pauli_op(cs, string_operator(*cs.geom, 3, SiteKind::vertex,
                                       shortest_site_path(*cs.geom, far, a), GroupElement(1, 3)));
    move_hole(cs, SiteKind::vertex, a, b, rng);
    CHECK(extract_syndrome(cs).empty());
    CHECK(close_hole(cs, SiteKind::vertex, b, rng) == 1);
  }
}

TEST_CASE("hole movement preserves superposed occupancies") {
  Rng rng(17);
  CodeState cs = vacuum(3, 2, 3, EngineKind::dense);
  const int a = vertex_index(*cs.geom, {1, 1});
  const int partner = vertex_index(*cs.geom, {2, 1});
  const int b = vertex_index(*cs.geom, {0, 1});
  open_hole(cs, SiteKind::vertex, a);
  open_hole(cs, SiteKind::vertex, partner);
  // Measuring the connecting spin puts the pair occupancy into an even
  // superposition without touching the flux sector.
  const int spin = edge_index(*cs.geom, {1, 1}, false);
  measure_pauli_op(cs, pauli_z(cs.geom->n_edges(), 3, spin), rng);
  const Eigen::ArrayXd before =
      pauli_outcome_probabilities(cs.dense(), vertex_stabilizer(*cs.geom, 3, a));
  move_hole(cs, SiteKind::vertex, a, b, rng);
  const Eigen::ArrayXd after =
      pauli_outcome_probabilities(cs.dense(), vertex_stabilizer(*cs.geom, 3, b));
  for (int g = 0; g < 3; ++g) CHECK(before[g] == doctest::Approx(after[g]).epsilon(1e-9));
  CHECK(extract_syndrome(cs).empty());
  // the pair is in an even occupancy superposition, not collapsed
  CHECK(before[0] == doctest::Approx(1.0 / 3));
}

TEST_CASE("moves must target free adjacent sites") {
  Rng rng(19);
  CodeState cs = vacuum(3, 3, 2, EngineKind::tableau);
  open_hole(cs, SiteKind::vertex, 0);
  CHECK_THROWS_AS(move_hole(cs, SiteKind::vertex, 0, 4, rng), std::invalid_argument);
  open_hole(cs, SiteKind::vertex, 1);
  CHECK_THROWS_AS(move_hole(cs, SiteKind::vertex, 0, 1, rng), std::invalid_argument);
}
