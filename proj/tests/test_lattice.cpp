#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdsim/lattice.hpp"

using namespace qdsim;

TEST_CASE("every edge borders two vertices and two plaquettes") {
  for (auto [lx, ly] : {std::pair{2, 2}, {3, 2}, {4, 3}}) {
    const LatticeGeometry g = make_lattice(lx, ly);
    std::vector<int> vertex_count(g.n_edges(), 0), plaq_count(g.n_edges(), 0);
    for (int v = 0; v < g.n_vertices(); ++v)
      for (int e : vertex_spins(g, v).edge) ++vertex_count[e];
    for (int p = 0; p < g.n_plaquettes(); ++p)
      for (int e : plaquette_spins(g, p).edge) ++plaq_count[e];
    for (int e = 0; e < g.n_edges(); ++e) {
      CHECK(vertex_count[e] == 2);
      CHECK(plaq_count[e] == 2);
    }
  }
}

TEST_CASE("all vertex and plaquette stabilizers commute pairwise") {
  for (int lx = 2; lx <= 4; ++lx)
    for (int ly = 2; ly <= 4; ++ly)
      for (int d : {2, 3, 5}) {
        const LatticeGeometry g = make_lattice(lx, ly);
        std::vector<PauliOperator> all;
        for (int v = 0; v < g.n_vertices(); ++v) all.push_back(vertex_stabilizer(g, d, v));
        for (int p = 0; p < g.n_plaquettes(); ++p) all.push_back(plaquette_stabilizer(g, d, p));
        for (size_t i = 0; i < all.size(); ++i)
          for (size_t j = i + 1; j < all.size(); ++j)
            REQUIRE(commutation_exponent(all[i], all[j]) == 0);
      }
}

TEST_CASE("stabilizer products over the torus are the identity") {
  const LatticeGeometry g = make_lattice(3, 3);
  for (int d : {2, 3}) {
    PauliOperator prod_a = pauli_identity(g.n_edges(), d);
    PauliOperator prod_b = pauli_identity(g.n_edges(), d);
    for (int v = 0; v < g.n_vertices(); ++v)
      prod_a = compose(prod_a, vertex_stabilizer(g, d, v));
    for (int p = 0; p < g.n_plaquettes(); ++p)
      prod_b = compose(prod_b, plaquette_stabilizer(g, d, p));
    CHECK(is_identity(prod_a));
    CHECK(is_identity(prod_b));
  }
}

TEST_CASE("a vertex stabilizer at d=2 is the plain four-body shift product") {
  const LatticeGeometry g = make_lattice(3, 3);
  const PauliOperator a = vertex_stabilizer(g, 2, 4);
  for (int e : vertex_spins(g, 4).edge) CHECK(a.x[e] == 1);
  CHECK(pauli_weight(a) == 4);
  CHECK(a.phase == 0);
}

TEST_CASE("stabilizers have order d") {
  const LatticeGeometry g = make_lattice(3, 2);
  for (int d : {2, 3, 5}) {
    const PauliOperator ad = pauli_power(vertex_stabilizer(g, d, 1), d);
    CHECK((ad.x == 0).all());
    CHECK((ad.z == 0).all());
  }
}

TEST_CASE("charge string endpoints carry opposite charges") {
  const LatticeGeometry g = make_lattice(4, 3);
  const int d = 3;
  const std::vector<int> path{vertex_index(g, {1, 1}), vertex_index(g, {2, 1}),
                              vertex_index(g, {2, 2})};
  const PauliOperator s = string_operator(g, d, SiteKind::vertex, path, GroupElement(1, d));
  for (int v = 0; v < g.n_vertices(); ++v) {
    const int c = commutation_exponent(vertex_stabilizer(g, d, v), s);
    if (v == path.front())
      CHECK(c == d - 1);
    else if (v == path.back())
      CHECK(c == 1);
    else
      CHECK(c == 0);
  }
  // Clock strings never disturb the plaquette sector.
  for (int p = 0; p < g.n_plaquettes(); ++p)
    CHECK(commutation_exponent(plaquette_stabilizer(g, d, p), s) == 0);
}

TEST_CASE("flux string endpoints carry opposite fluxes") {
  const LatticeGeometry g = make_lattice(4, 3);
  const int d = 5;
  const std::vector<int> path{plaquette_index(g, {0, 0}), plaquette_index(g, {1, 0}),
                              plaquette_index(g, {1, 1})};
  const PauliOperator s = string_operator(g, d, SiteKind::plaquette, path, GroupElement(2, d));
  for (int p = 0; p < g.n_plaquettes(); ++p) {
    const int c = commutation_exponent(plaquette_stabilizer(g, d, p), s);
    if (p == path.front())
      CHECK(c == d - 2);
    else if (p == path.back())
      CHECK(c == 2);
    else
      CHECK(c == 0);
  }
}

TEST_CASE("zero charge gives the identity string") {
  const LatticeGeometry g = make_lattice(3, 3);
  const std::vector<int> path{0, 1};
  CHECK(is_identity(string_operator(g, 3, SiteKind::vertex, path, GroupElement(0, 3))));
}

TEST_CASE("disconnected paths are rejected") {
  const LatticeGeometry g = make_lattice(4, 4);
  const std::vector<int> path{vertex_index(g, {0, 0}), vertex_index(g, {2, 2})};
  CHECK_THROWS_AS(string_operator(g, 3, SiteKind::vertex, path, GroupElement(1, 3)),
                  std::invalid_argument);
}

TEST_CASE("closed strings commute with every stabilizer") {
  const LatticeGeometry g = make_lattice(3, 3);
  const int d = 3;
  // walk clockwise around plaquette (1,1)
  const std::vector<int> loop{vertex_index(g, {1, 1}), vertex_index(g, {2, 1}),
                              vertex_index(g, {2, 2}), vertex_index(g, {1, 2}),
                              vertex_index(g, {1, 1})};
  const PauliOperator s = string_operator(g, d, SiteKind::vertex, loop, GroupElement(1, d));
  for (int v = 0; v < g.n_vertices(); ++v)
    CHECK(commutation_exponent(vertex_stabilizer(g, d, v), s) == 0);
  // and the loop is exactly the enclosed plaquette stabilizer
  CHECK(s == plaquette_stabilizer(g, d, plaquette_index(g, {1, 1})));
}

TEST_CASE("torus distances and canonical shortest paths") {
  const LatticeGeometry g = make_lattice(4, 3);
  const int a = vertex_index(g, {0, 0});
  const int b = vertex_index(g, {3, 2});
  CHECK(torus_distance(g, a, b) == 2);  // both coordinates wrap
  const auto path = shortest_site_path(g, a, b);
  CHECK(static_cast<int>(path.size()) == 3);
  CHECK(path.front() == a);
  CHECK(path.back() == b);
}

TEST_CASE("bfs routing respects blocked sites") {
  const LatticeGeometry g = make_lattice(4, 4);
  const int from = vertex_index(g, {0, 0});
  const int to = vertex_index(g, {2, 0});
  std::set<int> blocked{vertex_index(g, {1, 0})};
  const auto path = bfs_site_path(g, SiteKind::vertex, from, to, blocked);
  REQUIRE(!path.empty());
  for (int v : path) CHECK(blocked.count(v) == 0);
  CHECK(path.front() == from);
  CHECK(path.back() == to);
}

TEST_CASE("corner and ring helpers are consistent") {
  const LatticeGeometry g = make_lattice(3, 3);
  const int p = plaquette_index(g, {1, 1});
  const auto corners = plaquette_corners(g, p);
  CHECK(corners[0] == vertex_index(g, {1, 1}));
  CHECK(corners[2] == vertex_index(g, {2, 2}));
  const auto ring = vertex_surrounding_plaquettes(g, vertex_index(g, {1, 1}));
  CHECK(ring[0] == plaquette_index(g, {0, 0}));
  CHECK(ring[2] == plaquette_index(g, {1, 1}));
}

TEST_CASE("edge orientation helpers agree with the stabilizer patterns") {
  const LatticeGeometry g = make_lattice(3, 3);
  for (int e = 0; e < g.n_edges(); ++e) {
    const auto [v1, v2] = edge_vertices(g, e);
    (void)v2;
    // role 1 or 2 at the first endpoint
    const SiteSpins s1 = vertex_spins(g, v1);
    bool found = false;
    for (int k = 0; k < 4; ++k)
      if (s1.edge[k] == e && k <= 1) found = true;
    CHECK(found);
    const auto [p1, p2] = edge_plaquettes(g, e);
    (void)p2;
    const SiteSpins sp = plaquette_spins(g, p1);
    found = false;
    for (int k = 0; k < 4; ++k)
      if (sp.edge[k] == e && (k == 1 || k == 2)) found = true;
    CHECK(found);
  }
}

TEST_CASE("lattice description round-trips through JSON") {
  const LatticeGeometry g = make_lattice(4, 3);
  std::set<int> vh{1, 5}, ph{2};
  const std::string text = lattice_to_json(g, 3, vh, ph);
  LatticeGeometry g2;
  int d2;
  std::set<int> vh2, ph2;
  lattice_from_json(text, g2, d2, vh2, ph2);
  CHECK(g2.lx == 4);
  CHECK(g2.ly == 3);
  CHECK(d2 == 3);
  CHECK(vh2 == vh);
  CHECK(ph2 == ph);
}

TEST_CASE("degenerate lattices are rejected") {
  CHECK_THROWS_AS(make_lattice(1, 4), std::invalid_argument);
}
