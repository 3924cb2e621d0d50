#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qdsim/pauli.hpp"

namespace qdsim {

enum class SiteKind { vertex, plaquette };

/// Periodic square lattice with one spin on each edge.
///
/// Vertices and plaquettes live on an lx-by-ly torus; y grows downward.
/// Vertex (x, y) has edges
///   role 1 (north) = V(x, y-1), role 2 (east) = H(x, y),
///   role 3 (south) = V(x, y),   role 4 (west) = H(x-1, y),
/// and plaquette (x, y) -- the face with vertex (x, y) as its top-left
/// corner -- has
///   role 1 (north) = H(x, y),   role 2 (east) = V(x+1, y),
///   role 3 (south) = H(x, y+1), role 4 (west) = V(x, y),
/// both numbered clockwise from the top. Edge H(x, y) joins (x, y) to
/// (x+1, y); V(x, y) joins (x, y) to (x, y+1). Edge ids interleave as
/// 2*(y*lx + x) + {0 = H, 1 = V}.
struct LatticeGeometry {
  int lx = 2;
  int ly = 2;

  int n_vertices() const { return lx * ly; }
  int n_plaquettes() const { return lx * ly; }
  int n_edges() const { return 2 * lx * ly; }
};

LatticeGeometry make_lattice(int lx, int ly);

struct Coord {
  int x = 0;
  int y = 0;
  bool operator==(const Coord&) const = default;
};

int vertex_index(const LatticeGeometry& g, Coord c);
int plaquette_index(const LatticeGeometry& g, Coord c);
Coord vertex_coord(const LatticeGeometry& g, int v);
Coord plaquette_coord(const LatticeGeometry& g, int p);
int edge_index(const LatticeGeometry& g, Coord c, bool vertical);

/// The four spins around a site with the clockwise-from-top role order;
/// sign[k] = +1 where the stabilizer carries the plain operator and -1
/// where it carries the dagger.
struct SiteSpins {
  std::array<int, 4> edge;
  std::array<int, 4> sign;
};

SiteSpins vertex_spins(const LatticeGeometry& g, int v);
SiteSpins plaquette_spins(const LatticeGeometry& g, int p);

/// A(v) = X_1^dag X_2^dag X_3 X_4 on the vertex star.
PauliOperator vertex_stabilizer(const LatticeGeometry& g, int d, int v);
/// B(p) = Z_1^dag Z_2 Z_3 Z_4^dag on the plaquette boundary.
PauliOperator plaquette_stabilizer(const LatticeGeometry& g, int d, int p);

/// The two vertices sharing an edge, ordered so that the edge has role
/// 1 or 2 (north/east) at `.first`; and the two plaquettes, ordered so
/// that the edge has role 2 or 3 at `.first`.
std::pair<int, int> edge_vertices(const LatticeGeometry& g, int edge);
std::pair<int, int> edge_plaquettes(const LatticeGeometry& g, int edge);
std::optional<int> connecting_edge(const LatticeGeometry& g, SiteKind kind, int a, int b);

/// Charge-string operator along a path of vertices: a product of clock
/// operators on the traversed edges leaving a g charge at path.back() and
/// a -g charge at path.front(), with no anyons in between. A closed path
/// (front == back) gives the braiding loop. `kind = plaquette` gives the
/// dual flux string built from shift operators.
PauliOperator string_operator(const LatticeGeometry& g, int d, SiteKind kind,
                              const std::vector<int>& path, GroupElement charge);

std::vector<int> site_neighbors(const LatticeGeometry& g, SiteKind kind, int site);
int torus_distance(const LatticeGeometry& g, int a, int b);  // taxicab, site indices

/// Canonical shortest path between sites of one kind: wrap-minimizing,
/// x-moves before y-moves, ties toward positive direction.
std::vector<int> shortest_site_path(const LatticeGeometry& g, int a, int b);

/// BFS path avoiding `blocked` sites (deterministic neighbor order).
/// Returns empty when unreachable. Endpoints are never treated as blocked.
std::vector<int> bfs_site_path(const LatticeGeometry& g, SiteKind kind, int from, int to,
                               const std::set<int>& blocked);

/// Corner vertices of a plaquette in clockwise order starting at the
/// top-left, and the plaquettes around a vertex clockwise from north-west.
std::array<int, 4> plaquette_corners(const LatticeGeometry& g, int p);
std::array<int, 4> vertex_surrounding_plaquettes(const LatticeGeometry& g, int v);

std::string lattice_to_json(const LatticeGeometry& g, int d,
                            const std::set<int>& vertex_holes,
                            const std::set<int>& plaquette_holes);
void lattice_from_json(const std::string& text, LatticeGeometry& g, int& d,
                       std::set<int>& vertex_holes, std::set<int>& plaquette_holes);

}  // namespace qdsim
