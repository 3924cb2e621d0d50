#include "qdsim/lattice.hpp"

#include <json.hpp>
#include <map>
#include <queue>
#include <stdexcept>

namespace qdsim {

namespace {

int wrap(int v, int m) { return mod_pos(v, m); }

enum Dir { east = 0, south = 1, west = 2, north = 3 };

/// Directed step from a vertex: the traversed edge, and the role the edge
/// has at the destination vertex (1..4 clockwise from north).
struct VertexStep {
  int edge;
  int head_role;
};

VertexStep vertex_step(const LatticeGeometry& g, Coord from, Dir dir) {
  switch (dir) {
    case east:
      return {edge_index(g, from, false), 4};  // arrives at head's west
    case west:
      return {edge_index(g, {from.x - 1, from.y}, false), 2};
    case south:
      return {edge_index(g, from, true), 1};
    case north:
      return {edge_index(g, {from.x, from.y - 1}, true), 3};
  }
  throw std::logic_error("unreachable");
}

struct PlaquetteStep {
  int edge;
  int head_role;
};

PlaquetteStep plaquette_step(const LatticeGeometry& g, Coord from, Dir dir) {
  switch (dir) {
    case east:
      return {edge_index(g, {from.x + 1, from.y}, true), 4};
    case west:
      return {edge_index(g, {from.x, from.y}, true), 2};
    case south:
      return {edge_index(g, {from.x, from.y + 1}, false), 1};
    case north:
      return {edge_index(g, {from.x, from.y}, false), 3};
  }
  throw std::logic_error("unreachable");
}

/// Direction of a single-step move a -> b. East/south win on wrap-
/// degenerate lattices (lx == 2 or ly == 2) where both readings connect.
std::optional<Dir> step_direction(const LatticeGeometry& g, Coord a, Coord b) {
  const int dx_e = wrap(b.x - a.x, g.lx);
  const int dy_s = wrap(b.y - a.y, g.ly);
  if (dy_s == 0) {
    if (dx_e == 1) return east;
    if (wrap(a.x - b.x, g.lx) == 1) return west;
  }
  if (dx_e == 0) {
    if (dy_s == 1) return south;
    if (wrap(a.y - b.y, g.ly) == 1) return north;
  }
  return std::nullopt;
}

Coord coord_of(const LatticeGeometry& g, int site) {
  return {site % g.lx, site / g.lx};
}

}  // namespace

LatticeGeometry make_lattice(int lx, int ly) {
  if (lx < 2 || ly < 2) throw std::invalid_argument("lattice: need lx, ly >= 2");
  return {lx, ly};
}

int vertex_index(const LatticeGeometry& g, Coord c) { return wrap(c.y, g.ly) * g.lx + wrap(c.x, g.lx); }
int plaquette_index(const LatticeGeometry& g, Coord c) { return vertex_index(g, c); }
Coord vertex_coord(const LatticeGeometry& g, int v) { return coord_of(g, v); }
Coord plaquette_coord(const LatticeGeometry& g, int p) { return coord_of(g, p); }

int edge_index(const LatticeGeometry& g, Coord c, bool vertical) {
  return 2 * (wrap(c.y, g.ly) * g.lx + wrap(c.x, g.lx)) + (vertical ? 1 : 0);
}

SiteSpins vertex_spins(const LatticeGeometry& g, int v) {
  const Coord c = coord_of(g, v);
  SiteSpins s;
  s.edge[0] = edge_index(g, {c.x, c.y - 1}, true);   // north
  s.edge[1] = edge_index(g, {c.x, c.y}, false);      // east
  s.edge[2] = edge_index(g, {c.x, c.y}, true);       // south
  s.edge[3] = edge_index(g, {c.x - 1, c.y}, false);  // west
  s.sign = {-1, -1, +1, +1};
  return s;
}

SiteSpins plaquette_spins(const LatticeGeometry& g, int p) {
  const Coord c = coord_of(g, p);
  SiteSpins s;
  s.edge[0] = edge_index(g, {c.x, c.y}, false);      // north
  s.edge[1] = edge_index(g, {c.x + 1, c.y}, true);   // east
  s.edge[2] = edge_index(g, {c.x, c.y + 1}, false);  // south
  s.edge[3] = edge_index(g, {c.x, c.y}, true);       // west
  s.sign = {-1, +1, +1, -1};
  return s;
}

PauliOperator vertex_stabilizer(const LatticeGeometry& g, int d, int v) {
  if (v < 0 || v >= g.n_vertices()) throw std::invalid_argument("lattice: vertex out of range");
  PauliOperator a = pauli_identity(g.n_edges(), d);
  const SiteSpins s = vertex_spins(g, v);
  for (int k = 0; k < 4; ++k) a.x[s.edge[k]] = mod_pos(a.x[s.edge[k]] + s.sign[k], d);
  return a;
}

PauliOperator plaquette_stabilizer(const LatticeGeometry& g, int d, int p) {
  if (p < 0 || p >= g.n_plaquettes()) throw std::invalid_argument("lattice: plaquette out of range");
  PauliOperator b = pauli_identity(g.n_edges(), d);
  const SiteSpins s = plaquette_spins(g, p);
  for (int k = 0; k < 4; ++k) b.z[s.edge[k]] = mod_pos(b.z[s.edge[k]] + s.sign[k], d);
  return b;
}

std::pair<int, int> edge_vertices(const LatticeGeometry& g, int edge) {
  const bool vertical = edge % 2;
  const Coord c = coord_of(g, edge / 2);
  if (vertical)  // north (role 1) at (x, y+1), south (role 3) at (x, y)
    return {vertex_index(g, {c.x, c.y + 1}), vertex_index(g, c)};
  // east (role 2) at (x, y), west (role 4) at (x+1, y)
  return {vertex_index(g, c), vertex_index(g, {c.x + 1, c.y})};
}

std::pair<int, int> edge_plaquettes(const LatticeGeometry& g, int edge) {
  const bool vertical = edge % 2;
  const Coord c = coord_of(g, edge / 2);
  if (vertical)  // east (role 2) at p(x-1, y), west (role 4) at p(x, y)
    return {plaquette_index(g, {c.x - 1, c.y}), plaquette_index(g, c)};
  // south (role 3) at p(x, y-1), north (role 1) at p(x, y)
  return {plaquette_index(g, {c.x, c.y - 1}), plaquette_index(g, c)};
}

std::optional<int> connecting_edge(const LatticeGeometry& g, SiteKind kind, int a, int b) {
  const Coord ca = coord_of(g, a), cb = coord_of(g, b);
  const auto dir = step_direction(g, ca, cb);
  if (!dir) return std::nullopt;
  if (kind == SiteKind::vertex) return vertex_step(g, ca, *dir).edge;
  return plaquette_step(g, ca, *dir).edge;
}

PauliOperator string_operator(const LatticeGeometry& g, int d, SiteKind kind,
                              const std::vector<int>& path, GroupElement charge) {
  if (charge.modulus != d) throw std::invalid_argument("lattice: charge modulus mismatch");
  if (path.size() < 2) throw std::invalid_argument("lattice: path needs at least two sites");
  PauliOperator op = pauli_identity(g.n_edges(), d);
  const int gval = charge.value;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const Coord from = coord_of(g, path[i]);
    const Coord to = coord_of(g, path[i + 1]);
    const auto dir = step_direction(g, from, to);
    if (!dir) throw std::invalid_argument("lattice: path is not a chain of adjacent sites");
    if (kind == SiteKind::vertex) {
      // clock power +g where the edge is role 1/2 at the head vertex
      const VertexStep st = vertex_step(g, from, *dir);
      const int sgn = (st.head_role <= 2) ? +1 : -1;
      op.z[st.edge] = mod_pos(op.z[st.edge] + sgn * gval, d);
    } else {
      // shift power +g where the edge is role 2/3 at the head plaquette
      const PlaquetteStep st = plaquette_step(g, from, *dir);
      const int sgn = (st.head_role == 2 || st.head_role == 3) ? +1 : -1;
      op.x[st.edge] = mod_pos(op.x[st.edge] + sgn * gval, d);
    }
  }
  return op;
}

std::vector<int> site_neighbors(const LatticeGeometry& g, SiteKind, int site) {
  const Coord c = coord_of(g, site);
  return {vertex_index(g, {c.x + 1, c.y}), vertex_index(g, {c.x, c.y + 1}),
          vertex_index(g, {c.x - 1, c.y}), vertex_index(g, {c.x, c.y - 1})};
}

int torus_distance(const LatticeGeometry& g, int a, int b) {
  const Coord ca = coord_of(g, a), cb = coord_of(g, b);
  const int dx = std::abs(ca.x - cb.x), dy = std::abs(ca.y - cb.y);
  return std::min(dx, g.lx - dx) + std::min(dy, g.ly - dy);
}

std::vector<int> shortest_site_path(const LatticeGeometry& g, int a, int b) {
  const Coord ca = coord_of(g, a), cb = coord_of(g, b);
  auto displacement = [](int from, int to, int m) {
    const int fwd = mod_pos(to - from, m);
    return fwd <= m - fwd ? fwd : fwd - m;  // ties resolve forward
  };
  const int dx = displacement(ca.x, cb.x, g.lx);
  const int dy = displacement(ca.y, cb.y, g.ly);
  std::vector<int> path{a};
  Coord cur = ca;
  for (int i = 0; i < std::abs(dx); ++i) {
    cur.x = wrap(cur.x + (dx > 0 ? 1 : -1), g.lx);
    path.push_back(vertex_index(g, cur));
  }
  for (int i = 0; i < std::abs(dy); ++i) {
    cur.y = wrap(cur.y + (dy > 0 ? 1 : -1), g.ly);
    path.push_back(vertex_index(g, cur));
  }
  return path;
}

std::vector<int> bfs_site_path(const LatticeGeometry& g, SiteKind kind, int from, int to,
                               const std::set<int>& blocked) {
  if (from == to) return {from};
  std::vector<int> parent(g.n_vertices(), -1);
  std::queue<int> frontier;
  frontier.push(from);
  parent[from] = from;
  while (!frontier.empty()) {
    const int cur = frontier.front();
    frontier.pop();
    for (int nb : site_neighbors(g, kind, cur)) {
      if (parent[nb] >= 0) continue;
      if (nb != to && blocked.count(nb)) continue;
      parent[nb] = cur;
      if (nb == to) {
        std::vector<int> path{to};
        for (int v = to; v != from; v = parent[v]) path.push_back(parent[v]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      frontier.push(nb);
    }
  }
  return {};
}

std::array<int, 4> plaquette_corners(const LatticeGeometry& g, int p) {
  const Coord c = coord_of(g, p);
  return {vertex_index(g, c), vertex_index(g, {c.x + 1, c.y}),
          vertex_index(g, {c.x + 1, c.y + 1}), vertex_index(g, {c.x, c.y + 1})};
}

std::array<int, 4> vertex_surrounding_plaquettes(const LatticeGeometry& g, int v) {
  const Coord c = coord_of(g, v);
  return {plaquette_index(g, {c.x - 1, c.y - 1}), plaquette_index(g, {c.x, c.y - 1}),
          plaquette_index(g, c), plaquette_index(g, {c.x - 1, c.y})};
}

std::string lattice_to_json(const LatticeGeometry& g, int d, const std::set<int>& vertex_holes,
                            const std::set<int>& plaquette_holes) {
  nlohmann::ordered_json j;
  j["lx"] = g.lx;
  j["ly"] = g.ly;
  j["d"] = d;
  j["vertex_holes"] = std::vector<int>(vertex_holes.begin(), vertex_holes.end());
  j["plaquette_holes"] = std::vector<int>(plaquette_holes.begin(), plaquette_holes.end());
  return j.dump();
}

void lattice_from_json(const std::string& text, LatticeGeometry& g, int& d,
                       std::set<int>& vertex_holes, std::set<int>& plaquette_holes) {
  const auto j = nlohmann::json::parse(text);
  g = make_lattice(j.at("lx").get<int>(), j.at("ly").get<int>());
  d = j.at("d").get<int>();
  const auto vh = j.at("vertex_holes").get<std::vector<int>>();
  const auto ph = j.at("plaquette_holes").get<std::vector<int>>();
  vertex_holes = {vh.begin(), vh.end()};
  plaquette_holes = {ph.begin(), ph.end()};
}

}  // namespace qdsim
