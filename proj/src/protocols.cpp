#include "qdsim/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>

namespace qdsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::set<int>& holes_of(CodeState& cs, SiteKind kind) {
  return kind == SiteKind::vertex ? cs.holes.vertices : cs.holes.plaquettes;
}

const std::set<int>& holes_of(const CodeState& cs, SiteKind kind) {
  return kind == SiteKind::vertex ? cs.holes.vertices : cs.holes.plaquettes;
}

void require_dense(const CodeState& cs, const char* what) {
  if (!cs.is_dense()) throw EngineError(std::string(what) + " requires the dense engine");
}

void require_unsplit(const LogicalQudit& q) {
  if (q.row1.size() != 1 || q.row2.size() != 1)
    throw std::invalid_argument("protocol: operation needs an unsplit qudit");
}

/// Route a hole along BFS steps, never passing through other holes of its
/// kind. Throws when no route exists.
void route_hole(CodeState& cs, int id, int row, int index, int to, Rng& rng) {
  LogicalQudit& q = qudit(cs, id);
  const int from = (row == 1 ? q.row1 : q.row2)[index];
  if (from == to) return;
  std::set<int> blocked = holes_of(cs, q.kind);
  blocked.erase(from);
  const auto path = bfs_site_path(*cs.geom, q.kind, from, to, blocked);
  if (path.empty()) throw std::runtime_error("protocol: hole route blocked");
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    move_hole(cs, q.kind, path[i], path[i + 1], rng);
    (row == 1 ? q.row1 : q.row2)[index] = path[i + 1];
  }
}

/// Smallest-index free site of a kind satisfying pred, preferring sites
/// far from existing same-kind holes.
template <typename Pred>
std::optional<int> best_free_site(const CodeState& cs, SiteKind kind, Pred pred) {
  const auto& holes = holes_of(cs, kind);
  const int count = kind == SiteKind::vertex ? cs.geom->n_vertices() : cs.geom->n_plaquettes();
  int best = -1, best_score = -1;
  for (int s = 0; s < count; ++s) {
    if (holes.count(s) || !pred(s)) continue;
    int score = cs.geom->lx + cs.geom->ly;
    for (int h : holes) score = std::min(score, torus_distance(*cs.geom, s, h));
    if (score > best_score) {
      best = s;
      best_score = score;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

/// Free adjacent pair for a fresh ancilla qudit, in canonical (primary,
/// partner) orientation, preferring pairs far from the existing holes and
/// satisfying pred(primary).
template <typename Pred>
std::pair<int, int> find_free_pair(const CodeState& cs, SiteKind kind, Pred pred) {
  const auto& holes = holes_of(cs, kind);
  int best_edge = -1, best_score = -1;
  for (int e = 0; e < cs.geom->n_edges(); ++e) {
    const auto [first, second] = kind == SiteKind::vertex ? edge_vertices(*cs.geom, e)
                                                          : edge_plaquettes(*cs.geom, e);
    if (first == second || holes.count(first) || holes.count(second)) continue;
    if (!pred(first, second)) continue;
    int score = cs.geom->lx + cs.geom->ly;
    for (int h : holes) {
      score = std::min(score, torus_distance(*cs.geom, first, h));
      score = std::min(score, torus_distance(*cs.geom, second, h));
    }
    if (score > best_score) {
      best_score = score;
      best_edge = e;
    }
  }
  if (best_edge < 0) throw std::runtime_error("protocol: no free ancilla slots");
  return kind == SiteKind::vertex ? edge_vertices(*cs.geom, best_edge)
                                  : edge_plaquettes(*cs.geom, best_edge);
}

/// Spin whose surrounding vertex pair and plaquette pair are all free
/// (the measurement cluster used by the ancilla preparation).
int find_cluster_spin(const CodeState& cs) {
  int best = -1, best_score = -1;
  for (int e = 0; e < cs.geom->n_edges(); ++e) {
    const auto [v1, v2] = edge_vertices(*cs.geom, e);
    const auto [p1, p2] = edge_plaquettes(*cs.geom, e);
    if (cs.holes.vertices.count(v1) || cs.holes.vertices.count(v2)) continue;
    if (cs.holes.plaquettes.count(p1) || cs.holes.plaquettes.count(p2)) continue;
    int score = cs.geom->lx + cs.geom->ly;
    for (int h : cs.holes.vertices) {
      score = std::min(score, torus_distance(*cs.geom, v1, h));
      score = std::min(score, torus_distance(*cs.geom, v2, h));
    }
    for (int h : cs.holes.plaquettes) {
      score = std::min(score, torus_distance(*cs.geom, p1, h));
      score = std::min(score, torus_distance(*cs.geom, p2, h));
    }
    if (score > best_score) {
      best_score = score;
      best = e;
    }
  }
  if (best < 0) throw std::runtime_error("protocol: no free measurement cluster");
  return best;
}

/// The single-spin X observable of a qudit whose primary holes straddle
/// `spin` in canonical orientation: the clock operator for vertex qudits,
/// the shift operator for plaquette qudits.
PauliOperator spin_x_observable(const CodeState& cs, const LogicalQudit& q, int spin) {
  return q.kind == SiteKind::vertex ? pauli_z(cs.geom->n_edges(), cs.d, spin)
                                    : pauli_x(cs.geom->n_edges(), cs.d, spin);
}

/// Check/establish the canonical adjacent arrangement of the primary
/// holes and return the shared spin. May move either hole.
int ensure_adjacent_pair(CodeState& cs, int id, Rng& rng) {
  LogicalQudit& q = qudit(cs, id);
  require_unsplit(q);
  auto arranged = [&]() -> std::optional<int> {
    for (int e = 0; e < cs.geom->n_edges(); ++e) {
      const auto [first, second] = q.kind == SiteKind::vertex ? edge_vertices(*cs.geom, e)
                                                              : edge_plaquettes(*cs.geom, e);
      if (first == q.row1[0] && second == q.row2[0]) return e;
    }
    return std::nullopt;
  };
  if (auto e = arranged()) return *e;

  const auto& holes = holes_of(cs, q.kind);
  // Try to park the primary hole next to the partner with the right
  // orientation; fall back to moving the partner.
  for (int pass = 0; pass < 2; ++pass) {
    const int anchor = pass == 0 ? q.row2[0] : q.row1[0];
    const int moving_row = pass == 0 ? 1 : 2;
    for (int e = 0; e < cs.geom->n_edges(); ++e) {
      const auto [first, second] = q.kind == SiteKind::vertex ? edge_vertices(*cs.geom, e)
                                                              : edge_plaquettes(*cs.geom, e);
      const int target = pass == 0 ? first : second;
      const int fixed = pass == 0 ? second : first;
      if (fixed != anchor) continue;
      if (target != (pass == 0 ? q.row1[0] : q.row2[0]) && holes.count(target)) continue;
      route_hole(cs, id, moving_row, 0, target, rng);
      return e;
    }
  }
  throw std::runtime_error("protocol: cannot arrange holes across a spin");
}

void record(ProtocolTranscript& t, const PauliOperator& corr) {
  if (!is_identity(corr)) t.corrections.push_back(corr);
}

std::vector<double> theta_retry_update(const std::vector<double>& theta, int m) {
  const int d = static_cast<int>(theta.size());
  std::vector<double> next(d);
  for (int k = 0; k < d; ++k) next[k] = theta[k] - theta[(k + m) % d];
  return next;
}

bool theta_is_trivial(const std::vector<double>& theta) {
  for (double t : theta) {
    const double delta = std::remainder(t - theta[0], kTwoPi);
    if (std::abs(delta) > 1e-12) return false;
  }
  return true;
}

}  // namespace

std::string transcript_to_json(const ProtocolTranscript& t, const std::string& name) {
  nlohmann::ordered_json j;
  j["protocol"] = name;
  j["attempts"] = t.attempts;
  j["outcomes"] = t.outcomes;
  std::vector<std::string> corr;
  corr.reserve(t.corrections.size());
  for (const auto& c : t.corrections) corr.push_back(to_string(c));
  j["corrections"] = corr;
  j["success"] = t.success;
  return j.dump();
}

int encode_qudit(CodeState& cs, SiteKind kind, int primary, int partner) {
  if (primary == partner) throw std::invalid_argument("protocol: holes must be distinct");
  open_hole(cs, kind, primary);
  open_hole(cs, kind, partner);
  LogicalQudit q;
  q.kind = kind;
  q.row1 = {primary};
  q.row2 = {partner};
  q.d = cs.d;
  cs.qudits.push_back(q);
  return static_cast<int>(cs.qudits.size()) - 1;
}

LogicalQudit& qudit(CodeState& cs, int id) {
  if (id < 0 || id >= static_cast<int>(cs.qudits.size()) || cs.qudits[id].row1.empty())
    throw std::invalid_argument("protocol: invalid qudit");
  return cs.qudits[id];
}

const LogicalQudit& qudit(const CodeState& cs, int id) {
  if (id < 0 || id >= static_cast<int>(cs.qudits.size()) || cs.qudits[id].row1.empty())
    throw std::invalid_argument("protocol: invalid qudit");
  return cs.qudits[id];
}

void discard_qudit(CodeState& cs, int id, Rng& rng) {
  LogicalQudit& q = qudit(cs, id);
  std::vector<std::pair<int, int>> absorbed;
  for (int row = 1; row <= 2; ++row)
    for (int site : row == 1 ? q.row1 : q.row2)
      absorbed.emplace_back(site, close_hole(cs, q.kind, site, rng));
  // Annihilate what the holes held: haul every revealed anyon to one
  // collection point; conservation cancels the total there.
  const int collector = absorbed.front().first;
  for (size_t i = 1; i < absorbed.size(); ++i) {
    const auto [site, val] = absorbed[i];
    if (val == 0) continue;
    const auto path = shortest_site_path(*cs.geom, collector, site);
    apply_pauli_op(cs, string_operator(*cs.geom, cs.d, q.kind, path, GroupElement(-val, cs.d)));
  }
  q.row1.clear();
  q.row2.clear();
}

PauliOperator logical_x_pauli(const CodeState& cs, int id, int k) {
  const LogicalQudit& q = qudit(cs, id);
  const auto path = shortest_site_path(*cs.geom, q.row2[0], q.row1[0]);
  return string_operator(*cs.geom, cs.d, q.kind, path, GroupElement(k, cs.d));
}

PauliOperator logical_z_pauli(const CodeState& cs, int id, int k) {
  const LogicalQudit& q = qudit(cs, id);
  PauliOperator op = pauli_identity(cs.geom->n_edges(), cs.d);
  for (int site : q.row1) {
    const PauliOperator stab = site_stabilizer(cs, q.kind, site);
    op = compose(op, pauli_power(stab, mod_pos(k, cs.d)));
  }
  return op;
}

void logical_x(CodeState& cs, int id, int k) {
  if (mod_pos(k, cs.d) == 0) return;
  apply_pauli_op(cs, logical_x_pauli(cs, id, k));
}

void logical_z(CodeState& cs, int id, int k) {
  if (mod_pos(k, cs.d) == 0) return;
  apply_pauli_op(cs, logical_z_pauli(cs, id, k));
}

int measure_logical_z(CodeState& cs, int id, Rng& rng) {
  const LogicalQudit& q = qudit(cs, id);
  int total = 0;
  for (int site : q.row1) total += measure_pauli_op(cs, site_stabilizer(cs, q.kind, site), rng);
  return mod_pos(total, cs.d);
}

int measure_logical_x(CodeState& cs, int id, Rng& rng) {
  const LogicalQudit& q = qudit(cs, id);
  std::vector<int> votes;
  for (int from : q.row2)
    for (int to : q.row1) {
      const auto path = shortest_site_path(*cs.geom, from, to);
      const PauliOperator s = string_operator(*cs.geom, cs.d, q.kind, path, GroupElement(1, cs.d));
      votes.push_back(measure_pauli_op(cs, s, rng));
    }
  // Majority vote; ties resolve toward 0, then the smaller exponent.
  std::vector<int> counts(cs.d, 0);
  for (int v : votes) ++counts[v];
  int winner = 0;
  for (int v = 1; v < cs.d; ++v)
    if (counts[v] > counts[winner]) winner = v;
  return winner;
}

int measure_logical_x_spin(CodeState& cs, int id, int spin, Rng& rng, int forced_outcome) {
  const LogicalQudit& q = qudit(cs, id);
  require_unsplit(q);
  const auto [first, second] = q.kind == SiteKind::vertex ? edge_vertices(*cs.geom, spin)
                                                          : edge_plaquettes(*cs.geom, spin);
  if (first != q.row1[0] || second != q.row2[0])
    throw std::invalid_argument("protocol: qudit is not arranged across this spin");
  const PauliOperator obs = spin_x_observable(cs, q, spin);
  if (forced_outcome >= 0) {
    project_pauli_op(cs, obs, forced_outcome);
    return mod_pos(forced_outcome, cs.d);
  }
  return measure_pauli_op(cs, obs, rng);
}

int prepare_x_eigenstate_at(CodeState& cs, SiteKind kind, int primary, int partner, Rng& rng) {
  const int id = encode_qudit(cs, kind, primary, partner);
  const int m = measure_logical_x(cs, id, rng);
  logical_z(cs, id, m);  // |m-tilde> -> |0-tilde>
  return id;
}

int prepare_x_eigenstate(CodeState& cs, SiteKind kind, Rng& rng) {
  const auto [primary, partner] = find_free_pair(cs, kind, [](int, int) { return true; });
  return prepare_x_eigenstate_at(cs, kind, primary, partner, rng);
}

void move_qudit_hole(CodeState& cs, int id, int row, int index, int to, Rng& rng) {
  route_hole(cs, id, row, index, to, rng);
}

void braid_controlled_z(CodeState& cs, int qv_id, int qp_id, bool clockwise, Rng& rng,
                        SiteKind mover) {
  if (qv_id == qp_id) throw std::invalid_argument("protocol: braid needs distinct qudits");
  LogicalQudit& qv = qudit(cs, qv_id);
  LogicalQudit& qp = qudit(cs, qp_id);
  if (qv.kind != SiteKind::vertex || qp.kind != SiteKind::plaquette)
    throw std::invalid_argument("protocol: braid pairs a vertex qudit with a plaquette qudit");
  require_unsplit(qv);
  require_unsplit(qp);

  const bool vertex_moves = mover == SiteKind::vertex;
  const int mover_id = vertex_moves ? qv_id : qp_id;
  LogicalQudit& mq = vertex_moves ? qv : qp;
  const int anchor = vertex_moves ? qp.row1[0] : qv.row1[0];

  // Ring of sites the travelling hole walks through. Clockwise both ways:
  // corner vertices of the anchor plaquette, or the plaquettes around the
  // anchor vertex.
  std::array<int, 4> ring = vertex_moves ? plaquette_corners(*cs.geom, anchor)
                                         : vertex_surrounding_plaquettes(*cs.geom, anchor);

  // Park the partner hole off the ring.
  const int partner = mq.row2[0];
  if (std::count(ring.begin(), ring.end(), partner) > 0) {
    auto off_ring = [&](int s) {
      return std::count(ring.begin(), ring.end(), s) == 0 && s != mq.row1[0];
    };
    const auto spot = best_free_site(cs, mq.kind, off_ring);
    if (!spot) throw std::runtime_error("protocol: no parking space for the partner hole");
    route_hole(cs, mover_id, 2, 0, *spot, rng);
  }
  // The ring must otherwise be clear of holes of the travelling kind.
  const auto& holes = holes_of(cs, mq.kind);
  for (int site : ring)
    if (site != mq.row1[0] && holes.count(site))
      throw std::runtime_error("protocol: braid ring is blocked");

  // Bring the travelling hole onto the ring.
  if (std::count(ring.begin(), ring.end(), mq.row1[0]) == 0) {
    int best = -1, best_dist = -1;
    for (int site : ring) {
      const int dist = torus_distance(*cs.geom, mq.row1[0], site);
      if (best < 0 || dist < best_dist || (dist == best_dist && site < best)) {
        best = site;
        best_dist = dist;
      }
    }
    route_hole(cs, mover_id, 1, 0, best, rng);
  }

  int at = static_cast<int>(
      std::find(ring.begin(), ring.end(), mq.row1[0]) - ring.begin());
  for (int step = 0; step < 4; ++step) {
    at = clockwise ? (at + 1) % 4 : (at + 3) % 4;
    move_hole(cs, mq.kind, mq.row1[0], ring[at], rng);
    mq.row1[0] = ring[at];
  }
}

std::pair<ProtocolTranscript, int> fourier_teleport(CodeState& cs, int source, Rng& rng,
                                                    int forced_x) {
  ProtocolTranscript tr;
  const SiteKind src_kind = qudit(cs, source).kind;
  const SiteKind dst_kind =
      src_kind == SiteKind::vertex ? SiteKind::plaquette : SiteKind::vertex;

  int anc;
  if (dst_kind == SiteKind::vertex) {
    // The source plaquette hole will walk the ring around the ancilla's
    // primary vertex: that ring must not contain the source's partner.
    const int src_p2 = qudit(cs, source).row2[0];
    const auto& pholes = holes_of(cs, SiteKind::plaquette);
    auto pred = [&](int primary, int) {
      for (int site : vertex_surrounding_plaquettes(*cs.geom, primary))
        if (site == src_p2 || (pholes.count(site) && site != qudit(cs, source).row1[0]))
          return false;
      return true;
    };
    const auto [primary, partner] = find_free_pair(cs, SiteKind::vertex, pred);
    anc = prepare_x_eigenstate_at(cs, SiteKind::vertex, primary, partner, rng);
  } else {
    const auto [primary, partner] = find_free_pair(cs, SiteKind::plaquette,
                                                   [](int, int) { return true; });
    anc = prepare_x_eigenstate_at(cs, SiteKind::plaquette, primary, partner, rng);
  }

  if (src_kind == SiteKind::vertex)
    braid_controlled_z(cs, source, anc, /*clockwise=*/true, rng, SiteKind::vertex);
  else
    braid_controlled_z(cs, anc, source, /*clockwise=*/true, rng, SiteKind::plaquette);

  const int spin = ensure_adjacent_pair(cs, source, rng);
  const int m = measure_logical_x_spin(cs, source, spin, rng, forced_x);
  tr.outcomes.push_back(m);
  record(tr, logical_x_pauli(cs, anc, m));
  logical_x(cs, anc, m);
  discard_qudit(cs, source, rng);
  return {tr, anc};
}

std::pair<ProtocolTranscript, int> prepare_theta_intermediate(CodeState& cs,
                                                              const std::vector<double>& theta,
                                                              Rng& rng, int max_attempts) {
  require_dense(cs, "phase-state preparation");
  const int d = cs.d;
  if (static_cast<int>(theta.size()) != d)
    throw std::invalid_argument("protocol: theta must have d entries");

  // Telescoped measurement phases: phi_0 = 0 and phi_{j+1} - phi_j =
  // theta_j - mean(theta), so the achievable coefficient cycle closes and
  // the target is met up to a global phase.
  double mean = 0.0;
  for (double t : theta) mean += t;
  mean /= d;
  std::vector<double> phi(d, 0.0);
  for (int j = 0; j + 1 < d; ++j) phi[j + 1] = phi[j] + (theta[j] - mean);

  Eigen::MatrixXcd basis(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      const double angle = phi[j] + kTwoPi * k * j / d;
      basis(j, k) = scale * std::complex<double>(std::cos(angle), std::sin(angle));
    }

  ProtocolTranscript tr;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    tr.attempts = attempt;
    const int spin = find_cluster_spin(cs);
    const auto [v1, v2] = edge_vertices(*cs.geom, spin);
    const auto [p1, p2] = edge_plaquettes(*cs.geom, spin);
    const int qv = encode_qudit(cs, SiteKind::vertex, v1, v2);
    const int qp = encode_qudit(cs, SiteKind::plaquette, p1, p2);

    const auto rec = measure_in_basis(cs.dense(), spin, basis, rng, "phi");
    tr.outcomes.push_back(rec.outcome);
    if (rec.outcome != 0) {
      record(tr, logical_z_pauli(cs, qp, mod_pos(-rec.outcome, d)));
      logical_z(cs, qp, -rec.outcome);
    }
    logical_x(cs, qp, -1);
    const int g = measure_logical_z(cs, qp, rng);
    tr.outcomes.push_back(g);
    if (g == 0) {
      discard_qudit(cs, qp, rng);
      tr.success = true;
      return {tr, qv};
    }
    discard_qudit(cs, qp, rng);
    discard_qudit(cs, qv, rng);
  }
  tr.success = false;
  return {tr, -1};
}

std::pair<ProtocolTranscript, int> prepare_ancilla_theta(CodeState& cs,
                                                         const std::vector<double>& theta,
                                                         Rng& rng, int max_attempts) {
  auto [tr, qv] = prepare_theta_intermediate(cs, theta, rng, max_attempts);
  if (!tr.success) return {tr, -1};
  auto [ttr, qp] = fourier_teleport(cs, qv, rng);
  tr.outcomes.insert(tr.outcomes.end(), ttr.outcomes.begin(), ttr.outcomes.end());
  tr.corrections.insert(tr.corrections.end(), ttr.corrections.begin(), ttr.corrections.end());
  return {tr, qp};
}

ProtocolTranscript phase_gate_rus(CodeState& cs, int id, const std::vector<double>& theta,
                                  Rng& rng, int max_attempts) {
  require_dense(cs, "repeat-until-success phase gate");
  if (qudit(cs, id).kind != SiteKind::plaquette)
    throw std::invalid_argument("protocol: phase gate acts on plaquette-type qudits");

  ProtocolTranscript tr;
  std::vector<double> current = theta;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    tr.attempts = attempt;
    if (theta_is_trivial(current)) {  // nothing left to rotate
      tr.success = true;
      return tr;
    }
    auto [ptr, qv] = prepare_theta_intermediate(cs, current, rng, max_attempts);
    tr.outcomes.insert(tr.outcomes.end(), ptr.outcomes.begin(), ptr.outcomes.end());
    if (!ptr.success) break;
    braid_controlled_z(cs, qv, id, /*clockwise=*/true, rng, SiteKind::vertex);
    auto [ttr, anc] = fourier_teleport(cs, qv, rng);
    tr.outcomes.insert(tr.outcomes.end(), ttr.outcomes.begin(), ttr.outcomes.end());
    const int m = measure_logical_z(cs, anc, rng);
    tr.outcomes.push_back(m);
    discard_qudit(cs, anc, rng);
    if (m == 0) {
      tr.success = true;
      return tr;
    }
    current = theta_retry_update(current, m);
  }
  tr.success = false;
  return tr;
}

std::pair<ProtocolTranscript, int> controlled_x(CodeState& cs, int control, int target, Rng& rng) {
  if (control == target) throw std::invalid_argument("protocol: control equals target");
  if (qudit(cs, control).kind != qudit(cs, target).kind)
    throw std::invalid_argument("protocol: controlled-X pairs same-kind qudits");

  ProtocolTranscript tr;
  auto chain = [&](int q) {
    auto [t, next] = fourier_teleport(cs, q, rng);
    tr.outcomes.insert(tr.outcomes.end(), t.outcomes.begin(), t.outcomes.end());
    tr.corrections.insert(tr.corrections.end(), t.corrections.begin(), t.corrections.end());
    return next;
  };

  int t1 = chain(target);  // F on the target
  if (qudit(cs, control).kind == SiteKind::plaquette)
    braid_controlled_z(cs, t1, control, /*clockwise=*/true, rng, SiteKind::vertex);
  else
    braid_controlled_z(cs, control, t1, /*clockwise=*/true, rng, SiteKind::vertex);
  int t2 = chain(t1);  // F^3 = F^dagger
  int t3 = chain(t2);
  int t4 = chain(t3);
  return {tr, t4};
}

void split_hole(CodeState& cs, int id, int row, Rng& rng) {
  LogicalQudit& q = qudit(cs, id);
  if (row != 1 && row != 2) throw std::invalid_argument("protocol: row must be 1 or 2");
  auto& sites = row == 1 ? q.row1 : q.row2;
  const int tail = sites.back();

  const auto& holes = holes_of(cs, q.kind);
  int next = -1, edge = -1;
  for (int nb : site_neighbors(*cs.geom, q.kind, tail)) {
    if (holes.count(nb)) continue;
    next = nb;
    edge = *connecting_edge(*cs.geom, q.kind, tail, nb);
    break;
  }
  if (next < 0) throw std::runtime_error("protocol: no free neighbor to split into");

  open_hole(cs, q.kind, next);
  const PauliOperator edge_obs = q.kind == SiteKind::vertex
                                     ? pauli_z(cs.geom->n_edges(), cs.d, edge)
                                     : pauli_x(cs.geom->n_edges(), cs.d, edge);
  const int g = measure_pauli_op(cs, edge_obs, rng);
  if (g != 0) {
    // Flatten the shared spin to the identity element with the new
    // hole's own stabilizer; a full star/boundary operator creates no
    // anyons anywhere.
    const PauliOperator stab = site_stabilizer(cs, q.kind, next);
    apply_pauli_op(cs, pauli_power(stab, correction_power(edge_obs, stab, g)));
  }
  sites.push_back(next);
}

void set_logical_state(CodeState& cs, int id, const Eigen::VectorXcd& coeffs) {
  require_dense(cs, "logical state loading");
  if (coeffs.size() != cs.d) throw std::invalid_argument("protocol: need d coefficients");
  const LogicalQudit& q = qudit(cs, id);
  require_unsplit(q);
  StateVector& s = cs.dense();
  const Eigen::VectorXcd base = s.amps;
  Eigen::VectorXcd acc = coeffs[0] * base;
  StateVector walker = s;
  const PauliOperator step = logical_x_pauli(cs, id, 1);
  for (int j = 1; j < cs.d; ++j) {
    apply_pauli(walker, step);
    acc += coeffs[j] * walker.amps;
  }
  const double nrm = acc.norm();
  if (nrm < 1e-12) throw std::invalid_argument("protocol: degenerate coefficients");
  s.amps = acc / nrm;
}

Eigen::VectorXcd extract_logical_amplitudes(const CodeState& cs, int id) {
  require_dense(cs, "logical state readout");
  const LogicalQudit& q = qudit(cs, id);
  const PauliOperator zobs = site_stabilizer(cs, q.kind, q.row1[0]);
  const Eigen::ArrayXd probs = pauli_outcome_probabilities(cs.dense(), zobs);
  int anchor = 0;
  for (int j = 1; j < cs.d; ++j)
    if (probs[j] > probs[anchor]) anchor = j;

  StateVector ref = cs.dense();
  project_pauli(ref, zobs, anchor);
  Eigen::VectorXcd amps(cs.d);
  StateVector walker = ref;
  // Rotate the reference down to the 0 sector, then ladder upward.
  apply_pauli(walker, logical_x_pauli(cs, id, mod_pos(-anchor, cs.d)));
  for (int j = 0; j < cs.d; ++j) {
    amps[j] = overlap(walker, cs.dense());
    if (j + 1 < cs.d) apply_pauli(walker, logical_x_pauli(cs, id, 1));
  }
  return amps;
}

double logical_fidelity(const CodeState& cs, int id, const Eigen::VectorXcd& target) {
  const Eigen::VectorXcd c = extract_logical_amplitudes(cs, id);
  const Eigen::VectorXcd t = target / target.norm();
  return std::norm(t.dot(c));
}

}  // namespace qdsim
