#include "qdsim/noise.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qdsim/protocols.hpp"

namespace qdsim {

namespace {

struct Anyon {
  int site;
  int charge;
};

/// One matching sector (charges against vertex holes, or fluxes against
/// plaquette holes).
void decode_sector(const LatticeGeometry& g, int d, SiteKind kind,
                   const std::map<int, int>& visible, const std::set<int>& holes,
                   Correction& out) {
  std::vector<Anyon> anyons;
  for (const auto& [site, charge] : visible)
    if (charge != 0) anyons.push_back({site, charge});
  if (anyons.empty()) return;
  if (holes.empty()) {
    int total = 0;
    for (const auto& a : anyons) total += a.charge;
    if (mod_pos(total, d) != 0) throw std::invalid_argument("decode: inconsistent syndrome");
  }

  while (!anyons.empty()) {
    // Best (distance, anyon-before-hole, anyon site, partner site).
    int bi = -1, bj = -1, bhole = -1;
    std::array<int, 4> best{};
    auto consider = [&](std::array<int, 4> key, int i, int j, int hole) {
      if (bi < 0 || key < best) {
        best = key;
        bi = i;
        bj = j;
        bhole = hole;
      }
    };
    for (size_t i = 0; i < anyons.size(); ++i) {
      for (size_t j = 0; j < anyons.size(); ++j) {
        if (i == j) continue;
        if (mod_pos(anyons[i].charge + anyons[j].charge, d) != 0) continue;
        consider({torus_distance(g, anyons[i].site, anyons[j].site), 0, anyons[i].site,
                  anyons[j].site},
                 static_cast<int>(i), static_cast<int>(j), -1);
      }
      for (int h : holes)
        consider({torus_distance(g, anyons[i].site, h), 1, anyons[i].site, h},
                 static_cast<int>(i), -1, h);
    }
    if (bi < 0) throw std::invalid_argument("decode: unmatched anyon");

    const Anyon a = anyons[bi];
    const int target = bj >= 0 ? anyons[bj].site : bhole;
    const auto path = shortest_site_path(g, a.site, target);
    out.applied = compose(out.applied,
                          string_operator(g, d, kind, path, GroupElement(a.charge, d)));
    out.assignments.emplace_back(a.site, target);
    if (bj >= 0) {
      const size_t hi = std::max(bi, bj), lo = std::min(bi, bj);
      anyons.erase(anyons.begin() + static_cast<long>(hi));
      anyons.erase(anyons.begin() + static_cast<long>(lo));
    } else {
      anyons.erase(anyons.begin() + static_cast<long>(bi));
    }
  }
}

std::vector<int> majority_votes(const EncodingFrame& f, const PauliOperator& residual) {
  std::vector<int> votes;
  for (const auto& s : f.cross_strings) {
    const int kappa = commutation_exponent(f.z_loop, s);
    votes.push_back(mod_pos(static_cast<int64_t>(commutation_exponent(residual, s)) *
                                inv_mod(kappa, f.d),
                            f.d));
  }
  return votes;
}

/// Enumerate faults of one species up to max_weight, invoking fn(fault).
template <typename Fn>
void for_each_fault(const LatticeGeometry& g, int d, bool clock_faults, int max_weight, Fn fn) {
  const int n = g.n_edges();
  PauliOperator fault = pauli_identity(n, d);
  auto set_power = [&](int edge, int power) {
    if (clock_faults)
      fault.z[edge] = power;
    else
      fault.x[edge] = power;
  };
  if (max_weight >= 1) {
    for (int e = 0; e < n; ++e)
      for (int k = 1; k < d; ++k) {
        set_power(e, k);
        fn(fault, 1);
        set_power(e, 0);
      }
  }
  if (max_weight >= 2) {
    for (int e1 = 0; e1 < n; ++e1)
      for (int e2 = e1 + 1; e2 < n; ++e2)
        for (int k1 = 1; k1 < d; ++k1)
          for (int k2 = 1; k2 < d; ++k2) {
            set_power(e1, k1);
            set_power(e2, k2);
            fn(fault, 2);
            set_power(e1, 0);
            set_power(e2, 0);
          }
  }
  if (max_weight >= 3) throw std::invalid_argument("noise: enumeration capped at weight 2");
}

TrialResult classify(const TrialConfig& cfg, const EncodingFrame& frame,
                     const PauliOperator& fault, int weight, uint64_t seed) {
  const Syndrome syn = syndrome_of_fault(*frame.geom, cfg.d, frame.holes, fault);
  const Correction corr = decode_greedy(syn, frame.holes, *frame.geom, cfg.d);
  const PauliOperator residual = compose(corr.applied, fault);

  TrialResult result;
  result.fault_weight = weight;
  result.seed = seed;
  result.x_power = logical_x_power(frame, residual);
  result.z_power = logical_z_power(frame, residual);
  if (result.x_power != 0)
    result.kind = LogicalErrorKind::x_type;
  else if (result.z_power != 0)
    result.kind = LogicalErrorKind::z_type;
  return result;
}

}  // namespace

FaultRecord sample_fault(const LatticeGeometry& g, int d, const NoiseModel& m, Rng& rng) {
  FaultRecord rec;
  rec.pauli = pauli_identity(g.n_edges(), d);
  for (int e = 0; e < g.n_edges(); ++e) {
    bool hit = false;
    if (rng.uniform01() < m.p_x) {
      rec.pauli.x[e] = 1 + rng.uniform_int(d - 1);
      hit = true;
    }
    if (rng.uniform01() < m.p_z) {
      rec.pauli.z[e] = 1 + rng.uniform_int(d - 1);
      hit = true;
    }
    if (hit) ++rec.weight;
  }
  return rec;
}

Syndrome syndrome_of_fault(const LatticeGeometry& g, int d, const HoleSet& holes,
                           const PauliOperator& fault) {
  Syndrome syn;
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (holes.is_open(SiteKind::vertex, v)) continue;
    const int c = commutation_exponent(vertex_stabilizer(g, d, v), fault);
    if (c != 0) syn.vertex_charges[v] = c;
  }
  for (int p = 0; p < g.n_plaquettes(); ++p) {
    if (holes.is_open(SiteKind::plaquette, p)) continue;
    const int c = commutation_exponent(plaquette_stabilizer(g, d, p), fault);
    if (c != 0) syn.plaquette_fluxes[p] = c;
  }
  return syn;
}

Correction decode_greedy(const Syndrome& syn, const HoleSet& holes, const LatticeGeometry& g,
                         int d) {
  Correction out;
  out.applied = pauli_identity(g.n_edges(), d);
  decode_sector(g, d, SiteKind::vertex, syn.vertex_charges, holes.vertices, out);
  decode_sector(g, d, SiteKind::plaquette, syn.plaquette_fluxes, holes.plaquettes, out);
  return out;
}

EncodingFrame make_frame(const TrialConfig& cfg) {
  EncodingFrame f;
  f.geom = std::make_shared<LatticeGeometry>(make_lattice(cfg.lx, cfg.ly));
  f.d = cfg.d;
  f.kind = cfg.kind;
  if (cfg.separation < 1 || 2 * cfg.separation > cfg.lx)
    throw std::invalid_argument("noise: lattice too small for the separation");
  if (cfg.rows + 1 > cfg.ly) throw std::invalid_argument("noise: lattice too small for the rows");

  auto site = [&](int x, int y) {
    return cfg.kind == SiteKind::vertex ? vertex_index(*f.geom, {x, y})
                                        : plaquette_index(*f.geom, {x, y});
  };
  f.q.kind = cfg.kind;
  f.q.d = cfg.d;
  for (int r = 0; r < cfg.rows; ++r) {
    f.q.row1.push_back(site(0, r));
    f.q.row2.push_back(site(cfg.separation, r));
  }
  auto& holes = cfg.kind == SiteKind::vertex ? f.holes.vertices : f.holes.plaquettes;
  for (int s : f.q.row1) holes.insert(s);
  for (int s : f.q.row2) holes.insert(s);

  auto cross = [&](int from, int to) {
    return string_operator(*f.geom, cfg.d, cfg.kind, shortest_site_path(*f.geom, from, to),
                           GroupElement(1, cfg.d));
  };
  f.x_rep = cross(f.q.row2[0], f.q.row1[0]);
  f.z_loop = pauli_identity(f.geom->n_edges(), cfg.d);
  for (int s : f.q.row1) {
    const PauliOperator stab = cfg.kind == SiteKind::vertex
                                   ? vertex_stabilizer(*f.geom, cfg.d, s)
                                   : plaquette_stabilizer(*f.geom, cfg.d, s);
    f.z_loop = compose(f.z_loop, stab);
  }
  for (int from : f.q.row2)
    for (int to : f.q.row1) f.cross_strings.push_back(cross(from, to));
  return f;
}

int logical_x_power(const EncodingFrame& f, const PauliOperator& residual) {
  const int kappa = commutation_exponent(f.x_rep, f.z_loop);
  return mod_pos(static_cast<int64_t>(commutation_exponent(residual, f.z_loop)) *
                     inv_mod(kappa, f.d),
                 f.d);
}

int logical_z_power(const EncodingFrame& f, const PauliOperator& residual) {
  const std::vector<int> votes = majority_votes(f, residual);
  std::vector<int> counts(f.d, 0);
  for (int v : votes) ++counts[v];
  int winner = 0;
  for (int v = 1; v < f.d; ++v)
    if (counts[v] > counts[winner]) winner = v;
  return winner;
}

TrialResult run_trial(const TrialConfig& cfg, uint64_t seed) {
  const EncodingFrame frame = make_frame(cfg);
  Rng rng = Rng::derive(seed, 0);
  const FaultRecord fault = sample_fault(*frame.geom, cfg.d, cfg.noise, rng);
  return classify(cfg, frame, fault.pauli, fault.weight, seed);
}

TrialResult run_trial_stateful(const TrialConfig& cfg, uint64_t seed, bool check_x) {
  const EncodingFrame frame = make_frame(cfg);
  Rng rng = Rng::derive(seed, 0);

  auto geom = frame.geom;
  CodeState cs = ground_state(geom, cfg.d, cfg.engine, rng);
  const int q = encode_qudit(cs, cfg.kind, frame.q.row1[0], frame.q.row2[0]);
  for (int r = 1; r < cfg.rows; ++r) {
    // The frame rows grow downward; split follows the same layout.
    split_hole(cs, q, 1, rng);
    split_hole(cs, q, 2, rng);
  }
  if (qudit(cs, q).row1 != frame.q.row1 || qudit(cs, q).row2 != frame.q.row2)
    throw std::logic_error("noise: stateful layout deviates from the frame");

  if (!check_x) {
    const int m = measure_logical_x(cs, q, rng);
    logical_z(cs, q, m);  // fix |0~>
  }

  StateVector snapshot;
  if (cs.is_dense()) snapshot = cs.dense();

  const FaultRecord fault = sample_fault(*geom, cfg.d, cfg.noise, rng);
  apply_pauli_op(cs, fault.pauli);
  const Syndrome syn = extract_syndrome(cs);
  const Correction corr = decode_greedy(syn, cs.holes, *geom, cfg.d);
  apply_pauli_op(cs, corr.applied);
  if (!extract_syndrome(cs).empty()) throw std::logic_error("noise: correction left anyons");

  TrialResult result;
  result.fault_weight = fault.weight;
  result.seed = seed;
  if (check_x) {
    result.x_power = measure_logical_z(cs, q, rng);
    if (result.x_power != 0) result.kind = LogicalErrorKind::x_type;
  } else {
    const int m = measure_logical_x(cs, q, rng);
    result.z_power = mod_pos(-m, cfg.d);
    if (result.z_power != 0) result.kind = LogicalErrorKind::z_type;
  }
  if (cs.is_dense()) {
    const double fid = std::norm(overlap(snapshot, cs.dense()));
    const bool clean = result.kind == LogicalErrorKind::none;
    // A clean trial must return the exact state; an error must not.
    if (clean != (fid > 1.0 - 1e-9)) {
      // Z-sector errors are invisible to |0>-basis fidelity only when the
      // readout missed them, which the majority classification prevents.
      throw std::logic_error("noise: fidelity disagrees with logical readout");
    }
  }
  return result;
}

RatePoint estimate_logical_rate(const TrialConfig& cfg, int trials, uint64_t master_seed,
                                int workers) {
  if (trials < 1) throw std::invalid_argument("noise: need at least one trial");
  const EncodingFrame frame = make_frame(cfg);
  std::vector<TrialResult> results(trials);

  auto work = [&](int begin, int end) {
    for (int t = begin; t < end; ++t) {
      Rng rng = Rng::derive(master_seed, static_cast<uint64_t>(t));
      const FaultRecord fault = sample_fault(*frame.geom, cfg.d, cfg.noise, rng);
      results[t] = classify(cfg, frame, fault.pauli, fault.weight,
                            master_seed ^ static_cast<uint64_t>(t));
    }
  };
  workers = std::max(1, workers);
  if (workers == 1) {
    work(0, trials);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(trials, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  RatePoint point;
  point.p = std::max(cfg.noise.p_x, cfg.noise.p_z);
  point.trials = trials;
  for (const auto& r : results) {
    if (r.x_power != 0) ++point.x_errors;
    if (r.z_power != 0) ++point.z_errors;
  }
  point.x_rate = static_cast<double>(point.x_errors) / trials;
  point.z_rate = static_cast<double>(point.z_errors) / trials;
  std::tie(point.x_lo, point.x_hi) = wilson_interval(point.x_errors, trials);
  std::tie(point.z_lo, point.z_hi) = wilson_interval(point.z_errors, trials);
  return point;
}

std::pair<double, double> wilson_interval(int successes, int trials) {
  const double z = 1.959963984540054;  // 95%
  const double n = trials;
  const double phat = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double fit_scaling_exponent(const std::vector<std::pair<double, double>>& rates) {
  if (rates.size() < 3) throw std::invalid_argument("fit: need at least three points");
  Eigen::MatrixXd a(rates.size(), 2);
  Eigen::VectorXd y(rates.size());
  for (size_t i = 0; i < rates.size(); ++i) {
    if (rates[i].first <= 0 || rates[i].second <= 0)
      throw std::invalid_argument("fit: rates and probabilities must be positive");
    a(i, 0) = std::log(rates[i].first);
    a(i, 1) = 1.0;
    y(i) = std::log(rates[i].second);
  }
  const Eigen::Vector2d sol = a.colPivHouseholderQr().solve(y);
  return sol[0];
}

ExhaustiveReport exhaustive_search_logical(const TrialConfig& cfg, int max_weight,
                                           bool clock_faults, bool detect_x) {
  const EncodingFrame frame = make_frame(cfg);
  ExhaustiveReport report;
  for_each_fault(*frame.geom, cfg.d, clock_faults, max_weight,
                 [&](const PauliOperator& fault, int weight) {
                   if (report.found && report.weight <= weight) return;
                   const Syndrome syn =
                       syndrome_of_fault(*frame.geom, cfg.d, frame.holes, fault);
                   const Correction corr = decode_greedy(syn, frame.holes, *frame.geom, cfg.d);
                   const PauliOperator residual = compose(corr.applied, fault);
                   const int power = detect_x ? logical_x_power(frame, residual)
                                              : logical_z_power(frame, residual);
                   if (power != 0) {
                     report.found = true;
                     report.weight = weight;
                     report.example = fault;
                   }
                 });
  return report;
}

double enumerate_failure_probability(const TrialConfig& cfg, int max_weight, bool clock_faults,
                                     bool detect_x, double p) {
  const EncodingFrame frame = make_frame(cfg);
  const int n = frame.geom->n_edges();
  double total = 0.0;
  for_each_fault(*frame.geom, cfg.d, clock_faults, max_weight,
                 [&](const PauliOperator& fault, int weight) {
                   const Syndrome syn =
                       syndrome_of_fault(*frame.geom, cfg.d, frame.holes, fault);
                   const Correction corr = decode_greedy(syn, frame.holes, *frame.geom, cfg.d);
                   const PauliOperator residual = compose(corr.applied, fault);
                   const int power = detect_x ? logical_x_power(frame, residual)
                                              : logical_z_power(frame, residual);
                   if (power != 0)
                     total += std::pow(p / (cfg.d - 1), weight) * std::pow(1.0 - p, n - weight);
                 });
  return total;
}

}  // namespace qdsim
