#include "qdsim/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "qdsim/protocols.hpp"
#include "qdsim/sixspin.hpp"

namespace qdsim {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Eigen::VectorXcd random_logical_state(int d, Rng& rng) {
  Eigen::VectorXcd c(d);
  for (int j = 0; j < d; ++j) {
    // Box-Muller on the deterministic stream.
    const double u1 = std::max(rng.uniform01(), 1e-18);
    const double u2 = rng.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    c[j] = {r * std::cos(2 * std::numbers::pi * u2), r * std::sin(2 * std::numbers::pi * u2)};
  }
  return c / c.norm();
}

Eigen::MatrixXcd fourier_matrix(int d) {
  Eigen::MatrixXcd f(d, d);
  for (int h = 0; h < d; ++h)
    for (int g = 0; g < d; ++g) {
      const double angle = 2.0 * std::numbers::pi * h * g / d;
      f(h, g) = std::complex<double>(std::cos(angle), std::sin(angle)) / std::sqrt(double(d));
    }
  return f;
}

EngineKind pick_engine(const ExperimentConfig& cfg, bool clifford_only) {
  if (cfg.engine == "dense") return EngineKind::dense;
  if (cfg.engine == "tableau") return EngineKind::tableau;
  return clifford_only ? EngineKind::tableau : EngineKind::dense;
}

struct DemoResult {
  ProtocolTranscript transcript;
  double fidelity = 0.0;
  std::string detail;
};

DemoResult run_protocol_demo(const ExperimentConfig& cfg) {
  auto geom = std::make_shared<LatticeGeometry>(make_lattice(cfg.lx, cfg.ly));
  dense_dimension(geom->n_edges(), cfg.d);
  Rng rng(cfg.seed);
  CodeState cs = ground_state(geom, cfg.d, EngineKind::dense, rng);
  DemoResult out;

  if (cfg.protocol == "fourier-teleport" || cfg.protocol == "teleport-chain") {
    const int hops = cfg.protocol == "fourier-teleport" ? 1 : 4;
    const Eigen::VectorXcd psi = random_logical_state(cfg.d, rng);
    int q = encode_qudit(cs, SiteKind::vertex, vertex_index(*geom, {1, 1}),
                         vertex_index(*geom, {2, 1}));
    set_logical_state(cs, q, psi);
    Eigen::VectorXcd expect = psi;
    const Eigen::MatrixXcd f = fourier_matrix(cfg.d);
    for (int hop = 0; hop < hops; ++hop) {
      auto [tr, next] = fourier_teleport(cs, q, rng);
      out.transcript.outcomes.insert(out.transcript.outcomes.end(), tr.outcomes.begin(),
                                     tr.outcomes.end());
      q = next;
      expect = (f * expect).eval();
    }
    out.fidelity = logical_fidelity(cs, q, expect);
    out.detail = hops == 1 ? "F applied in transit" : "four hops return the input";
  } else if (cfg.protocol == "ancilla-theta") {
    std::vector<double> theta = cfg.theta;
    if (static_cast<int>(theta.size()) != cfg.d)
      throw ConfigError("protocol-demo: theta must have d entries");
    auto [tr, q] = prepare_ancilla_theta(cs, theta, rng);
    out.transcript = tr;
    if (tr.success) {
      Eigen::VectorXcd target(cfg.d);
      for (int j = 0; j < cfg.d; ++j)
        target[j] = std::complex<double>(std::cos(theta[j]), std::sin(theta[j]));
      target /= target.norm();
      out.fidelity = logical_fidelity(cs, q, target);
    }
    out.detail = "phase-state ancilla";
  } else if (cfg.protocol == "phase-gate") {
    std::vector<double> theta = cfg.theta;
    if (static_cast<int>(theta.size()) != cfg.d)
      throw ConfigError("protocol-demo: theta must have d entries");
    const Eigen::VectorXcd psi = random_logical_state(cfg.d, rng);
    const int q = encode_qudit(cs, SiteKind::plaquette, plaquette_index(*geom, {0, 0}),
                               plaquette_index(*geom, {1, 0}));
    set_logical_state(cs, q, psi);
    out.transcript = phase_gate_rus(cs, q, theta, rng);
    if (out.transcript.success) {
      Eigen::VectorXcd target(cfg.d);
      for (int j = 0; j < cfg.d; ++j)
        target[j] = std::complex<double>(std::cos(theta[j]), std::sin(theta[j])) * psi[j];
      out.fidelity = logical_fidelity(cs, q, target);
    }
    out.detail = "repeat-until-success rotation";
  } else if (cfg.protocol == "braid-cz") {
    const int qv = encode_qudit(cs, SiteKind::vertex, vertex_index(*geom, {1, 1}),
                                vertex_index(*geom, {2, 1}));
    const int qp = encode_qudit(cs, SiteKind::plaquette, plaquette_index(*geom, {0, 0}),
                                plaquette_index(*geom, {1, 0}));
    logical_x(cs, qv, 1);
    logical_x(cs, qp, 1);
    const StateVector before = cs.dense();
    braid_controlled_z(cs, qv, qp, true, rng);
    const std::complex<double> o = overlap(before, cs.dense());
    const std::complex<double> w = phase_value(2, cfg.d);
    out.fidelity = 1.0 - std::abs(o - w);
    out.detail = "clockwise braid phase on |1,1>";
  } else {
    throw ConfigError("protocol-demo: unknown protocol '" + cfg.protocol + "'");
  }
  return out;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: bad JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.kind = j.at("kind").get<std::string>();
    cfg.d = j.value("d", cfg.d);
    if (j.contains("lattice")) {
      cfg.lx = j["lattice"].value("lx", cfg.lx);
      cfg.ly = j["lattice"].value("ly", cfg.ly);
    }
    cfg.separation = j.value("separation", cfg.separation);
    cfg.rows = j.value("rows", cfg.rows);
    if (j.contains("theta")) cfg.theta = j["theta"].get<std::vector<double>>();
    if (j.contains("p_grid")) cfg.p_grid = j["p_grid"].get<std::vector<double>>();
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.engine = j.value("engine", cfg.engine);
    cfg.protocol = j.value("protocol", cfg.protocol);
    cfg.workers = j.value("workers", cfg.workers);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.kind != "protocol-demo" && cfg.kind != "noise-sweep" && cfg.kind != "six-spin-report" &&
      cfg.kind != "engine-crosscheck")
    throw ConfigError("config: unknown kind '" + cfg.kind + "'");
  if (cfg.d < 2) throw ConfigError("config: d must be >= 2");
  if (cfg.lx < 2 || cfg.ly < 2) throw ConfigError("config: lattice must be at least 2x2");
  if (cfg.engine != "auto" && cfg.engine != "dense" && cfg.engine != "tableau")
    throw ConfigError("config: unknown engine '" + cfg.engine + "'");
  if (cfg.trials < 1) throw ConfigError("config: trials must be positive");
  if (cfg.workers < 1) throw ConfigError("config: workers must be positive");

  const bool clifford_only = cfg.kind == "noise-sweep" || cfg.kind == "engine-crosscheck";
  if (!clifford_only || cfg.engine == "dense") {
    // Dense capacity must admit the lattice before we run.
    if (cfg.kind != "six-spin-report") dense_dimension(2 * cfg.lx * cfg.ly, cfg.d);
  }
  if (clifford_only && !is_prime(cfg.d))
    throw ConfigError("config: stabilizer experiments need prime d");
  if (cfg.kind == "noise-sweep") {
    if (cfg.p_grid.empty()) throw ConfigError("config: noise-sweep needs p_grid");
    for (double p : cfg.p_grid)
      if (p < 0 || p > 1) throw ConfigError("config: fault rates must be in [0,1]");
  }
  if (cfg.kind == "protocol-demo" && cfg.protocol.empty())
    throw ConfigError("config: protocol-demo needs a protocol name");
}

ScalingReport run_noise_sweep(const ExperimentConfig& cfg) {
  ScalingReport report;
  TrialConfig trial;
  trial.d = cfg.d;
  trial.lx = cfg.lx;
  trial.ly = cfg.ly;
  trial.separation = cfg.separation;
  trial.rows = cfg.rows;
  trial.engine = pick_engine(cfg, true);
  for (double p : cfg.p_grid) {
    trial.noise = {p, p};
    report.points.push_back(estimate_logical_rate(trial, cfg.trials, cfg.seed, cfg.workers));
    report.points.back().p = p;
  }
  std::vector<std::pair<double, double>> fit_points;
  for (const auto& pt : report.points)
    if (pt.x_errors >= 20) fit_points.emplace_back(pt.p, pt.x_rate);
  report.points_used_in_fit = static_cast<int>(fit_points.size());
  if (fit_points.size() >= 3) report.x_exponent = fit_scaling_exponent(fit_points);
  return report;
}

bool engines_agree_on_circuit(int lx, int ly, int d, uint64_t seed) {
  auto geom = std::make_shared<LatticeGeometry>(make_lattice(lx, ly));
  const int n = geom->n_edges();
  Rng prep_rng(seed);
  CodeState dense_cs = ground_state(geom, d, EngineKind::dense, prep_rng);
  Rng prep_rng2(seed);
  CodeState tab_cs = ground_state(geom, d, EngineKind::tableau, prep_rng2);

  Rng rng(seed ^ 0x5bf0363546304f13ULL);
  const int steps = 24;
  for (int step = 0; step < steps; ++step) {
    const int what = rng.uniform_int(5);
    if (what == 0) {
      const PauliOperator p = pauli_x(n, d, rng.uniform_int(n), 1 + rng.uniform_int(d - 1));
      apply_pauli(dense_cs.dense(), p);
      apply_pauli_gate(tab_cs.tableau(), p);
    } else if (what == 1) {
      const PauliOperator p = pauli_z(n, d, rng.uniform_int(n), 1 + rng.uniform_int(d - 1));
      apply_pauli(dense_cs.dense(), p);
      apply_pauli_gate(tab_cs.tableau(), p);
    } else if (what == 2) {
      const int site = rng.uniform_int(n);
      const bool inv = rng.uniform_int(2) == 1;
      apply_fourier(dense_cs.dense(), site, inv);
      apply_fourier_gate(tab_cs.tableau(), site, inv);
    } else if (what == 3) {
      const int a = rng.uniform_int(n);
      int b = rng.uniform_int(n - 1);
      if (b >= a) ++b;
      const int k = 1 + rng.uniform_int(d - 1);
      apply_controlled_z_power(dense_cs.dense(), a, b, k);
      apply_controlled_z_gate(tab_cs.tableau(), a, b, k);
    } else {
      // Pauli measurement of a random clock- or shift-type observable.
      PauliOperator obs = pauli_identity(n, d);
      const bool clock = rng.uniform_int(2) == 1;
      const int support = 1 + rng.uniform_int(3);
      for (int i = 0; i < support; ++i) {
        const int e = rng.uniform_int(n);
        if (clock)
          obs.z[e] = 1 + rng.uniform_int(d - 1);
        else
          obs.x[e] = 1 + rng.uniform_int(d - 1);
      }
      if (is_identity(obs)) continue;
      const Eigen::ArrayXd dense_probs = pauli_outcome_probabilities(dense_cs.dense(), obs);
      const Eigen::ArrayXd tab_probs = tableau_outcome_distribution(tab_cs.tableau(), obs);
      if ((dense_probs - tab_probs).abs().maxCoeff() > 1e-9) return false;
      const auto outcome = measure_pauli(tab_cs.tableau(), obs, rng);
      project_pauli(dense_cs.dense(), obs, outcome.exponent);
    }
  }

  // Final stabilizer phases must agree site by site.
  for (int v = 0; v < geom->n_vertices(); ++v) {
    const PauliOperator a = vertex_stabilizer(*geom, d, v);
    const Eigen::ArrayXd dense_probs = pauli_outcome_probabilities(dense_cs.dense(), a);
    const Eigen::ArrayXd tab_probs = tableau_outcome_distribution(tab_cs.tableau(), a);
    if ((dense_probs - tab_probs).abs().maxCoeff() > 1e-9) return false;
  }
  for (int p = 0; p < geom->n_plaquettes(); ++p) {
    const PauliOperator b = plaquette_stabilizer(*geom, d, p);
    const Eigen::ArrayXd dense_probs = pauli_outcome_probabilities(dense_cs.dense(), b);
    const Eigen::ArrayXd tab_probs = tableau_outcome_distribution(tab_cs.tableau(), b);
    if ((dense_probs - tab_probs).abs().maxCoeff() > 1e-9) return false;
  }
  return true;
}

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  try {
    validate_config(cfg);
  } catch (const CapacityError&) {
    return 3;
  } catch (const ConfigError&) {
    return 2;
  }

  try {
    std::filesystem::create_directories(out_dir);
    std::ostringstream csv, log;
    nlohmann::ordered_json jout;
    jout["kind"] = cfg.kind;
    jout["seed"] = cfg.seed;
    log << "experiment kind=" << cfg.kind << " d=" << cfg.d << " lattice=" << cfg.lx << "x"
        << cfg.ly << " seed=" << cfg.seed << "\n";

    if (cfg.kind == "noise-sweep") {
      const ScalingReport report = run_noise_sweep(cfg);
      csv << "d,lx,ly,s,rows,p_x,p_z,trials,x_rate,x_lo,x_hi,z_rate,z_lo,z_hi,x_exponent\n";
      nlohmann::ordered_json points = nlohmann::ordered_json::array();
      for (const auto& pt : report.points) {
        csv << cfg.d << ',' << cfg.lx << ',' << cfg.ly << ',' << cfg.separation << ','
            << cfg.rows << ',' << fmt(pt.p) << ',' << fmt(pt.p) << ',' << pt.trials << ','
            << fmt(pt.x_rate) << ',' << fmt(pt.x_lo) << ',' << fmt(pt.x_hi) << ','
            << fmt(pt.z_rate) << ',' << fmt(pt.z_lo) << ',' << fmt(pt.z_hi) << ','
            << (std::isnan(report.x_exponent) ? "nan" : fmt(report.x_exponent)) << '\n';
        nlohmann::ordered_json jp;
        jp["p"] = pt.p;
        jp["trials"] = pt.trials;
        jp["x_errors"] = pt.x_errors;
        jp["z_errors"] = pt.z_errors;
        points.push_back(jp);
        log << "p=" << fmt(pt.p) << " x_rate=" << fmt(pt.x_rate) << " z_rate=" << fmt(pt.z_rate)
            << "\n";
      }
      jout["points"] = points;
      if (!std::isnan(report.x_exponent)) jout["x_exponent"] = report.x_exponent;
    } else if (cfg.kind == "protocol-demo") {
      const DemoResult demo = run_protocol_demo(cfg);
      csv << "protocol,d,seed,attempts,success,fidelity\n";
      csv << cfg.protocol << ',' << cfg.d << ',' << cfg.seed << ',' << demo.transcript.attempts
          << ',' << (demo.transcript.success ? 1 : 0) << ',' << fmt(demo.fidelity) << '\n';
      jout["transcript"] = nlohmann::ordered_json::parse(
          transcript_to_json(demo.transcript, cfg.protocol));
      jout["fidelity"] = demo.fidelity;
      log << "protocol=" << cfg.protocol << " fidelity=" << fmt(demo.fidelity) << " ("
          << demo.detail << ")\n";
    } else if (cfg.kind == "six-spin-report") {
      csv << "variant,min_undetectable_logical_weight,logical_z,logical_x\n";
      nlohmann::ordered_json variants = nlohmann::ordered_json::array();
      const std::pair<SixSpinVariant, std::string> all[] = {
          {SixSpinVariant::a, "A"}, {SixSpinVariant::b, "B"}, {SixSpinVariant::full, "full"}};
      for (const auto& [v, name] : all) {
        const SixSpinEncoding enc = six_spin_encoding(v);
        const int w = protection_report(v);
        csv << name << ',' << w << ',' << to_string(enc.logical_z) << ','
            << to_string(enc.logical_x) << '\n';
        nlohmann::ordered_json jv;
        jv["variant"] = name;
        jv["min_weight"] = w;
        variants.push_back(jv);
        log << "variant " << name << ": min undetectable logical weight " << w << "\n";
      }
      jout["variants"] = variants;
    } else if (cfg.kind == "engine-crosscheck") {
      int agreed = 0;
      for (int c = 0; c < cfg.trials; ++c)
        if (engines_agree_on_circuit(cfg.lx, cfg.ly, cfg.d, cfg.seed + c)) ++agreed;
      csv << "circuits,agreed,verdict\n";
      csv << cfg.trials << ',' << agreed << ','
          << (agreed == cfg.trials ? "agree" : "disagree") << '\n';
      jout["circuits"] = cfg.trials;
      jout["agreed"] = agreed;
      jout["verdict"] = agreed == cfg.trials ? "agree" : "disagree";
      log << "crosscheck " << agreed << "/" << cfg.trials << "\n";
    }

    std::ofstream(out_dir + "/results.csv") << csv.str();
    std::ofstream(out_dir + "/results.json") << jout.dump(2) << "\n";
    std::ofstream(out_dir + "/transcript.log") << log.str();
    return 0;
  } catch (const CapacityError&) {
    return 3;
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace qdsim
