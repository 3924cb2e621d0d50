#include "qdsim/dense.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

namespace qdsim {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kMinBranchProb = 1e-14;
constexpr double kBasisUnitarityTol = 1e-10;

void check_state(const StateVector& s) {
  if (s.amps.size() == 0) throw std::invalid_argument("dense: empty state");
}

void check_site(const StateVector& s, int site) {
  if (site < 0 || site >= s.n) throw std::invalid_argument("dense: site out of range");
}

int64_t site_stride(const StateVector& s, int site) {
  int64_t stride = 1;
  for (int i = s.n - 1; i > site; --i) stride *= s.d;
  return stride;
}

Eigen::VectorXcd omega_table(int d) {
  Eigen::VectorXcd w(2 * d);
  for (int k = 0; k < 2 * d; ++k) w[k] = phase_value(k, d);
  return w;
}

void renormalize(StateVector& s, double prob) {
  if (prob < kMinBranchProb) throw std::runtime_error("dense: collapse onto ~zero-probability branch");
  s.amps /= std::sqrt(prob);
}

}  // namespace

int64_t dense_dimension(int n, int d) {
  if (n < 1 || d < 2) throw std::invalid_argument("dense: need n >= 1, d >= 2");
  int64_t dim = 1;
  for (int i = 0; i < n; ++i) {
    dim *= d;
    if (dim > kDenseCapacity)
      throw CapacityError("dense: d^n exceeds the 2^24 amplitude cap");
  }
  return dim;
}

StateVector make_zero_state(int n, int d) {
  StateVector s;
  s.n = n;
  s.d = d;
  s.amps = Eigen::VectorXcd::Zero(dense_dimension(n, d));
  s.amps[0] = 1.0;
  return s;
}

StateVector make_basis_state(int n, int d, const std::vector<int>& digits) {
  StateVector s = make_zero_state(n, d);
  s.amps[0] = 0.0;
  s.amps[basis_index(s, digits)] = 1.0;
  return s;
}

int64_t basis_index(const StateVector& s, const std::vector<int>& digits) {
  if (static_cast<int>(digits.size()) != s.n) throw std::invalid_argument("dense: digit count mismatch");
  int64_t idx = 0;
  for (int v : digits) {
    if (v < 0 || v >= s.d) throw std::invalid_argument("dense: digit out of range");
    idx = idx * s.d + v;
  }
  return idx;
}

double norm(const StateVector& s) { return s.amps.norm(); }

std::complex<double> overlap(const StateVector& a, const StateVector& b) {
  if (a.n != b.n || a.d != b.d) throw std::invalid_argument("dense: state shape mismatch");
  return a.amps.dot(b.amps);
}

void apply_pauli(StateVector& s, const PauliOperator& p) {
  check_state(s);
  if (p.sites() != s.n || p.d != s.d) throw std::invalid_argument("dense: operator shape mismatch");
  const int64_t dim = s.amps.size();
  const Eigen::VectorXcd w = omega_table(s.d);
  const std::complex<double> global = phase_value(p.phase, s.d);

  // Basis action: |v> -> phase * w^{sum z_i v_i} |v + x>.
  // Precompute the index offset contributed by each site's digit shift.
  std::vector<int64_t> stride(s.n);
  for (int i = 0; i < s.n; ++i) stride[i] = site_stride(s, i);

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  std::vector<int> digit(s.n);
  for (int64_t idx = 0; idx < dim; ++idx) {
    int64_t rem = idx;
    int64_t target = idx;
    int64_t zsum = 0;
    for (int i = 0; i < s.n; ++i) {
      digit[i] = static_cast<int>(rem / stride[i]);
      rem %= stride[i];
      if (p.z[i] != 0) zsum += static_cast<int64_t>(p.z[i]) * digit[i];
      if (p.x[i] != 0) {
        int nd = digit[i] + p.x[i];
        if (nd >= s.d) nd -= s.d;
        target += (nd - digit[i]) * stride[i];
      }
    }
    out[target] = global * w[2 * mod_pos(zsum, s.d)] * s.amps[idx];
  }
  s.amps.swap(out);
}

void apply_fourier(StateVector& s, int site, bool inverse) {
  check_state(s);
  check_site(s, site);
  const int d = s.d;
  Eigen::MatrixXcd f(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int h = 0; h < d; ++h)
    for (int g = 0; g < d; ++g) {
      const double angle = 2.0 * std::numbers::pi * ((inverse ? -1.0 : 1.0) * h * g) / d;
      f(h, g) = scale * std::complex<double>(std::cos(angle), std::sin(angle));
    }

  const int64_t stride = site_stride(s, site);
  const int64_t block = stride * d;
  Eigen::VectorXcd scratch(d);
  for (int64_t base = 0; base < s.amps.size(); base += block) {
    for (int64_t off = 0; off < stride; ++off) {
      for (int g = 0; g < d; ++g) scratch[g] = s.amps[base + off + g * stride];
      scratch = (f * scratch).eval();
      for (int g = 0; g < d; ++g) s.amps[base + off + g * stride] = scratch[g];
    }
  }
}

void apply_controlled_z_power(StateVector& s, int control, int target, int k) {
  check_state(s);
  check_site(s, control);
  check_site(s, target);
  if (control == target) throw std::invalid_argument("dense: controlled-Z needs distinct sites");
  const Eigen::VectorXcd w = omega_table(s.d);
  const int64_t sc = site_stride(s, control);
  const int64_t st = site_stride(s, target);
  for (int64_t idx = 0; idx < s.amps.size(); ++idx) {
    const int a = static_cast<int>((idx / sc) % s.d);
    const int b = static_cast<int>((idx / st) % s.d);
    s.amps[idx] *= w[2 * mod_pos(static_cast<int64_t>(k) * a * b, s.d)];
  }
}

Eigen::ArrayXd pauli_outcome_probabilities(const StateVector& s, const PauliOperator& p) {
  if (!has_omega_spectrum(p))
    throw std::invalid_argument("dense: measured Pauli must satisfy P^d = I");
  const int d = s.d;
  // Gram coefficients g_k = <psi|P^k|psi>; Pr[w^m] = (1/d) sum_k w^{-mk} g_k.
  std::vector<std::complex<double>> gram(d);
  gram[0] = s.amps.squaredNorm();
  StateVector walker = s;
  for (int k = 1; k < d; ++k) {
    apply_pauli(walker, p);
    gram[k] = overlap(s, walker);
  }
  Eigen::ArrayXd probs(d);
  for (int m = 0; m < d; ++m) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < d; ++k) acc += phase_value(mod_pos(-2LL * m * k, 2 * d), d) * gram[k];
    probs[m] = std::max(0.0, acc.real() / d);
  }
  return probs;
}

double project_pauli(StateVector& s, const PauliOperator& p, int outcome) {
  if (!has_omega_spectrum(p))
    throw std::invalid_argument("dense: measured Pauli must satisfy P^d = I");
  const int d = s.d;
  outcome = mod_pos(outcome, d);
  StateVector walker = s;
  Eigen::VectorXcd acc = s.amps / static_cast<double>(d);
  for (int k = 1; k < d; ++k) {
    apply_pauli(walker, p);
    acc += phase_value(mod_pos(-2LL * outcome * k, 2 * d), d) / static_cast<double>(d) * walker.amps;
  }
  const double prob = acc.squaredNorm();
  s.amps.swap(acc);
  renormalize(s, prob);
  return prob;
}

MeasurementRecord measure_pauli(StateVector& s, const PauliOperator& p, Rng& rng) {
  Eigen::ArrayXd probs = pauli_outcome_probabilities(s, p);
  const double u = rng.uniform01();
  double cum = 0.0;
  int outcome = -1;
  for (int m = 0; m < s.d; ++m) {
    if (probs[m] < kMinBranchProb) continue;  // never sample negligible branches
    cum += probs[m];
    if (u < cum) {
      outcome = m;
      break;
    }
  }
  if (outcome < 0) {  // guard against accumulated rounding
    for (int m = s.d - 1; m >= 0; --m)
      if (probs[m] >= kMinBranchProb) {
        outcome = m;
        break;
      }
  }
  const double prob = project_pauli(s, p, outcome);
  return {-1, "pauli:" + to_string(p), outcome, prob};
}

Eigen::ArrayXd basis_outcome_probabilities(const StateVector& s, int site,
                                           const Eigen::MatrixXcd& basis) {
  check_site(s, site);
  const int d = s.d;
  if (basis.rows() != d || basis.cols() != d) throw std::invalid_argument("dense: basis must be d x d");
  if ((basis.adjoint() * basis - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() >
      kBasisUnitarityTol)
    throw std::invalid_argument("dense: measurement basis is not orthonormal");

  const int64_t stride = site_stride(s, site);
  const int64_t block = stride * d;
  Eigen::ArrayXd probs = Eigen::ArrayXd::Zero(d);
  Eigen::VectorXcd local(d);
  for (int64_t base = 0; base < s.amps.size(); base += block) {
    for (int64_t off = 0; off < stride; ++off) {
      for (int g = 0; g < d; ++g) local[g] = s.amps[base + off + g * stride];
      for (int k = 0; k < d; ++k) probs[k] += std::norm(basis.col(k).dot(local));
    }
  }
  return probs;
}

double project_in_basis(StateVector& s, int site, const Eigen::MatrixXcd& basis, int outcome) {
  check_site(s, site);
  const int d = s.d;
  if (outcome < 0 || outcome >= d) throw std::invalid_argument("dense: outcome out of range");
  const int64_t stride = site_stride(s, site);
  const int64_t block = stride * d;
  double prob = 0.0;
  Eigen::VectorXcd local(d);
  const Eigen::VectorXcd b = basis.col(outcome);
  for (int64_t base = 0; base < s.amps.size(); base += block) {
    for (int64_t off = 0; off < stride; ++off) {
      for (int g = 0; g < d; ++g) local[g] = s.amps[base + off + g * stride];
      const std::complex<double> c = b.dot(local);
      prob += std::norm(c);
      for (int g = 0; g < d; ++g) s.amps[base + off + g * stride] = c * b[g];
    }
  }
  renormalize(s, prob);
  return prob;
}

MeasurementRecord measure_in_basis(StateVector& s, int site, const Eigen::MatrixXcd& basis,
                                   Rng& rng, const std::string& label) {
  Eigen::ArrayXd probs = basis_outcome_probabilities(s, site, basis);
  const double u = rng.uniform01();
  double cum = 0.0;
  int outcome = -1;
  for (int k = 0; k < s.d; ++k) {
    if (probs[k] < kMinBranchProb) continue;
    cum += probs[k];
    if (u < cum) {
      outcome = k;
      break;
    }
  }
  if (outcome < 0) {
    for (int k = s.d - 1; k >= 0; --k)
      if (probs[k] >= kMinBranchProb) {
        outcome = k;
        break;
      }
  }
  const double prob = project_in_basis(s, site, basis, outcome);
  return {site, label, outcome, prob};
}

double subsystem_entropy(const StateVector& s, const std::vector<int>& sites) {
  check_state(s);
  std::vector<bool> in_a(s.n, false);
  for (int site : sites) {
    check_site(s, site);
    in_a[site] = true;
  }
  int64_t dim_a = 1, dim_b = 1;
  for (int i = 0; i < s.n; ++i) (in_a[i] ? dim_a : dim_b) *= s.d;
  if (dim_a > (int64_t{1} << 12)) throw CapacityError("dense: entropy subsystem too large");

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_a, dim_b);
  std::vector<int64_t> stride(s.n);
  for (int i = 0; i < s.n; ++i) stride[i] = site_stride(s, i);
  for (int64_t idx = 0; idx < s.amps.size(); ++idx) {
    int64_t ia = 0, ib = 0;
    for (int i = 0; i < s.n; ++i) {
      const int digit = static_cast<int>((idx / stride[i]) % s.d);
      if (in_a[i])
        ia = ia * s.d + digit;
      else
        ib = ib * s.d + digit;
    }
    m(ia, ib) = s.amps[idx];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m * m.adjoint());
  double entropy = 0.0;
  for (double lambda : solver.eigenvalues())
    if (lambda > 1e-14) entropy -= lambda * std::log(lambda);
  return entropy;
}

std::string state_to_json(const StateVector& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["d"] = s.d;
  std::vector<double> flat;
  flat.reserve(2 * s.amps.size());
  for (int64_t i = 0; i < s.amps.size(); ++i) {
    flat.push_back(s.amps[i].real());
    flat.push_back(s.amps[i].imag());
  }
  j["amplitudes"] = flat;
  return j.dump();
}

StateVector state_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  StateVector s = make_zero_state(j.at("n").get<int>(), j.at("d").get<int>());
  const auto flat = j.at("amplitudes").get<std::vector<double>>();
  if (flat.size() != static_cast<size_t>(2 * s.amps.size()))
    throw std::invalid_argument("dense: amplitude count mismatch in dump");
  for (int64_t i = 0; i < s.amps.size(); ++i) s.amps[i] = {flat[2 * i], flat[2 * i + 1]};
  return s;
}

void save_state_binary(const StateVector& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dense: cannot open " + path);
  const int32_t header[2] = {static_cast<int32_t>(s.n), static_cast<int32_t>(s.d)};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(s.amps.data()),
            static_cast<std::streamsize>(sizeof(std::complex<double>) * s.amps.size()));
}

StateVector load_state_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("dense: cannot open " + path);
  int32_t header[2];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  StateVector s = make_zero_state(header[0], header[1]);
  in.read(reinterpret_cast<char*>(s.amps.data()),
          static_cast<std::streamsize>(sizeof(std::complex<double>) * s.amps.size()));
  if (!in) throw std::runtime_error("dense: truncated dump " + path);
  return s;
}

}  // namespace qdsim
