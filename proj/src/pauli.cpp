#include "qdsim/pauli.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qdsim {

namespace {

void check_dims(const PauliOperator& p, const PauliOperator& q) {
  if (p.d != q.d) throw std::invalid_argument("pauli: qudit dimension mismatch");
  if (p.sites() != q.sites()) throw std::invalid_argument("pauli: site count mismatch");
}

void check_site(const PauliOperator& p, int site) {
  if (site < 0 || site >= p.sites()) throw std::invalid_argument("pauli: site out of range");
}

}  // namespace

PauliOperator pauli_identity(int n, int d) {
  if (d < 2) throw std::invalid_argument("pauli: d must be >= 2");
  if (n < 0) throw std::invalid_argument("pauli: negative site count");
  PauliOperator p;
  p.d = d;
  p.x = Eigen::ArrayXi::Zero(n);
  p.z = Eigen::ArrayXi::Zero(n);
  p.phase = 0;
  return p;
}

PauliOperator pauli_x(int n, int d, int site, int power) {
  PauliOperator p = pauli_identity(n, d);
  check_site(p, site);
  p.x[site] = mod_pos(power, d);
  return p;
}

PauliOperator pauli_z(int n, int d, int site, int power) {
  PauliOperator p = pauli_identity(n, d);
  check_site(p, site);
  p.z[site] = mod_pos(power, d);
  return p;
}

PauliOperator make_pauli(int d, const Eigen::ArrayXi& x, const Eigen::ArrayXi& z, int phase) {
  if (x.size() != z.size()) throw std::invalid_argument("pauli: x/z length mismatch");
  PauliOperator p = pauli_identity(static_cast<int>(x.size()), d);
  for (int i = 0; i < p.sites(); ++i) {
    p.x[i] = mod_pos(x[i], d);
    p.z[i] = mod_pos(z[i], d);
  }
  p.phase = mod_pos(phase, 2 * d);
  return p;
}

bool is_identity(const PauliOperator& p) {
  return p.phase == 0 && (p.x == 0).all() && (p.z == 0).all();
}

int pauli_weight(const PauliOperator& p) {
  int w = 0;
  for (int i = 0; i < p.sites(); ++i)
    if (p.x[i] != 0 || p.z[i] != 0) ++w;
  return w;
}

PauliOperator compose(const PauliOperator& p, const PauliOperator& q) {
  check_dims(p, q);
  PauliOperator r = pauli_identity(p.sites(), p.d);
  int64_t ph = p.phase + q.phase;
  for (int i = 0; i < p.sites(); ++i) {
    // Z^{zp} X^{xq} = w^{zp*xq} X^{xq} Z^{zp}
    ph += 2LL * p.z[i] * q.x[i];
    r.x[i] = mod_pos(p.x[i] + q.x[i], p.d);
    r.z[i] = mod_pos(p.z[i] + q.z[i], p.d);
  }
  r.phase = mod_pos(ph, 2 * p.d);
  return r;
}

int commutation_exponent(const PauliOperator& p, const PauliOperator& q) {
  check_dims(p, q);
  int64_t c = 0;
  for (int i = 0; i < p.sites(); ++i) c += static_cast<int64_t>(p.z[i]) * q.x[i] - static_cast<int64_t>(p.x[i]) * q.z[i];
  return mod_pos(c, p.d);
}

PauliOperator pauli_inverse(const PauliOperator& p) {
  PauliOperator r = pauli_identity(p.sites(), p.d);
  int64_t ph = -static_cast<int64_t>(p.phase);
  for (int i = 0; i < p.sites(); ++i) {
    r.x[i] = mod_pos(-p.x[i], p.d);
    r.z[i] = mod_pos(-p.z[i], p.d);
    // cancel the reorder phase compose(p, r) would generate
    ph -= 2LL * p.z[i] * r.x[i];
  }
  r.phase = mod_pos(ph, 2 * p.d);
  return r;
}

PauliOperator pauli_power(const PauliOperator& p, int64_t k) {
  if (k < 0) return pauli_power(pauli_inverse(p), -k);
  PauliOperator acc = pauli_identity(p.sites(), p.d);
  PauliOperator base = p;
  while (k > 0) {
    if (k & 1) acc = compose(acc, base);
    k >>= 1;
    if (k > 0) base = compose(base, base);
  }
  return acc;
}

PauliOperator fourier_conjugate(const PauliOperator& p, int site, bool inverse) {
  check_site(p, site);
  PauliOperator r = p;
  const int a = p.x[site];
  const int b = p.z[site];
  int64_t ph = p.phase;
  if (!inverse) {
    // F X^a Z^b F^dag = Z^a X^{-b} -> w^{a*(-b)} X^{-b} Z^a
    const int nx = mod_pos(-b, p.d);
    ph += 2LL * a * nx;
    r.x[site] = nx;
    r.z[site] = a;
  } else {
    // F^dag X^a Z^b F = Z^{-a} X^{b} -> w^{(-a)*b} X^{b} Z^{-a}
    const int nz = mod_pos(-a, p.d);
    ph += 2LL * nz * b;
    r.x[site] = b;
    r.z[site] = nz;
  }
  r.phase = mod_pos(ph, 2 * p.d);
  return r;
}

PauliOperator controlled_z_conjugate(const PauliOperator& p, int site_a, int site_b, int k) {
  check_site(p, site_a);
  check_site(p, site_b);
  if (site_a == site_b) throw std::invalid_argument("pauli: controlled-Z needs distinct sites");
  PauliOperator r = p;
  const int xa = p.x[site_a];
  const int xb = p.x[site_b];
  r.z[site_a] = mod_pos(p.z[site_a] + static_cast<int64_t>(k) * xb, p.d);
  r.z[site_b] = mod_pos(p.z[site_b] + static_cast<int64_t>(k) * xa, p.d);
  r.phase = mod_pos(p.phase + 2LL * k * xa * xb, 2 * p.d);
  return r;
}

PauliOperator pauli_gate_conjugate(const PauliOperator& p, const PauliOperator& q) {
  check_dims(p, q);
  PauliOperator r = p;
  r.phase = mod_pos(p.phase - 2LL * commutation_exponent(p, q), 2 * p.d);
  return r;
}

bool has_omega_spectrum(const PauliOperator& p) {
  return is_identity(pauli_power(p, p.d));
}

std::complex<double> phase_value(int numerator, int d) {
  const double angle = std::numbers::pi * numerator / d;
  return {std::cos(angle), std::sin(angle)};
}

std::string to_string(const PauliOperator& p) {
  std::ostringstream out;
  bool any = false;
  if (p.phase != 0) {
    if (p.phase % 2 == 0)
      out << "w^" << p.phase / 2;
    else
      out << "w^(" << p.phase << "/2)";
    any = true;
  }
  for (int i = 0; i < p.sites(); ++i) {
    if (p.x[i] != 0) {
      if (any) out << ' ';
      out << "X" << i << "^" << p.x[i];
      any = true;
    }
    if (p.z[i] != 0) {
      if (any) out << ' ';
      out << "Z" << i << "^" << p.z[i];
      any = true;
    }
  }
  if (!any) return "I";
  return out.str();
}

}  // namespace qdsim
