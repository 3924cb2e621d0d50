#pragma once

#include <cstdint>
#include <stdexcept>

namespace qdsim {

/// Reduce v into [0, m). Works for any int64 input.
inline int mod_pos(int64_t v, int m) {
  int64_t r = v % m;
  if (r < 0) r += m;
  return static_cast<int>(r);
}

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

/// Multiplicative inverse mod a prime p (extended Euclid).
inline int inv_mod(int a, int p) {
  a = mod_pos(a, p);
  if (a == 0) throw std::domain_error("inv_mod: zero has no inverse");
  int t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    int q = r / new_r;
    int tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::domain_error("inv_mod: not invertible");
  return mod_pos(t, p);
}

/// An element of the cyclic group Z_d.
struct GroupElement {
  int value = 0;
  int modulus = 2;

  GroupElement() = default;
  GroupElement(int v, int d) : value(mod_pos(v, d)), modulus(d) {
    if (d < 2) throw std::invalid_argument("GroupElement: modulus must be >= 2");
  }

  GroupElement operator+(GroupElement o) const {
    check(o);
    return {value + o.value, modulus};
  }
  GroupElement operator-(GroupElement o) const {
    check(o);
    return {value - o.value, modulus};
  }
  GroupElement operator-() const { return {modulus - value, modulus}; }
  bool operator==(const GroupElement&) const = default;

 private:
  void check(const GroupElement& o) const {
    if (o.modulus != modulus) throw std::invalid_argument("GroupElement: modulus mismatch");
  }
};

/// A phase exp(i*pi*numerator/d), numerator reduced mod 2d.
///
/// Powers of w = exp(2*pi*i/d) occupy the even numerators (w^k has
/// numerator 2k). The odd slots are headroom for even d, where squares of
/// mixed shift/clock operators produce bare signs such as -1 at d=2.
struct PhaseExponent {
  int numerator = 0;
  int d = 2;

  PhaseExponent() = default;
  PhaseExponent(int num, int dim) : numerator(mod_pos(num, 2 * dim)), d(dim) {}

  PhaseExponent operator*(PhaseExponent o) const {
    if (o.d != d) throw std::invalid_argument("PhaseExponent: dimension mismatch");
    return {numerator + o.numerator, d};
  }
  bool operator==(const PhaseExponent&) const = default;
};

}  // namespace qdsim
