#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "spincorr/orientation.hpp"
#include "spincorr/vec3.hpp"

namespace spincorr {

// Exact identities on coefficients use kExactTol; long accumulated chains get
// the looser kChainTol.
inline constexpr double kExactTol = 1e-12;
inline constexpr double kChainTol = 1e-10;

// Element of Cl(3,0) with e_i . e_i = +1. Component order is fixed:
//
//   index   0    1    2    3    4     5     6     7
//   blade   1    e1   e2   e3   e23   e31   e12   e123
//
// With this order duality is a coefficient copy: I*e1 = e23, I*e2 = e31,
// I*e3 = e12, where I = e123 is the unit pseudoscalar (I^2 = -1).
struct Multivector;

namespace detail {

// Blade i is kParity[i] times the canonical ascending product of basis
// vectors for its bitmap. Only e31 (= e3 e1 = -e13) flips.
inline constexpr std::array<int, 8> kBitmap = {0b000, 0b001, 0b010, 0b100,
                                               0b110, 0b101, 0b011, 0b111};
inline constexpr std::array<int, 8> kParity = {+1, +1, +1, +1, +1, -1, +1, +1};

constexpr int index_of_bitmap(int m) {
  for (int i = 0; i < 8; ++i) {
    if (kBitmap[i] == m) return i;
  }
  return -1;
}

// Sign from reordering the concatenation of two ascending basis-vector
// products into ascending order (metric is +1 so contractions add no sign).
constexpr int canonical_sign(unsigned a, unsigned b) {
  int swaps = 0;
  for (unsigned t = a >> 1; t != 0; t >>= 1) {
    swaps += std::popcount(t & b);
  }
  return (swaps & 1) ? -1 : +1;
}

struct ProductTable {
  std::array<std::array<std::int8_t, 8>, 8> target{};
  std::array<std::array<std::int8_t, 8>, 8> sign{};
};

constexpr ProductTable make_product_table() {
  ProductTable t;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const int m = kBitmap[i] ^ kBitmap[j];
      const int k = index_of_bitmap(m);
      const int s = canonical_sign(static_cast<unsigned>(kBitmap[i]),
                                   static_cast<unsigned>(kBitmap[j])) *
                    kParity[i] * kParity[j] * kParity[k];
      t.target[i][j] = static_cast<std::int8_t>(k);
      t.sign[i][j] = static_cast<std::int8_t>(s);
    }
  }
  return t;
}

inline constexpr ProductTable kProduct = make_product_table();

inline constexpr std::array<int, 8> kGrade = {0, 1, 1, 1, 2, 2, 2, 3};

}  // namespace detail

struct Multivector {
  std::array<double, 8> c{};

  static Multivector scalar(double s) {
    Multivector m;
    m.c[0] = s;
    return m;
  }

  static Multivector vector(const Vec3& v) {
    Multivector m;
    m.c[1] = v.x;
    m.c[2] = v.y;
    m.c[3] = v.z;
    return m;
  }

  // I*v: the bivector dual to v (coefficient copy by the blade order above).
  static Multivector bivector_dual(const Vec3& v) {
    Multivector m;
    m.c[4] = v.x;
    m.c[5] = v.y;
    m.c[6] = v.z;
    return m;
  }

  static Multivector pseudoscalar(double s = 1.0) {
    Multivector m;
    m.c[7] = s;
    return m;
  }

  static Multivector basis(int index) {
    if (index < 0 || index > 7) {
      throw std::out_of_range("Multivector::basis: index out of range");
    }
    Multivector m;
    m.c[static_cast<std::size_t>(index)] = 1.0;
    return m;
  }

  double operator[](std::size_t i) const { return c[i]; }
  double& operator[](std::size_t i) { return c[i]; }

  Multivector operator+(const Multivector& o) const {
    Multivector r;
    for (int i = 0; i < 8; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }

  Multivector operator-(const Multivector& o) const {
    Multivector r;
    for (int i = 0; i < 8; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }

  Multivector operator-() const {
    Multivector r;
    for (int i = 0; i < 8; ++i) r.c[i] = -c[i];
    return r;
  }

  Multivector operator*(double s) const {
    Multivector r;
    for (int i = 0; i < 8; ++i) r.c[i] = c[i] * s;
    return r;
  }

  Multivector grade(int g) const {
    Multivector r;
    for (int i = 0; i < 8; ++i) {
      if (detail::kGrade[i] == g) r.c[i] = c[i];
    }
    return r;
  }

  double norm_sq() const {
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += c[i] * c[i];
    return s;
  }

  double norm() const { return std::sqrt(norm_sq()); }

  double norm_inf() const {
    double m = 0.0;
    for (int i = 0; i < 8; ++i) m = std::max(m, std::abs(c[i]));
    return m;
  }
};

inline Multivector operator*(double s, const Multivector& m) { return m * s; }

inline Multivector geometric_product(const Multivector& x, const Multivector& y) {
  Multivector r;
  for (int i = 0; i < 8; ++i) {
    const double xi = x.c[i];
    if (xi == 0.0) continue;
    for (int j = 0; j < 8; ++j) {
      const int k = detail::kProduct.target[i][j];
      r.c[k] += detail::kProduct.sign[i][j] * (xi * y.c[j]);
    }
  }
  return r;
}

inline Multivector operator*(const Multivector& x, const Multivector& y) {
  return geometric_product(x, y);
}

// Grade-wise reversal anti-automorphism: grades 0,1 fixed; 2,3 negated.
inline Multivector reverse(const Multivector& x) {
  Multivector r = x;
  for (int i = 4; i < 8; ++i) r.c[i] = -r.c[i];
  return r;
}

// I*n for a unit n: pure grade-2, squared norm 1, square -1.
inline Multivector unit_bivector(const Direction& n) {
  return Multivector::bivector_dual(n.vec());
}

// Product in the handedness lambda: the left-handed algebra is realized by
// order reversal in the fixed right-handed representation, never by a second
// coefficient convention.
inline Multivector oriented_product(Orientation lambda, const Multivector& x,
                                    const Multivector& y) {
  return lambda.value > 0 ? geometric_product(x, y) : geometric_product(y, x);
}

// L_mu(lambda) = lambda * (I * e_mu) for mu in {1,2,3}.
struct OrientedBasisBivector {
  int mu;
  Orientation lambda;
  Multivector value;
};

inline OrientedBasisBivector basis_bivector(int mu, Orientation lambda) {
  if (mu < 1 || mu > 3) {
    throw std::out_of_range("basis_bivector: mu must be in {1,2,3}");
  }
  Multivector v;
  v.c[static_cast<std::size_t>(3 + mu)] = lambda.scalar();
  return {mu, lambda, v};
}

struct EvenDecomposition {
  double scalar;
  Multivector bivector;
};

// Splits an even multivector into scalar and bivector parts. Rejects inputs
// with odd-grade contamination above tol.
inline EvenDecomposition even_decompose(const Multivector& x,
                                        double tol = kExactTol) {
  const double odd = (x.grade(1) + x.grade(3)).norm_inf();
  if (odd > tol) {
    throw std::domain_error("even_decompose: odd-grade contamination above tolerance");
  }
  return {x.c[0], x.grade(2)};
}

}  // namespace spincorr
