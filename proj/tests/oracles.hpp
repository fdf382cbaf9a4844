// Test-only oracles, deliberately independent of the library's
// implementation paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spincorr/multivector.hpp"
#include "spincorr/vec3.hpp"

namespace spincorr::oracle {

// Blade product by explicit basis-vector lists and bubble-sort parity; no
// bitmaps, no popcount. Blade order matches the library convention
// {1, e1, e2, e3, e23, e31, e12, e123}, with e31 stored as e3 e1.
struct BladeFactor {
  int index;  // 0..7
  int sign;   // +1 or -1
};

inline const std::vector<int>& blade_vectors(int blade) {
  static const std::vector<int> table[8] = {
      {}, {1}, {2}, {3}, {2, 3}, {3, 1}, {1, 2}, {1, 2, 3},
  };
  return table[blade];
}

inline BladeFactor blade_product(int i, int j) {
  std::vector<int> factors = blade_vectors(i);
  const auto& right = blade_vectors(j);
  factors.insert(factors.end(), right.begin(), right.end());

  int sign = +1;
  // Bubble sort, one transposition per swap.
  for (std::size_t pass = 0; pass + 1 < factors.size() || pass == 0; ++pass) {
    bool swapped = false;
    for (std::size_t k = 0; k + 1 < factors.size(); ++k) {
      if (factors[k] > factors[k + 1]) {
        std::swap(factors[k], factors[k + 1]);
        sign = -sign;
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  // Contract equal neighbours (metric +1).
  std::vector<int> reduced;
  for (std::size_t k = 0; k < factors.size();) {
    if (k + 1 < factors.size() && factors[k] == factors[k + 1]) {
      k += 2;
    } else {
      reduced.push_back(factors[k]);
      ++k;
    }
  }

  for (int blade = 0; blade < 8; ++blade) {
    std::vector<int> canon = blade_vectors(blade);
    const int canon_sign = (blade == 5) ? -1 : +1;  // e31 = -(e1 e3)
    std::sort(canon.begin(), canon.end());
    if (canon == reduced) return {blade, sign * canon_sign};
  }
  return {-1, 0};  // unreachable
}

inline Multivector product(const Multivector& x, const Multivector& y) {
  Multivector r;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const BladeFactor f = blade_product(i, j);
      r.c[f.index] += f.sign * x.c[i] * y.c[j];
    }
  }
  return r;
}

// CHSH string of the singlet correlations E = -a.b, by plain cosine sums.
inline double chsh_cosine_sum(const Vec3& a, const Vec3& ap, const Vec3& b,
                              const Vec3& bp) {
  return -a.dot(b) - a.dot(bp) - ap.dot(b) + ap.dot(bp);
}

// Hemisphere-overlap correlation of the sign scores for uniform s:
// E(theta) = -1 + 2 theta / pi.
inline double sign_score_correlation(double theta_rad) {
  return -1.0 + 2.0 * theta_rad / M_PI;
}

// Brute-force cross-check of the hemisphere-overlap formula with an
// unrelated generator and an unrelated sphere sampler.
inline double sign_score_monte_carlo(double theta_rad, std::int64_t n,
                                     std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec3 a{1.0, 0.0, 0.0};
  const Vec3 b{std::cos(theta_rad), std::sin(theta_rad), 0.0};
  std::int64_t sum = 0;
  for (std::int64_t k = 0; k < n; ++k) {
    const double z = 1.0 - 2.0 * unit(gen);
    const double phi = 2.0 * M_PI * unit(gen);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 s{r * std::cos(phi), r * std::sin(phi), z};
    const int sa = s.dot(a) >= 0.0 ? +1 : -1;
    const int sb = -s.dot(b) >= 0.0 ? +1 : -1;
    sum += sa * sb;
  }
  return static_cast<double>(sum) / static_cast<double>(n);
}

// Deterministic pseudo-random multivectors and unit vectors for property
// tests (independent of the library RNG).
inline Multivector random_multivector(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Multivector m;
  for (int i = 0; i < 8; ++i) m.c[i] = coeff(gen);
  return m;
}

inline Vec3 random_unit(std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    const Vec3 v{normal(gen), normal(gen), normal(gen)};
    const double n = v.norm();
    if (n > 1e-6) return {v.x / n, v.y / n, v.z / n};
  }
}

}  // namespace spincorr::oracle
