#pragma once

#include <array>
#include <cstdint>

#include "spincorr/multivector.hpp"
#include "spincorr/orientation.hpp"
#include "spincorr/rng.hpp"
#include "spincorr/vec3.hpp"

namespace spincorr {

// One simulated event: hidden orientation plus the recorded fragment axis.
struct TrialRecord {
  std::uint64_t index = 0;
  Orientation lambda;
  Direction s = Direction::ez();
};

// D(n) = I*n: the measurement plane about axis n, independent of lambda.
struct DetectorBivector {
  Direction axis;
  Multivector value;
};

inline DetectorBivector detector_bivector(const Direction& n) {
  return {n, unit_bivector(n)};
}

// L(n,lambda) = lambda * D(n): the random fragment spin about axis n.
struct SpinBivector {
  Direction axis;
  Orientation lambda;
  Multivector value;
};

inline SpinBivector spin_bivector(const Direction& n, Orientation lambda) {
  return {n, lambda, unit_bivector(n) * lambda.scalar()};
}

// Fair coin on {+1,-1}; consumes one draw block.
inline Orientation sample_orientation(TrialRng& rng) {
  const auto block = rng.next_block();
  return (block[0] & 1u) ? Orientation::plus() : Orientation::minus();
}

// Uniform direction on the sphere via Marsaglia rejection. Each attempt
// consumes one draw block; only +,*,- and sqrt are used so the result is
// bit-reproducible across scalar and SIMD paths.
inline Direction sample_direction(TrialRng& rng) {
  for (;;) {
    const auto block = rng.next_block();
    const double u = to_symmetric_interval(u64_from_words(block[0], block[1]));
    const double v = to_symmetric_interval(u64_from_words(block[2], block[3]));
    const double t = u * u + v * v;
    if (t < 1.0) {
      const double f = 2.0 * std::sqrt(1.0 - t);
      return Direction::require_unit({u * f, v * f, 1.0 - 2.0 * t}, 1e-9);
    }
  }
}

inline TrialRecord sample_trial(std::uint64_t seed, std::uint64_t index,
                                std::uint32_t stream = 0) {
  TrialRng rng(seed, index, stream);
  const Orientation lambda = sample_orientation(rng);
  const Direction s = sample_direction(rng);
  return {index, lambda, s};
}

// Measurement limit on the a side: the grade-0 part of -D(a) L(a,lambda),
// which is lambda with zero bivector remainder.
inline int measure_a(const Direction& a, Orientation lambda) {
  const Multivector product =
      geometric_product(-unit_bivector(a), spin_bivector(a, lambda).value);
  const EvenDecomposition parts = even_decompose(product);
  if (parts.bivector.norm_inf() > kExactTol) {
    throw std::domain_error("measure_a: nonzero bivector remainder");
  }
  return parts.scalar > 0.0 ? +1 : -1;
}

// Measurement limit on the b side: grade-0 part of +D(b) L(b,lambda) = -lambda.
inline int measure_b(const Direction& b, Orientation lambda) {
  const Multivector product =
      geometric_product(unit_bivector(b), spin_bivector(b, lambda).value);
  const EvenDecomposition parts = even_decompose(product);
  if (parts.bivector.norm_inf() > kExactTol) {
    throw std::domain_error("measure_b: nonzero bivector remainder");
  }
  return parts.scalar > 0.0 ? +1 : -1;
}

// Sign score with the measure-zero tie broken deterministically to +1 and
// flagged so callers can count it.
struct RawSign {
  std::int8_t value;
  bool tie;
};

inline RawSign raw_sign(double dot) {
  if (dot > 0.0) return {+1, false};
  if (dot < 0.0) return {-1, false};
  return {+1, true};
}

inline RawSign raw_sign_a(const Direction& s, const Direction& a) {
  return raw_sign(s.dot(a));
}

inline RawSign raw_sign_b(const Direction& s, const Direction& b) {
  return raw_sign(-s.dot(b));
}

// Per-trial product for the standard-score pipeline: (+I a)(+I b) when
// lambda = +1, (+I b)(+I a) when lambda = -1. Evaluates to
// -a.b - lambda * I.(a x b).
inline Multivector oriented_spin_product(Orientation lambda, const Direction& a,
                                         const Direction& b) {
  return oriented_product(lambda, unit_bivector(a), unit_bivector(b));
}

// q(a,b;s,lambda) = -D(a) L(s,lambda) L(s,lambda) D(b), a unit quaternion
// equal to D(a) D(b) for every s and lambda.
struct TrialQuaternion {
  Multivector value;
};

inline TrialQuaternion trial_quaternion(const Direction& a, const Direction& b,
                                        const Direction& s, Orientation lambda) {
  const Multivector ls = spin_bivector(s, lambda).value;
  const Multivector q = geometric_product(
      geometric_product(geometric_product(-unit_bivector(a), ls), ls),
      unit_bivector(b));
  const EvenDecomposition parts = even_decompose(q);
  (void)parts;
  if (std::abs(q.norm() - 1.0) > kExactTol) {
    throw std::domain_error("trial_quaternion: norm deviates from 1");
  }
  return {q};
}

// --- single-trial derivation chain -----------------------------------------
//
// The expectation-value derivation is checked one adjacent equality at a
// time. Each step is evaluated as concrete multivectors; the report carries
// one max-norm residual per step. In naive mode every product uses the fixed
// right-handed order regardless of lambda, which breaks the bivector-identity
// step at lambda = -1; that failure is itself a regression anchor.

enum class ProductMode { oriented, naive };

enum class ChainStep {
  product_of_limits,
  spin_basis_substitution,
  scalar_commutation,
  unit_bivector_square,
  bivector_identity,
};

inline const char* chain_step_name(ChainStep s) {
  switch (s) {
    case ChainStep::product_of_limits: return "product-of-limits";
    case ChainStep::spin_basis_substitution: return "spin-basis-substitution";
    case ChainStep::scalar_commutation: return "scalar-commutation";
    case ChainStep::unit_bivector_square: return "unit-bivector-square";
    case ChainStep::bivector_identity: return "bivector-identity";
  }
  return "?";
}

struct ChainResidual {
  ChainStep step;
  double residual;
};

struct ChainReport {
  std::array<ChainResidual, 5> steps;

  double max_residual() const {
    double m = 0.0;
    for (const auto& s : steps) m = std::max(m, s.residual);
    return m;
  }

  const ChainResidual* worst() const {
    const ChainResidual* w = &steps[0];
    for (const auto& s : steps) {
      if (s.residual > w->residual) w = &s;
    }
    return w;
  }

  bool ok(double tol = kExactTol) const { return max_residual() <= tol; }
};

namespace detail {

inline Multivector mode_product(ProductMode mode, Orientation lambda,
                                const Multivector& x, const Multivector& y) {
  if (mode == ProductMode::naive) return geometric_product(x, y);
  return oriented_product(lambda, x, y);
}

template <std::size_t N>
Multivector mode_product_seq(ProductMode mode, Orientation lambda,
                             const std::array<Multivector, N>& factors) {
  const bool reversed = (mode == ProductMode::oriented && lambda.value < 0);
  Multivector acc = reversed ? factors[N - 1] : factors[0];
  for (std::size_t i = 1; i < N; ++i) {
    const Multivector& next = reversed ? factors[N - 1 - i] : factors[i];
    acc = geometric_product(acc, next);
  }
  return acc;
}

}  // namespace detail

inline ChainReport verify_derivation_chain(const Direction& a, const Direction& b,
                                         Orientation lambda, const Direction& s,
                                         ProductMode mode = ProductMode::oriented) {
  using detail::mode_product;
  using detail::mode_product_seq;

  const Multivector da = unit_bivector(a);
  const Multivector db = unit_bivector(b);
  const Multivector la = spin_bivector(a, lambda).value;
  const Multivector lb = spin_bivector(b, lambda).value;
  const Multivector ls = spin_bivector(s, lambda).value;
  const double lam = lambda.scalar();

  // Factorized product of the two measurement limits vs the four-factor form.
  const Multivector a_side = mode_product(mode, lambda, -da, ls);
  const Multivector b_side = mode_product(mode, lambda, ls, db);
  const Multivector four_factor =
      mode_product_seq(mode, lambda, std::array<Multivector, 4>{-da, ls, ls, db});
  const double r_limits =
      (mode_product(mode, lambda, a_side, b_side) - four_factor).norm_inf();

  // Detector bivectors rewritten in the spin basis: D(n) = lambda L(n,lambda).
  const Multivector substituted = mode_product_seq(
      mode, lambda,
      std::array<Multivector, 4>{-(la * lam), ls, ls, lb * lam});
  const double r_substitution = (substituted - four_factor).norm_inf();

  // The two lambda scalars commute out and square to one.
  const Multivector commuted =
      mode_product_seq(mode, lambda, std::array<Multivector, 4>{la, ls, ls, lb}) *
      (-lam * lam);
  const double r_commutation = (commuted - substituted).norm_inf();

  // The repeated spin bivector squares to -1.
  const Multivector collapsed = mode_product(mode, lambda, la, lb);
  const double r_square = (collapsed - commuted).norm_inf();

  // Bivector identity split: L(a) L(b) = -a.b - L(a x b).
  const Multivector split =
      Multivector::scalar(-a.dot(b)) -
      Multivector::bivector_dual(a.cross(b)) * lam;
  const double r_identity = (split - collapsed).norm_inf();

  return ChainReport{{{
      {ChainStep::product_of_limits, r_limits},
      {ChainStep::spin_basis_substitution, r_substitution},
      {ChainStep::scalar_commutation, r_commutation},
      {ChainStep::unit_bivector_square, r_square},
      {ChainStep::bivector_identity, r_identity},
  }}};
}

}  // namespace spincorr
