#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "spincorr/estimators.hpp"
#include "spincorr/multivector.hpp"
#include "spincorr/rng.hpp"
#include "spincorr/spin.hpp"

namespace spincorr {

struct ChshConfig {
  Direction a = Direction::ex();
  Direction a_prime = Direction::ey();
  Direction b = Direction::ex();
  Direction b_prime = Direction::ey();
};

// E(a,b) + E(a,b') + E(a',b) - E(a',b').
inline double chsh_separate(double e_ab, double e_ab_prime, double e_a_prime_b,
                            double e_a_prime_b_prime) {
  if (!std::isfinite(e_ab) || !std::isfinite(e_ab_prime) ||
      !std::isfinite(e_a_prime_b) || !std::isfinite(e_a_prime_b_prime)) {
    throw std::invalid_argument("chsh_separate: estimates must be finite");
  }
  return e_ab + e_ab_prime + e_a_prime_b - e_a_prime_b_prime;
}

// Raw +/-1 scores of one trial at all four settings.
struct SettingScores {
  std::int8_t a;
  std::int8_t a_prime;
  std::int8_t b;
  std::int8_t b_prime;
};

// Mean of A_a (B_b + B_b') + A_a' (B_b - B_b'). Every per-trial combination
// is +/-2, so the average cannot leave [-2, 2].
inline double chsh_single_average(std::span<const SettingScores> trials) {
  if (trials.empty()) throw std::domain_error("chsh_single_average: no trials");
  std::int64_t total = 0;
  for (const auto& t : trials) {
    const auto valid = [](std::int8_t v) { return v == 1 || v == -1; };
    if (!valid(t.a) || !valid(t.a_prime) || !valid(t.b) || !valid(t.b_prime)) {
      throw std::invalid_argument("chsh_single_average: scores must be +1 or -1");
    }
    const int combo = t.a * (t.b + t.b_prime) + t.a_prime * (t.b - t.b_prime);
    if (combo != 2 && combo != -2) {
      throw std::logic_error("chsh_single_average: per-trial combination not in {-2,+2}");
    }
    total += combo;
  }
  return static_cast<double>(total) / static_cast<double>(trials.size());
}

// Half the oriented commutator of two standard scores; equals -L(n x n', lambda).
struct TorsionBivector {
  Multivector value;
  Direction n;
  Direction n_prime;
};

inline TorsionBivector torsion(Orientation lambda, const Direction& n,
                               const Direction& n_prime) {
  const Multivector ln = spin_bivector(n, lambda).value;
  const Multivector lnp = spin_bivector(n_prime, lambda).value;
  const Multivector commutator =
      oriented_product(lambda, ln, lnp) - oriented_product(lambda, lnp, ln);
  return {commutator * 0.5, n, n_prime};
}

// Numeric evaluation of the variance inequality. lhs is the separate-average
// CHSH string built from the exact standard-score scalar correlations; the
// finite-n rhs keeps the (mean lambda) term visible so its decay is data, not
// assumption. The square-root argument mixes a scalar with a bivector-valued
// average; the scalar part is evaluated and the bivector coefficient reported
// separately, and the inequality itself is reported as a flag rather than
// asserted.
struct VarianceBoundReport {
  double lhs = 0.0;
  double rhs = 0.0;        // finite-n bound, 2 sqrt(1 - dot - mean_lambda * z_coeff)
  double rhs_limit = 0.0;  // 2 sqrt(1 - dot)
  double cross_dot = 0.0;  // (a x a') . (b' x b)
  double z_coefficient = 0.0;   // |(a x a') x (b' x b)|
  double lambda_mean = 0.0;
  bool sqrt_clamped = false;
  bool holds = false;
};

inline VarianceBoundReport variance_bound_mean(const ChshConfig& config,
                                               double lambda_mean) {
  const auto scalar_correlation = [](const Direction& x, const Direction& y) {
    return even_decompose(oriented_spin_product(Orientation::plus(), x, y)).scalar;
  };
  const double lhs = std::abs(chsh_separate(
      scalar_correlation(config.a, config.b),
      scalar_correlation(config.a, config.b_prime),
      scalar_correlation(config.a_prime, config.b),
      scalar_correlation(config.a_prime, config.b_prime)));

  const Vec3 ua = config.a.cross(config.a_prime);
  const Vec3 vb = config.b_prime.cross(config.b);
  const double dot = ua.dot(vb);
  if (std::abs(dot) > 1.0 + kExactTol) {
    throw std::logic_error("variance_bound: cross-product dot outside [-1, 1]");
  }

  const double z_coeff = ua.cross(vb).norm();

  VarianceBoundReport report;
  report.lhs = lhs;
  report.cross_dot = dot;
  report.z_coefficient = z_coeff;
  report.lambda_mean = lambda_mean;
  report.rhs_limit = 2.0 * std::sqrt(std::max(0.0, 1.0 - dot));
  double arg = 1.0 - dot - lambda_mean * z_coeff;
  if (arg < 0.0) {
    arg = 0.0;
    report.sqrt_clamped = true;
  }
  report.rhs = 2.0 * std::sqrt(arg);
  report.holds = lhs <= report.rhs + 1e-9;
  return report;
}

inline VarianceBoundReport variance_bound(const ChshConfig& config,
                                          std::span<const Orientation> lambdas) {
  if (lambdas.empty()) throw std::domain_error("variance_bound: no lambda samples");
  std::int64_t lambda_total = 0;
  for (const auto& l : lambdas) lambda_total += l.value;
  const double mean =
      static_cast<double>(lambda_total) / static_cast<double>(lambdas.size());
  return variance_bound_mean(config, mean);
}

// Residuals of the disputed basis-bivector difference identity under both
// representations, plus the zero-claim norm and the contracted identity.
// Numbers only; no verdict.
struct DisputeReport {
  double naive_residual = 0.0;
  double oriented_residual = 0.0;
  double zero_claim_norm = 0.0;
  double contraction_residual_max = 0.0;
};

inline DisputeReport dispute_eval(int mu, int nu, std::uint64_t seed = 0x5eedULL,
                                  int contraction_pairs = 64) {
  if (mu == nu) throw std::invalid_argument("dispute_eval: mu and nu must differ");
  if (mu < 1 || mu > 3 || nu < 1 || nu > 3) {
    throw std::out_of_range("dispute_eval: indices must be in {1,2,3}");
  }

  const auto epsilon_sum = [](int m, int n, Orientation lambda) {
    // sum_rho eps_{m n rho} L_rho(lambda)
    Multivector acc;
    for (int rho = 1; rho <= 3; ++rho) {
      if (rho == m || rho == n) continue;
      // parity of the permutation (m, n, rho) of (1, 2, 3)
      const int eps = ((n - m + 3) % 3 == 1) ? +1 : -1;
      acc = acc + basis_bivector(rho, lambda).value * static_cast<double>(eps);
    }
    return acc;
  };

  const Multivector l_mu_p = basis_bivector(mu, Orientation::plus()).value;
  const Multivector l_nu_p = basis_bivector(nu, Orientation::plus()).value;
  const Multivector l_mu_m = basis_bivector(mu, Orientation::minus()).value;
  const Multivector l_nu_m = basis_bivector(nu, Orientation::minus()).value;

  const Multivector rhs = -epsilon_sum(mu, nu, Orientation::plus()) +
                          epsilon_sum(mu, nu, Orientation::minus());

  DisputeReport report;
  report.naive_residual =
      (geometric_product(l_mu_p, l_nu_p) - geometric_product(l_mu_m, l_nu_m) - rhs)
          .norm();
  report.oriented_residual =
      (oriented_product(Orientation::plus(), l_mu_p, l_nu_p) -
       oriented_product(Orientation::minus(), l_mu_m, l_nu_m) - rhs)
          .norm();
  report.zero_claim_norm =
      (epsilon_sum(mu, nu, Orientation::plus()) * -2.0).norm();

  for (int i = 0; i < contraction_pairs; ++i) {
    TrialRng rng(seed, static_cast<std::uint64_t>(i));
    const Direction a = sample_direction(rng);
    const Direction b = sample_direction(rng);
    for (const Orientation lambda : {Orientation::plus(), Orientation::minus()}) {
      const Multivector residual =
          oriented_spin_product(lambda, a, b) + Multivector::scalar(a.dot(b)) +
          Multivector::bivector_dual(a.cross(b)) * lambda.scalar();
      report.contraction_residual_max =
          std::max(report.contraction_residual_max, residual.norm());
    }
  }
  return report;
}

// (1/n) sum_k L(a x b, lambda_k) = (mean lambda) D(a x b): the counterfactual
// third-spin average about the direction orthogonal to both detectors.
inline Multivector third_spin_average(const Direction& a, const Direction& b,
                                      std::span<const Orientation> lambdas) {
  if (lambdas.empty()) throw std::domain_error("third_spin_average: no samples");
  std::int64_t total = 0;
  for (const auto& l : lambdas) total += l.value;
  const double mean = static_cast<double>(total) / static_cast<double>(lambdas.size());
  return Multivector::bivector_dual(a.cross(b)) * mean;
}

}  // namespace spincorr
