#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "spincorr/spin.hpp"

using namespace spincorr;

TEST_CASE("measurement limits follow the case tables exactly") {
  std::mt19937_64 gen(21);
  for (int k = 0; k < 1000; ++k) {
    const Direction n = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    CHECK(measure_a(n, Orientation::plus()) == +1);
    CHECK(measure_a(n, Orientation::minus()) == -1);
    CHECK(measure_b(n, Orientation::plus()) == -1);
    CHECK(measure_b(n, Orientation::minus()) == +1);
    CHECK(measure_a(n, Orientation::plus()) + measure_b(n, Orientation::plus()) == 0);
    CHECK(measure_a(n, Orientation::minus()) + measure_b(n, Orientation::minus()) == 0);
  }
}

TEST_CASE("raw signs: basic values, oddness, tie flag") {
  const Direction ex = Direction::ex();
  const Direction ey = Direction::ey();

  CHECK(raw_sign_a(ex, ex).value == +1);
  CHECK(raw_sign_b(ey, ey).value == -1);

  std::mt19937_64 gen(22);
  for (int k = 0; k < 200; ++k) {
    const Direction s = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    const Direction a = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    const RawSign fwd = raw_sign_a(s, a);
    const RawSign bwd = raw_sign_a(s.negated(), a);
    if (!fwd.tie && !bwd.tie) {
      CHECK(fwd.value * bwd.value == -1);
    }
  }

  // exact zero dot product: tie-broken to +1 and flagged
  const RawSign tie = raw_sign_a(ex, ey);
  CHECK(tie.value == +1);
  CHECK(tie.tie);
  CHECK_FALSE(raw_sign_a(ex, ex).tie);
}

TEST_CASE("oriented spin product: axes and random pairs") {
  // (+1, ex, ey): scalar 0, e12 coefficient -1
  const Multivector plus =
      oriented_spin_product(Orientation::plus(), Direction::ex(), Direction::ey());
  CHECK(plus.c[0] == 0.0);
  CHECK(plus.c[6] == -1.0);

  const Multivector minus =
      oriented_spin_product(Orientation::minus(), Direction::ex(), Direction::ey());
  CHECK(minus.c[0] == 0.0);
  CHECK(minus.c[6] == +1.0);

  // (lambda, a, a) -> -1
  std::mt19937_64 gen(23);
  for (int k = 0; k < 1000; ++k) {
    const Direction a = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    const Direction b = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    for (const Orientation lambda : {Orientation::plus(), Orientation::minus()}) {
      const Multivector self = oriented_spin_product(lambda, a, a);
      CHECK((self - Multivector::scalar(-1.0)).norm_inf() < kExactTol);

      const Multivector p = oriented_spin_product(lambda, a, b);
      CHECK(std::abs(p.c[0] - (-a.dot(b))) < kExactTol);
      const Multivector want_biv =
          Multivector::bivector_dual(a.cross(b)) * (-lambda.scalar());
      CHECK((p.grade(2) - want_biv).norm_inf() < kExactTol);
    }
  }
}

TEST_CASE("trial quaternion is unit and independent of s and lambda") {
  std::mt19937_64 gen(24);
  const Direction a = Direction::require_unit(oracle::random_unit(gen), 1e-9);
  const Direction b = Direction::require_unit(oracle::random_unit(gen), 1e-9);
  const Multivector want = unit_bivector(a) * unit_bivector(b);

  for (int k = 0; k < 100; ++k) {
    const Direction s = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    for (const Orientation lambda : {Orientation::plus(), Orientation::minus()}) {
      const TrialQuaternion q = trial_quaternion(a, b, s, lambda);
      CHECK((q.value - want).norm_inf() < kExactTol);
      CHECK(std::abs(q.value.norm() - 1.0) < kExactTol);
    }
  }

  // a = b: scalar part is -1
  const TrialQuaternion self = trial_quaternion(a, a, a, Orientation::plus());
  CHECK(self.value.c[0] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("derivation chain: all residuals vanish under the oriented product") {
  {
    const ChainReport report = verify_derivation_chain(
        Direction::ex(), Direction::ey(), Orientation::plus(), Direction::ez());
    CHECK(report.max_residual() < kExactTol);
  }

  std::mt19937_64 gen(25);
  for (int k = 0; k < 1000; ++k) {
    const Direction a = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    const Direction b = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    const Direction s = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    const Orientation lambda = (k & 1) ? Orientation::plus() : Orientation::minus();
    const ChainReport report = verify_derivation_chain(a, b, lambda, s);
    CHECK(report.max_residual() < kExactTol);
    CHECK(report.ok());
  }
}

TEST_CASE("derivation chain: naive product fails at the bivector-identity step") {
  std::mt19937_64 gen(26);
  for (int k = 0; k < 100; ++k) {
    const Direction a = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    const Direction b = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    const Direction s = Direction::require_unit(oracle::random_unit(gen), 1e-9);

    const ChainReport naive_minus =
        verify_derivation_chain(a, b, Orientation::minus(), s, ProductMode::naive);
    CHECK(naive_minus.worst()->step == ChainStep::bivector_identity);
    // The break is exactly twice the cross-product dual.
    CHECK(naive_minus.steps[4].residual ==
          doctest::Approx(2.0 * Multivector::bivector_dual(a.cross(b)).norm_inf())
              .epsilon(1e-12));
    for (int step = 0; step < 4; ++step) {
      CHECK(naive_minus.steps[step].residual < kExactTol);
    }

    // At lambda = +1 the naive and oriented products coincide.
    const ChainReport naive_plus =
        verify_derivation_chain(a, b, Orientation::plus(), s, ProductMode::naive);
    CHECK(naive_plus.max_residual() < kExactTol);
  }
}

TEST_CASE("ensemble mean of the third-spin bivector concentrates") {
  const std::int64_t n = 100000;
  std::mt19937_64 gen(27);
  const Direction a = Direction::require_unit(oracle::random_unit(gen), 1e-9);
  const Direction b = Direction::require_unit(oracle::random_unit(gen), 1e-9);

  Multivector sum;
  for (std::int64_t k = 0; k < n; ++k) {
    TrialRng rng(5150, static_cast<std::uint64_t>(k));
    const Orientation lambda = sample_orientation(rng);
    sum = sum + Multivector::bivector_dual(a.cross(b)) * lambda.scalar();
  }
  const Multivector mean = sum * (1.0 / static_cast<double>(n));
  CHECK(mean.norm() <= 4.0 / std::sqrt(static_cast<double>(n)));
}
