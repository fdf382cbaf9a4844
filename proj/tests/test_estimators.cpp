#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spincorr/estimators.hpp"

using namespace spincorr;

TEST_CASE("accumulator basics on axis-aligned pairs") {
  const Direction ez = Direction::ez();
  CorrelationAccumulator acc;
  accumulate_standard(acc, Orientation::plus(), ez, ez);
  CHECK(acc.count() == 1);
  CHECK(acc.total().c[0] == -1.0);

  // two opposite-orientation trials on a perpendicular pair cancel exactly
  CorrelationAccumulator perp;
  accumulate_standard(perp, Orientation::plus(), Direction::ex(), Direction::ey());
  accumulate_standard(perp, Orientation::minus(), Direction::ex(), Direction::ey());
  CHECK(perp.count() == 2);
  CHECK(perp.total().norm_inf() == 0.0);

  CorrelationAccumulator counted;
  for (int i = 0; i < 57; ++i) {
    accumulate_standard(counted, Orientation::plus(), ez, ez);
  }
  CHECK(counted.count() == 57);
}

TEST_CASE("finalize: scalar equals -a.b regardless of the lambda sequence") {
  const Direction a = Direction::ex();
  const Direction b = Direction::planar_deg(60.0);
  const double want = -a.dot(b);

  std::mt19937_64 gen(31);
  CorrelationAccumulator acc;
  for (int k = 0; k < 100000; ++k) {
    const Orientation lambda = (gen() & 1) ? Orientation::plus() : Orientation::minus();
    accumulate_standard(acc, lambda, a, b);
  }
  const CorrelationEstimate est = finalize_standard(acc, a, b);
  CHECK(std::abs(est.scalar - want) < kExactTol);
  CHECK(std::abs(est.scalar - (-0.5)) < 1e-12);

  // all-plus sequence gives the same scalar
  CorrelationAccumulator plus;
  for (int k = 0; k < 1000; ++k) accumulate_standard(plus, Orientation::plus(), a, b);
  CHECK(std::abs(finalize_standard(plus, a, b).scalar - want) < kExactTol);
}

TEST_CASE("finalize: scalar is permutation-invariant bit for bit") {
  const Direction a = Direction::ex();
  const Direction b = Direction::planar_deg(33.0);
  std::vector<Orientation> seq;
  std::mt19937_64 gen(32);
  for (int k = 0; k < 5000; ++k) {
    seq.push_back((gen() & 1) ? Orientation::plus() : Orientation::minus());
  }

  CorrelationAccumulator first;
  for (const auto lambda : seq) accumulate_standard(first, lambda, a, b);
  std::shuffle(seq.begin(), seq.end(), gen);
  CorrelationAccumulator second;
  for (const auto lambda : seq) accumulate_standard(second, lambda, a, b);

  CHECK(finalize_standard(first, a, b).scalar == finalize_standard(second, a, b).scalar);
}

TEST_CASE("finalize: fair-coin bivector remainder concentrates at 90 degrees") {
  const Direction a = Direction::ex();
  const Direction b = Direction::ey();
  const std::int64_t n = 1000000;
  CorrelationAccumulator acc;
  for (std::int64_t k = 0; k < n; ++k) {
    TrialRng rng(404, static_cast<std::uint64_t>(k));
    accumulate_standard(acc, sample_orientation(rng), a, b);
  }
  const CorrelationEstimate est = finalize_standard(acc, a, b);
  CHECK(est.bivector.norm() <= 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(est.scalar) < kExactTol);
}

TEST_CASE("finalize: aligned detectors give exactly -1 and no remainder") {
  const Direction a = Direction::ez();
  CorrelationAccumulator acc;
  accumulate_standard(acc, Orientation::plus(), a, a);
  accumulate_standard(acc, Orientation::minus(), a, a);
  const CorrelationEstimate est = finalize_standard(acc, a, a);
  CHECK(est.scalar == -1.0);
  CHECK(est.bivector.norm_inf() == 0.0);
  CHECK(est.std_error == 0.0);

  CorrelationAccumulator empty;
  CHECK_THROWS_AS(finalize_standard(empty, a, a), std::domain_error);
}

TEST_CASE("merge equals sequential accumulation") {
  const Direction a = Direction::ex();
  const Direction b = Direction::planar_deg(47.0);
  std::mt19937_64 gen(33);

  CorrelationAccumulator whole, left, right;
  for (int k = 0; k < 20000; ++k) {
    const Orientation lambda = (gen() & 1) ? Orientation::plus() : Orientation::minus();
    accumulate_standard(whole, lambda, a, b);
    accumulate_standard(k < 7321 ? left : right, lambda, a, b);
  }
  left.merge(right);
  CHECK(left.count() == whole.count());
  CHECK((left.total() - whole.total()).norm_inf() < kExactTol);
  CHECK((left.mean() - whole.mean()).norm_inf() < kExactTol);
}

TEST_CASE("pearson: lambda scores are exactly -1") {
  PearsonStats stats;
  std::mt19937_64 gen(34);
  for (int k = 0; k < 100000; ++k) {
    const int lambda = (gen() & 1) ? +1 : -1;
    stats.add(lambda, -lambda);
  }
  CHECK(pearson_raw(stats) == -1.0);
}

TEST_CASE("pearson: uniform-s sign scores follow the hemisphere overlap") {
  const std::int64_t n = 1000000;
  for (const double theta_deg : {60.0, 90.0}) {
    const Direction a = Direction::ex();
    const Direction b = Direction::planar_deg(theta_deg);
    PearsonStats stats;
    for (std::int64_t k = 0; k < n; ++k) {
      TrialRng rng(1808, static_cast<std::uint64_t>(k));
      (void)sample_orientation(rng);
      const Direction s = sample_direction(rng);
      stats.add(raw_sign_a(s, a).value, raw_sign_b(s, b).value);
    }
    const double want = oracle::sign_score_correlation(theta_deg * M_PI / 180.0);
    CHECK(std::abs(pearson_raw(stats) - want) < 0.005);
  }
}

TEST_CASE("hemisphere-overlap oracle agrees with an unrelated Monte Carlo") {
  for (const double theta_deg : {30.0, 60.0, 120.0}) {
    const double theta = theta_deg * M_PI / 180.0;
    const double analytic = oracle::sign_score_correlation(theta);
    const double mc = oracle::sign_score_monte_carlo(theta, 400000, 999);
    CHECK(std::abs(mc - analytic) < 5.0 / std::sqrt(400000.0));
  }
}

TEST_CASE("pearson error paths") {
  PearsonStats stats;
  CHECK_THROWS_AS(stats.add(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(stats.add(1, 2), std::invalid_argument);
  stats.add(1, 1);
  CHECK_THROWS_AS(pearson_raw(stats), std::domain_error);  // n < 2
  stats.add(1, -1);
  CHECK_THROWS_AS(pearson_raw(stats), std::domain_error);  // zero variance in A
}

TEST_CASE("bivector sigma: spread factor") {
  const Direction axis = Direction::ez();

  std::vector<SpinBivector> constant(100, spin_bivector(axis, Orientation::plus()));
  CHECK(bivector_sigma(constant, -1, axis).spread == 0.0);

  std::vector<SpinBivector> half;
  for (int i = 0; i < 1000; ++i) {
    half.push_back(spin_bivector(axis, i % 2 ? Orientation::plus() : Orientation::minus()));
  }
  CHECK(bivector_sigma(half, -1, axis).spread == 1.0);

  // fair coin: spread within 10/sqrt(n) of 1
  const std::int64_t n = 1000000;
  std::vector<SpinBivector> fair;
  fair.reserve(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    TrialRng rng(606, static_cast<std::uint64_t>(k));
    fair.push_back(spin_bivector(axis, sample_orientation(rng)));
  }
  CHECK(std::abs(bivector_sigma(fair, -1, axis).spread - 1.0) <
        10.0 / std::sqrt(static_cast<double>(n)));

  // detector factor carries the sign
  CHECK((bivector_sigma(constant, -1, axis).detector_factor + unit_bivector(axis))
            .norm_inf() == 0.0);
  CHECK((bivector_sigma(constant, +1, axis).detector_factor - unit_bivector(axis))
            .norm_inf() == 0.0);

  std::vector<SpinBivector> empty;
  CHECK_THROWS_AS(bivector_sigma(empty, -1, axis), std::domain_error);
  std::vector<SpinBivector> wrong{spin_bivector(Direction::ex(), Orientation::plus())};
  CHECK_THROWS_AS(bivector_sigma(wrong, -1, axis), std::invalid_argument);
}

TEST_CASE("bivector sigma matches the direct norm-based route") {
  const Direction axis = Direction::ez();
  std::mt19937_64 gen(36);
  std::vector<SpinBivector> sample;
  for (int k = 0; k < 257; ++k) {
    sample.push_back(spin_bivector(
        axis, (gen() & 1) ? Orientation::plus() : Orientation::minus()));
  }
  Multivector mean;
  for (const auto& s : sample) mean = mean + s.value;
  mean = mean * (1.0 / static_cast<double>(sample.size()));
  double sq = 0.0;
  for (const auto& s : sample) sq += (s.value - mean).norm_sq();
  const double direct = std::sqrt(sq / static_cast<double>(sample.size()));
  CHECK(bivector_sigma(sample, +1, axis).spread ==
        doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("standardize recovers the spin bivector from both raw-score forms") {
  std::mt19937_64 gen(37);
  for (int k = 0; k < 100; ++k) {
    const Direction n = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    for (const Orientation lambda : {Orientation::plus(), Orientation::minus()}) {
      const Multivector l = spin_bivector(n, lambda).value;

      const Multivector raw_a = geometric_product(-unit_bivector(n), l);
      const Multivector got_a = standardize(raw_a, {-unit_bivector(n), 1.0});
      CHECK((got_a - l).norm_inf() < kExactTol);

      const Multivector raw_b = geometric_product(unit_bivector(n), l);
      const Multivector got_b = standardize(raw_b, {unit_bivector(n), 1.0});
      CHECK((got_b - l).norm_inf() < kExactTol);
    }
  }

  // round-trip: -D times the recovered bivector gives back the raw score
  const Direction ez = Direction::ez();
  const Multivector raw = geometric_product(-unit_bivector(ez),
                                            spin_bivector(ez, Orientation::plus()).value);
  const Multivector recovered = standardize(raw, {-unit_bivector(ez), 1.0});
  const Multivector back = geometric_product(-unit_bivector(ez), recovered);
  CHECK((back - raw).norm_inf() == 0.0);

  CHECK_THROWS_AS(standardize(raw, {-unit_bivector(ez), 0.0}), std::domain_error);
  CHECK_THROWS_AS(standardize(raw, {Multivector::scalar(1.0), 1.0}),
                  std::invalid_argument);
}

TEST_CASE("scalar series standard error") {
  ScalarSeries constant;
  for (int i = 0; i < 100; ++i) constant.add(-1.0);
  CHECK(constant.std_error() == 0.0);

  ScalarSeries alternating;
  for (int i = 0; i < 100; ++i) alternating.add(i % 2 ? 1.0 : -1.0);
  CHECK(std::abs(alternating.std_error() - 0.1005) < 1e-3);

  ScalarSeries fair;
  std::mt19937_64 gen(38);
  for (int i = 0; i < 1000000; ++i) fair.add((gen() & 1) ? 1.0 : -1.0);
  CHECK(fair.std_error() == doctest::Approx(0.001).epsilon(0.10));

  ScalarSeries tiny;
  tiny.add(1.0);
  CHECK_THROWS_AS(tiny.std_error(), std::domain_error);
}

TEST_CASE("pearson is invariant under joint relabeling, flips under single") {
  std::mt19937_64 gen(39);
  PearsonStats plain, joint, single;
  for (int k = 0; k < 10000; ++k) {
    TrialRng rng(7007, static_cast<std::uint64_t>(k));
    (void)sample_orientation(rng);
    const Direction s = sample_direction(rng);
    const int a = raw_sign_a(s, Direction::ex()).value;
    const int b = raw_sign_b(s, Direction::planar_deg(50.0)).value;
    plain.add(a, b);
    joint.add(-a, -b);
    single.add(-a, b);
  }
  CHECK(pearson_raw(plain) == doctest::Approx(pearson_raw(joint)).epsilon(1e-15));
  CHECK(pearson_raw(plain) == doctest::Approx(-pearson_raw(single)).epsilon(1e-15));
}
