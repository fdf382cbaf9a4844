#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "spincorr/multivector.hpp"

using namespace spincorr;

namespace {
const Multivector kI = Multivector::pseudoscalar();
}

TEST_CASE("product table matches the independent blade oracle on all pairs") {
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const Multivector got = Multivector::basis(i) * Multivector::basis(j);
      const Multivector want = oracle::product(Multivector::basis(i), Multivector::basis(j));
      CHECK((got - want).norm_inf() == 0.0);
    }
  }
}

TEST_CASE("basis vector squares to +1, pseudoscalar squares to -1") {
  const Multivector e1 = Multivector::basis(1);
  CHECK((e1 * e1 - Multivector::scalar(1.0)).norm_inf() == 0.0);
  CHECK((kI * kI - Multivector::scalar(-1.0)).norm_inf() == 0.0);
}

TEST_CASE("duality is a coefficient copy") {
  CHECK(((kI * Multivector::basis(1)) - Multivector::basis(4)).norm_inf() == 0.0);
  CHECK(((kI * Multivector::basis(2)) - Multivector::basis(5)).norm_inf() == 0.0);
  CHECK(((kI * Multivector::basis(3)) - Multivector::basis(6)).norm_inf() == 0.0);
}

TEST_CASE("grade-0 part of a vector product is the dot product") {
  std::mt19937_64 gen(11);
  for (int k = 0; k < 100; ++k) {
    const Vec3 u = oracle::random_unit(gen) * 2.0;
    const Vec3 v = oracle::random_unit(gen);
    const Multivector p = Multivector::vector(u) * Multivector::vector(v);
    CHECK(p.c[0] == doctest::Approx(u.dot(v)).epsilon(1e-14));
  }
}

TEST_CASE("(I ex)(I ey) has scalar 0 and e12 coefficient -1") {
  const Multivector p =
      unit_bivector(Direction::ex()) * unit_bivector(Direction::ey());
  const Multivector want = oracle::product(unit_bivector(Direction::ex()),
                                           unit_bivector(Direction::ey()));
  CHECK((p - want).norm_inf() == 0.0);
  CHECK(p.c[0] == 0.0);
  CHECK(p.c[6] == -1.0);
}

TEST_CASE("unit_bivector of axes lands on the dual blades") {
  CHECK((unit_bivector(Direction::ez()) - Multivector::basis(6)).norm_inf() == 0.0);
  CHECK((unit_bivector(Direction::ex()) - Multivector::basis(4)).norm_inf() == 0.0);
}

TEST_CASE("every unit bivector squares to -1") {
  std::mt19937_64 gen(12);
  for (int k = 0; k < 1000; ++k) {
    const Direction n = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    const Multivector b = unit_bivector(n);
    CHECK((b * b - Multivector::scalar(-1.0)).norm_inf() < kExactTol);
    CHECK(std::abs(b.norm_sq() - 1.0) < kExactTol);
    CHECK(b.grade(2).norm_inf() == b.norm_inf());
  }
}

TEST_CASE("non-unit input to Direction is rejected") {
  CHECK_THROWS_AS(Direction::require_unit({1.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Direction::normalized({0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("oriented product: +1 keeps order, -1 reverses it") {
  std::mt19937_64 gen(13);
  const Direction a = Direction::require_unit(oracle::random_unit(gen), 1e-9);
  const Direction b = Direction::require_unit(oracle::random_unit(gen), 1e-9);
  const Multivector ia = unit_bivector(a);
  const Multivector ib = unit_bivector(b);

  // (+1, I a, I b) = (I a)(I b) = -a.b - I (a x b)
  const Multivector plus = oriented_product(Orientation::plus(), ia, ib);
  const Multivector want =
      Multivector::scalar(-a.dot(b)) - Multivector::bivector_dual(a.cross(b));
  CHECK((plus - want).norm_inf() < kExactTol);

  // (-1, I b, I a) is the same right-handed product (I a)(I b)
  const Multivector swapped = oriented_product(Orientation::minus(), ib, ia);
  CHECK((swapped - plus).norm_inf() == 0.0);

  // (-1, L(a,-1), L(b,-1)) = -a.b - (-I).(a x b)
  const Multivector la = ia * -1.0;
  const Multivector lb = ib * -1.0;
  const Multivector minus = oriented_product(Orientation::minus(), la, lb);
  const Multivector want_minus =
      Multivector::scalar(-a.dot(b)) + Multivector::bivector_dual(a.cross(b));
  CHECK((minus - want_minus).norm_inf() < kExactTol);
}

TEST_CASE("basis_bivector values and orientation flip") {
  CHECK((basis_bivector(3, Orientation::plus()).value - Multivector::basis(6))
            .norm_inf() == 0.0);
  CHECK((basis_bivector(3, Orientation::minus()).value + Multivector::basis(6))
            .norm_inf() == 0.0);
  const Multivector l1 = basis_bivector(1, Orientation::plus()).value;
  CHECK((l1 * l1 - Multivector::scalar(-1.0)).norm_inf() == 0.0);
  CHECK_THROWS_AS(basis_bivector(0, Orientation::plus()), std::out_of_range);
  CHECK_THROWS_AS(basis_bivector(4, Orientation::plus()), std::out_of_range);
}

TEST_CASE("reverse fixes grades 0-1, negates grades 2-3, anti-automorphism") {
  CHECK((reverse(Multivector::scalar(5.0)) - Multivector::scalar(5.0)).norm_inf() == 0.0);
  CHECK((reverse(Multivector::basis(6)) + Multivector::basis(6)).norm_inf() == 0.0);

  const Multivector e1 = Multivector::basis(1);
  const Multivector e2 = Multivector::basis(2);
  CHECK((reverse(e1 * e2) - reverse(e2) * reverse(e1)).norm_inf() == 0.0);

  std::mt19937_64 gen(14);
  for (int k = 0; k < 200; ++k) {
    const Multivector x = oracle::random_multivector(gen);
    const Multivector y = oracle::random_multivector(gen);
    CHECK((reverse(x * y) - reverse(y) * reverse(x)).norm_inf() < kExactTol);
  }
}

TEST_CASE("even_decompose splits and rejects odd contamination") {
  Multivector m;
  m.c[0] = -0.5;
  m.c[6] = -0.2;
  const EvenDecomposition parts = even_decompose(m);
  CHECK(parts.scalar == -0.5);
  CHECK(parts.bivector.c[6] == -0.2);
  CHECK(parts.bivector.c[0] == 0.0);

  const EvenDecomposition one = even_decompose(Multivector::scalar(1.0));
  CHECK(one.scalar == 1.0);
  CHECK(one.bivector.norm_inf() == 0.0);

  // perpendicular pair: scalar 0, bivector -I.(a x b)
  const Multivector p =
      unit_bivector(Direction::ex()) * unit_bivector(Direction::ey());
  const EvenDecomposition perp = even_decompose(p);
  CHECK(perp.scalar == 0.0);
  const Vec3 axb = Direction::ex().cross(Direction::ey());
  CHECK((perp.bivector + Multivector::bivector_dual(axb)).norm_inf() == 0.0);

  Multivector bad;
  bad.c[1] = 1e-6;
  CHECK_THROWS_AS(even_decompose(bad), std::domain_error);
}

TEST_CASE("associativity over 1000 random triples") {
  std::mt19937_64 gen(15);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Multivector x = oracle::random_multivector(gen);
    const Multivector y = oracle::random_multivector(gen);
    const Multivector z = oracle::random_multivector(gen);
    worst = std::max(worst, ((x * y) * z - x * (y * z)).norm_inf());
  }
  CHECK(worst < kChainTol);
}

TEST_CASE("oriented sub-algebra holds for all 18 cases; plain product fails at -1") {
  for (int mu = 1; mu <= 3; ++mu) {
    for (int nu = 1; nu <= 3; ++nu) {
      for (const Orientation lambda : {Orientation::plus(), Orientation::minus()}) {
        const Multivector lmu = basis_bivector(mu, lambda).value;
        const Multivector lnu = basis_bivector(nu, lambda).value;
        Multivector want = Multivector::scalar(mu == nu ? -1.0 : 0.0);
        if (mu != nu) {
          const int rho = 6 - mu - nu;
          const int eps = ((nu - mu + 3) % 3 == 1) ? +1 : -1;
          want = want - basis_bivector(rho, lambda).value * static_cast<double>(eps);
        }
        CHECK((oriented_product(lambda, lmu, lnu) - want).norm_inf() < kExactTol);

        if (lambda.value < 0 && mu != nu) {
          // regression: the naive product misses by exactly a 2-norm
          CHECK((geometric_product(lmu, lnu) - want).norm() ==
                doctest::Approx(2.0).epsilon(1e-14));
        }
      }
    }
  }
}

TEST_CASE("oriented bivector identity over 1000 random pairs") {
  std::mt19937_64 gen(16);
  for (int k = 0; k < 1000; ++k) {
    const Direction a = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    const Direction b = Direction::require_unit(oracle::random_unit(gen), 1e-9);
    for (const Orientation lambda : {Orientation::plus(), Orientation::minus()}) {
      const Multivector la = unit_bivector(a) * lambda.scalar();
      const Multivector lb = unit_bivector(b) * lambda.scalar();
      const Multivector got = oriented_product(lambda, la, lb);
      const Multivector want =
          Multivector::scalar(-a.dot(b)) -
          Multivector::bivector_dual(a.cross(b)) * lambda.scalar();
      CHECK((got - want).norm_inf() < kExactTol);
    }
  }
}

TEST_CASE("pseudoscalar commutes with every multivector") {
  std::mt19937_64 gen(17);
  for (int k = 0; k < 200; ++k) {
    const Multivector x = oracle::random_multivector(gen);
    CHECK((kI * x - x * kI).norm_inf() < kExactTol);
  }
}
