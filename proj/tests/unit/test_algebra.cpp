#include <doctest.h>

#include <cmath>

#include "perplex/algebra.hpp"
#include "support/generators.hpp"

using namespace perplex;
using namespace perplex::testing;

namespace {

void check_close(const Perplex& got, const Perplex& want, double tol = 1e-12) {
  CHECK(got.x1 == doctest::Approx(want.x1).epsilon(tol).scale(1));
  CHECK(got.x2 == doctest::Approx(want.x2).epsilon(tol).scale(1));
}

}  // namespace

TEST_CASE("validate_params on the reference parameter sets") {
  CHECK(validate_params(complex_params()).valid);
  CHECK(validate_params(dual_params()).valid);
  CHECK(validate_params(hyperbolic_params()).valid);

  const ValidationReport r = validate_params({{1, 0, 0}, {0, 1, 0}});
  CHECK_FALSE(r.valid);
  REQUIRE_FALSE(r.failures.empty());
  CHECK(r.failures.front() == "i");
  CHECK(r.residuals[0] == 0.0);
}

TEST_CASE("validate_params flags the alternative branch separately") {
  // a1 = b2 != 0, a2 = b1 = 0 with a3 = 0 fails (i) but matches the branch.
  const ValidationReport r = validate_params({{2, 0, 0}, {0, 2, 1}});
  CHECK_FALSE(r.valid);
  CHECK(r.special_case);
  CHECK(std::find(r.failures.begin(), r.failures.end(), "special-case") == r.failures.end());
  CHECK_THROWS_AS(PerplexAlgebra({{2, 0, 0}, {0, 2, 1}}), InvalidParams);
}

TEST_CASE("thresholds scale with the square of the parameter size") {
  const ValidationReport r = validate_params({{10, 0, -10}, {0, 10, 0}}, 1e-9);
  CHECK(r.valid);
  CHECK(r.threshold == doctest::Approx(1e-7));
}

TEST_CASE("product formula examples") {
  const auto c = PerplexAlgebra::complex();
  check_close(c.mul({0, 1}, {0, 1}), {-1, 0});
  const auto d = PerplexAlgebra::dual_boundary();
  check_close(d.mul({1, -1}, {1, -1}), {0, 0});
  for (const auto& alg : {c, d, PerplexAlgebra::hyperbolic()}) {
    check_close(alg.mul(alg.identity(), {0.3, -1.7}), {0.3, -1.7});
  }
}

TEST_CASE("identity element") {
  check_close(PerplexAlgebra::complex().identity(), {1, 0});
  check_close(PerplexAlgebra::hyperbolic().identity(), {1, 0});
  check_close(identity_element({{2, 0, -2}, {0, 2, 0}}), {0.5, 0});
  CHECK_THROWS_AS(identity_element({{1, 2, 0}, {1, 2, 0}}), DegenerateParams);
}

TEST_CASE("left multiplication matrix") {
  const auto c = PerplexAlgebra::complex();
  Mat2 rot;
  rot << 0, -1, 1, 0;
  CHECK((c.left_mult_matrix({0, 1}) - rot).norm() == 0.0);
  Mat2 swap;
  swap << 0, 1, 1, 0;
  CHECK((PerplexAlgebra::hyperbolic().left_mult_matrix({0, 1}) - swap).norm() == 0.0);

  CounterRng rng(7);
  for (int k = 0; k < 50; ++k) {
    const PerplexAlgebra alg(random_algebra(rng).params);
    CHECK((alg.left_mult_matrix(alg.identity()) - Mat2::Identity()).norm() < 1e-10);
    const Perplex x = random_perplex(rng), y = random_perplex(rng);
    const Vec2 lhs = alg.left_mult_matrix(x) * y.vec();
    CHECK((lhs - alg.mul(x, y).vec()).norm() < 1e-12 * alg.scale() * alg.scale());
  }
}

TEST_CASE("norm examples") {
  CHECK(PerplexAlgebra::complex().norm({3, 4}) == doctest::Approx(25));
  const auto h = PerplexAlgebra::hyperbolic();
  for (double t : {0.1, 0.5, 1.3}) {
    CHECK(h.norm({t, t * (1 - t)}) == doctest::Approx(t * t * t * (2 - t)));
  }
  CHECK(h.norm({0, 0}) == 0.0);
  const auto nc = PerplexAlgebra(dual_params()).norm_coeffs();
  CHECK(nc[0] == 1.0);
  CHECK(nc[1] == 2.0);
  CHECK(nc[2] == 1.0);
}

TEST_CASE("conjugate examples") {
  const auto c = PerplexAlgebra::complex();
  check_close(c.conjugate({3, 4}), {3, -4});
  const auto h = PerplexAlgebra::hyperbolic();
  check_close(h.conjugate(h.identity()), h.identity());
  const Perplex x{2, 1};
  CHECK(h.norm(x) == doctest::Approx(3));
  check_close(h.mul(x, h.conjugate(x)), 3.0 * h.identity());
  check_close(h.conjugate(x), h.conjugate_explicit(x));
}

TEST_CASE("inverse examples") {
  const auto c = PerplexAlgebra::complex();
  check_close(c.inverse({0, 1}), {0, -1});
  check_close(c.inverse(c.identity()), c.identity());
  CHECK_THROWS_AS(PerplexAlgebra::hyperbolic().inverse({1, 1}), NotAUnit);
  CHECK_THROWS_AS(c.inverse({0, 0}), NotAUnit);
}

TEST_CASE("power examples") {
  const auto c = PerplexAlgebra::complex();
  check_close(c.power({0, 1}, 4), {1, 0});
  check_close(c.power({0.4, 2}, 0), c.identity());
  check_close(c.power({0.4, 2}, 1), {0.4, 2});
  check_close(PerplexAlgebra::dual_boundary().power({1, -1}, 2), {0, 0});
  CHECK_THROWS_AS(c.power({1, 0}, 65), InvalidArgument);
  CHECK_THROWS_AS(c.power({1, 0}, -1), InvalidArgument);
}

TEST_CASE("multiplication bound K") {
  CHECK(PerplexAlgebra::complex().mul_bound_k() == 4.0);
  CHECK(PerplexAlgebra({{3, 0, -3}, {0, 3, 0}}).mul_bound_k() == 12.0);
  CHECK(PerplexAlgebra::dual_boundary().mul_bound_k() == 8.0);
}

TEST_CASE("zero-divisor conic") {
  using C = std::array<double, 3>;
  CHECK(PerplexAlgebra::complex().zero_divisor_conic() == C{1, 0, 1});
  CHECK(PerplexAlgebra::hyperbolic().zero_divisor_conic() == C{1, 0, -1});
  CHECK(PerplexAlgebra::dual_boundary().zero_divisor_conic() == C{1, 2, 1});
}

TEST_CASE("separation margin") {
  const auto c = PerplexAlgebra::complex();
  CounterRng rng(11);
  for (int k = 0; k < 20; ++k) {
    CHECK(c.separation_margin(random_perplex(rng)) == doctest::Approx(1.0));
  }
  const auto h = PerplexAlgebra::hyperbolic();
  CHECK(h.separation_margin({1, 0}) == doctest::Approx(1.0));
  double prev = 1.0;
  for (double t = 0.5; t > 1e-6; t /= 4) {
    const double m = h.separation_margin({t, t * (1 - t)});
    CHECK(m < prev);
    prev = m;
  }
  CHECK(prev < 1e-5);
  CHECK_THROWS_AS(c.separation_margin({0, 0}), ZeroInput);
}

TEST_CASE("inverse bound holds on separated units") {
  CounterRng rng(12);
  for (int k = 0; k < 20; ++k) {
    const PerplexAlgebra alg(random_algebra(rng).params);
    const double c = 0.05;
    const double m = alg.inverse_bound(c);
    for (int s = 0; s < 50; ++s) {
      const Perplex x = random_perplex(rng);
      if (alg.separation_margin(x) < c) continue;
      CHECK(norm_euclid(alg.inverse(x)) <= m / norm_euclid(x) * (1 + 1e-6));
    }
  }
}

TEST_CASE("q_ratio closed form on the real axis") {
  const auto c = PerplexAlgebra::complex();
  CHECK(c.q_ratio({0.01, 0}, 3, 0.5) == doctest::Approx(10.0).epsilon(1e-12));
  for (double r : {0.3, 0.05, 1e-3}) {
    CHECK(c.q_ratio({r, 0}, 4, 0.7) == doctest::Approx(std::pow(r, 0.7 * 4 - 4 + 1)));
  }
  CHECK_THROWS_AS(PerplexAlgebra::dual_boundary().q_ratio({1, -1}, 3, 0.5),
                  DegenerateDirection);
}

TEST_CASE("q_ratio grows along separated rays once N > 1/(1-theta)") {
  CounterRng rng(13);
  for (int k = 0; k < 20; ++k) {
    const PerplexAlgebra alg(random_algebra(rng).params);
    Perplex dir = random_perplex(rng);
    dir = dir / norm_euclid(dir);
    if (alg.separation_margin(dir) < 0.1) continue;
    double prev = 0.0;
    for (double r = 0.1; r > 1e-5; r /= 2) {
      const double q = alg.q_ratio(r * dir, 4, 0.5);
      CHECK(q > prev);
      prev = q;
    }
  }
}

TEST_CASE("algebra laws on transported random algebras") {
  CounterRng rng(2024);
  for (int k = 0; k < 200; ++k) {
    const PerplexAlgebra alg(random_algebra(rng).params);
    const double s = alg.scale();
    const double tol = 1e-9 * s * s * s * s;
    for (int t = 0; t < 20; ++t) {
      const Perplex x = random_perplex(rng), y = random_perplex(rng), z = random_perplex(rng);
      CHECK(alg.mul(x, y) == alg.mul(y, x));
      CHECK(norm_max(alg.mul(alg.mul(x, y), z) - alg.mul(x, alg.mul(y, z))) <= tol);
      CHECK(norm_max(alg.mul(alg.identity(), x) - x) <= 1e-9 * s * norm_max(x));
      CHECK(std::abs(alg.norm(alg.mul(x, y)) - alg.norm(x) * alg.norm(y)) <= tol);
      CHECK(norm_max(alg.mul(x, alg.conjugate(x)) - alg.norm(x) * alg.identity()) <= tol);
      CHECK(norm_max(alg.conjugate(x) - alg.conjugate_explicit(x)) <= 1e-9 * s);
      const double kb = alg.mul_bound_k();
      CHECK(norm_max(alg.mul(x, y)) <= kb * norm_max(x) * norm_max(y) * (1 + 1e-12));
      CHECK(norm_euclid(alg.mul(x, y)) <=
            std::sqrt(2.0) * kb * norm_euclid(x) * norm_euclid(y) * (1 + 1e-12));
    }
  }
}

TEST_CASE("binomial identity for powers") {
  CounterRng rng(99);
  for (int k = 0; k < 30; ++k) {
    const PerplexAlgebra alg(random_algebra(rng).params);
    const Perplex x = random_perplex(rng), y = random_perplex(rng);
    const int n = 5;
    Perplex sum;
    double binom = 1;
    for (int i = 0; i <= n; ++i) {
      sum += binom * alg.mul(alg.power(x, i), alg.power(y, n - i));
      binom = binom * (n - i) / (i + 1);
    }
    const Perplex lhs = alg.power(x + y, n);
    CHECK(norm_max(lhs - sum) <= 1e-9 * std::pow(alg.mul_bound_k() * 2, n));
  }
}

TEST_CASE("inverse functoriality and the unit criterion") {
  CounterRng rng(5);
  for (int k = 0; k < 50; ++k) {
    const PerplexAlgebra alg(random_algebra(rng).params);
    const Perplex x = random_perplex(rng), y = random_perplex(rng);
    if (alg.separation_margin(x) < 0.05 || alg.separation_margin(y) < 0.05) continue;
    const Perplex xy = alg.mul(x, y);
    const Perplex lhs = alg.inverse(xy);
    const Perplex rhs = alg.mul(alg.inverse(x), alg.inverse(y));
    CHECK(norm_max(lhs - rhs) <= 1e-8 * norm_max(rhs));
    CHECK(norm_max(alg.inverse(2.5 * x) - alg.inverse(x) / 2.5) <= 1e-9 * norm_max(alg.inverse(x)));
    CHECK(norm_max(alg.mul(x, alg.inverse(x)) - alg.identity()) <= 1e-9 * alg.scale());
    CHECK(alg.is_unit(x));
  }
  const auto h = PerplexAlgebra::hyperbolic();
  CHECK_FALSE(h.is_unit({2, -2}));
  CHECK(h.is_unit({2, -1.9}));
}
