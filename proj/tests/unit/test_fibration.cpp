#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "perplex/fibration.hpp"
#include "support/generators.hpp"

using namespace perplex;
using namespace perplex::testing;

namespace {

std::vector<int> majorities(const FibrationReport& r) {
  std::vector<int> m;
  for (const auto& c : r.components) m.push_back(c.majority);
  std::sort(m.begin(), m.end(), std::greater<>());
  return m;
}

double fiber_residual(const PerplexPolyN& f, const PerplexAlgebra& alg,
                      const std::vector<double>& x, const Perplex& c) {
  PerplexPoint p;
  for (std::size_t i = 0; i + 1 < x.size(); i += 2) p.push_back({x[i], x[i + 1]});
  return norm_euclid(eval(f, p, alg) - c);
}

}  // namespace

TEST_CASE("critical_values examples") {
  const auto c = PerplexAlgebra::complex();
  const auto dc = critical_values(monomial1(2), c, 1.0, 0.05);
  REQUIRE_FALSE(dc.empty());
  for (const auto& p : dc) CHECK(norm_max(p) <= 1e-12);

  const auto h = PerplexAlgebra::hyperbolic();
  const auto dh = critical_values(monomial1(2), h, 1.0, 0.05);
  CHECK(dh.size() > 100);
  bool upper = false, lower = false;
  for (const auto& p : dh) {
    CHECK(p.x1 >= -1e-12);
    CHECK(std::abs(p.x1 - std::abs(p.x2)) <= 1e-9);
    CHECK(norm_euclid(p) <= 0.05 + 1e-12);
    upper = upper || p.x2 > 0.01;
    lower = lower || p.x2 < -0.01;
  }
  CHECK(upper);
  CHECK(lower);

  CHECK(critical_values(monomial1(1), c, 1.0, 0.05).empty());
  CHECK_THROWS_AS(critical_values(monomial1(2), PerplexAlgebra::dual_boundary(), 1.0, 0.05),
                  DegenerateAlgebra);
}

TEST_CASE("critical_values in two variables") {
  const auto c = PerplexAlgebra::complex();
  const auto d = critical_values(sum_of_squares(2, c.identity()), c, 1.0, 0.05, 32);
  REQUIRE_FALSE(d.empty());
  for (const auto& p : d) CHECK(norm_max(p) <= 1e-9);
}

TEST_CASE("fiber_solve examples") {
  const auto c = PerplexAlgebra::complex();
  const auto roots = fiber_solve(monomial1(2), c, {1, 0}, 1.5);
  REQUIRE(roots.size() == 2);
  CHECK(norm_max(roots[0] - Perplex{-1, 0}) <= 1e-9);
  CHECK(norm_max(roots[1] - Perplex{1, 0}) <= 1e-9);

  const auto zero = fiber_solve(monomial1(2), c, {0, 0}, 1.0);
  REQUIRE(zero.size() == 1);
  CHECK(norm_max(zero[0]) <= 1e-5);

  const auto h = PerplexAlgebra::hyperbolic();
  const Perplex target{0.03, 0.02};
  const auto four = fiber_solve(monomial1(2), h, target, 1.0);
  REQUIRE(four.size() == 4);
  // (x1 + x2)^2 = c1 + c2 and (x1 - x2)^2 = c1 - c2.
  const double sp = std::sqrt(target.x1 + target.x2), sm = std::sqrt(target.x1 - target.x2);
  for (const auto& x : four) {
    CHECK(std::abs(std::abs(x.x1 + x.x2) - sp) <= 1e-9);
    CHECK(std::abs(std::abs(x.x1 - x.x2) - sm) <= 1e-9);
  }
}

TEST_CASE("fiber residuals and deduplication") {
  CounterRng rng(9);
  for (int k = 0; k < 10; ++k) {
    const PerplexAlgebra alg(random_algebra(rng, static_cast<int>(k % 2)).params);
    PerplexPolyN f = monomial1(3, alg.identity());
    f.terms.push_back({{1}, random_perplex(rng, 0.2)});
    const Perplex c = random_perplex(rng, 0.05);
    const auto xs = fiber_solve(f, alg, c, 1.0, 32);
    for (const auto& x : xs) CHECK(norm_euclid(eval(f, {x}, alg) - c) <= 1e-10);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = i + 1; j < xs.size(); ++j) CHECK(norm_euclid(xs[i] - xs[j]) >= 1e-6);
    }
  }
}

TEST_CASE("local triviality: p^2 over C") {
  const auto c = PerplexAlgebra::complex();
  const FibrationReport r = local_triviality_check(monomial1(2), c, {}, 42);
  CHECK(r.verified);
  REQUIRE(r.components.size() == 1);
  CHECK(r.components[0].constant);
  CHECK(r.components[0].majority == 2);
  for (int n : r.components[0].counts) CHECK(n == 2);
  CHECK(r.max_residual <= 1e-10);
}

TEST_CASE("local triviality: linear map") {
  const auto c = PerplexAlgebra::complex();
  const FibrationReport r = local_triviality_check(monomial1(1), c, {}, 42);
  CHECK(r.verified);
  REQUIRE(r.components.size() == 1);
  CHECK(r.components[0].majority == 1);
  CHECK(r.components[0].constant);
}

TEST_CASE("local triviality: p^2 over R+R is constant on every component") {
  const auto h = PerplexAlgebra::hyperbolic();
  const FibrationReport r = local_triviality_check(monomial1(2), h, {}, 42);
  CHECK(r.verified);
  CHECK(r.consistent);
  for (const auto& comp : r.components) CHECK(comp.constant);
  CHECK(r.max_residual <= 1e-10);
  // The wedge c1 > |c2| carries four preimages, the rest none.
  const auto m = majorities(r);
  REQUIRE_FALSE(m.empty());
  CHECK(m.front() == 4);
  CHECK(m.back() == 0);
}

// The discriminant of p^2 over R+R is the pair of rays c2 = +-c1, c1 >= 0,
// which cuts the disk into two regions, not four.
TEST_CASE("local triviality: p^2 over R+R has four components" * doctest::should_fail()) {
  const auto h = PerplexAlgebra::hyperbolic();
  const FibrationReport r = local_triviality_check(monomial1(2), h, {}, 42);
  CHECK(majorities(r) == std::vector<int>{4, 0, 0, 0});
}

TEST_CASE("fiber counts do not depend on the seed") {
  for (const auto& alg : {PerplexAlgebra::complex(), PerplexAlgebra::hyperbolic()}) {
    const FibrationReport a = local_triviality_check(monomial1(2), alg, {}, 1);
    const FibrationReport b = local_triviality_check(monomial1(2), alg, {}, 2);
    CHECK(majorities(a) == majorities(b));
  }
}

TEST_CASE("local triviality rejects bad input") {
  const auto c = PerplexAlgebra::complex();
  TrivialityOptions opts;
  opts.eta = 0.2;
  CHECK_THROWS_AS(local_triviality_check(monomial1(2), c, opts, 1), InvalidArgument);
  CHECK_THROWS_AS(local_triviality_check(monomial1(2), PerplexAlgebra::dual_boundary(), {}, 1),
                  DegenerateAlgebra);
  CHECK_THROWS_AS(local_triviality_check(sum_of_squares(2, c.identity()), c, {}, 1),
                  InvalidArgument);
  opts = {};
  opts.target_grid = 4;
  opts.probes_per_component = 64;
  CHECK_THROWS_AS(local_triviality_check(monomial1(2), c, opts, 1), MaskTooCoarse);
}

TEST_CASE("fiber_cloud: complex A1 Milnor fiber") {
  const auto c = PerplexAlgebra::complex();
  const PerplexPolyN f = sum_of_squares(2, c.identity());
  CloudOptions opts;
  const Perplex target{opts.eta / 2, 0};
  const FiberCloud cloud = fiber_cloud(f, c, target, opts, 7);
  REQUIRE_FALSE(cloud.points.empty());
  CHECK(cloud.connectivity >= 1);
  CHECK_FALSE(cloud.on_discriminant);
  CHECK(cloud.max_residual <= 1e-10);
  for (const auto& x : cloud.points) {
    CHECK(fiber_residual(f, c, x, target) <= 1e-10);
    CHECK(std::hypot(std::hypot(x[0], x[1]), std::hypot(x[2], x[3])) <= opts.epsilon + 1e-12);
  }
}

// The fiber is sampled thinly near the sphere of radius epsilon, and isolated
// points there form their own single-linkage components.
TEST_CASE("fiber_cloud: connected fiber gives a connectivity estimate of 1" *
          doctest::should_fail()) {
  const auto c = PerplexAlgebra::complex();
  CloudOptions opts;
  const FiberCloud cloud =
      fiber_cloud(sum_of_squares(2, c.identity()), c, {opts.eta / 2, 0}, opts, 7);
  CHECK(cloud.connectivity == 1);
}

TEST_CASE("fiber_cloud flags targets on the discriminant") {
  const auto c = PerplexAlgebra::complex();
  CloudOptions opts;
  opts.cloud_size = 256;
  const FiberCloud cloud = fiber_cloud(sum_of_squares(2, c.identity()), c, {0, 0}, opts, 7);
  CHECK(cloud.on_discriminant);
  CHECK_FALSE(cloud.warnings.empty());
}

TEST_CASE("fiber_cloud connectivity is stable across seeds") {
  const auto h = PerplexAlgebra::hyperbolic();
  const PerplexPolyN f = sum_of_squares(2, h.identity());
  CloudOptions opts;
  opts.cloud_size = 1024;
  const Perplex target{0.02, 0.005};
  const FiberCloud a = fiber_cloud(f, h, target, opts, 1);
  const FiberCloud b = fiber_cloud(f, h, target, opts, 2);
  REQUIRE_FALSE(a.points.empty());
  CHECK(a.connectivity == b.connectivity);
  CHECK(a.max_residual <= 1e-10);
  CHECK(b.max_residual <= 1e-10);
}

TEST_CASE("fiber_cloud reports empty fibers") {
  const auto c = PerplexAlgebra::complex();
  CloudOptions opts;
  opts.cloud_size = 64;
  // |p1^2 + p2^2| <= 2 eps^2 inside the ball, so c = (50, 0) is unreachable.
  CHECK_THROWS_AS(fiber_cloud(sum_of_squares(2, c.identity()), c, {50, 0}, opts, 3), EmptyFiber);
}
