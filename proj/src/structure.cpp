#include "perplex/structure.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "perplex/random.hpp"

namespace perplex {

std::string to_string(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::Field: return "Field";
    case AlgebraKind::Hyperbolic: return "Hyperbolic";
    case AlgebraKind::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

AlgebraKind algebra_kind_from_string(const std::string& name) {
  if (name == "Field") return AlgebraKind::Field;
  if (name == "Hyperbolic") return AlgebraKind::Hyperbolic;
  if (name == "Degenerate") return AlgebraKind::Degenerate;
  throw InvalidArgument("unknown algebra kind '" + name + "'");
}

double discriminant(const PerplexAlgebra& alg) { return alg.delta(); }

namespace {

Mat2 columns(const Perplex& c0, const Perplex& c1) {
  Mat2 m;
  m << c0.x1, c1.x1, c0.x2, c1.x2;
  return m;
}

Mat2 invert_basis(const Perplex& c0, const Perplex& c1, double tol) {
  const Mat2 m = columns(c0, c1);
  const double scale = std::max({1.0, m.cwiseAbs().maxCoeff()});
  if (!(std::abs(m.determinant()) > tol * scale * scale)) {
    throw IllConditioned("model basis is numerically dependent");
  }
  return m.inverse();
}

}  // namespace

Classification classify(const PerplexAlgebra& alg, double tol) {
  Classification c;
  const double s = alg.scale();
  c.delta = alg.delta();
  c.band = tol * s * s * s * s;
  if (c.delta < -c.band) {
    c.kind = AlgebraKind::Field;
  } else if (c.delta > c.band) {
    c.kind = AlgebraKind::Hyperbolic;
  } else {
    c.kind = AlgebraKind::Degenerate;
  }

  if (!(std::abs(alg.det_a()) > tol * s * s)) {
    throw DegenerateParams("detA vanishes; e1 is not a unit");
  }
  const Perplex e1{1.0, 0.0};
  const Perplex e2{0.0, 1.0};
  c.j = alg.mul(e2, alg.inverse(e1));
  const Mat2 a = alg.left_mult_matrix(e1);
  const Mat2 b = alg.left_mult_matrix(e2);
  c.lj = b * a.inverse();
  c.trace = c.lj.trace();
  c.det = c.lj.determinant();
  c.iso = iso_to_model(c, alg);
  c.iso_residual = iso_residual(c.iso, c.kind, alg);
  return c;
}

Perplex model_mul(AlgebraKind kind, const Perplex& x, const Perplex& y) {
  switch (kind) {
    case AlgebraKind::Field:
      return {x.x1 * y.x1 - x.x2 * y.x2, x.x1 * y.x2 + x.x2 * y.x1};
    case AlgebraKind::Hyperbolic:
      return {x.x1 * y.x1, x.x2 * y.x2};
    case AlgebraKind::Degenerate:
      return {x.x1 * y.x1, x.x1 * y.x2 + x.x2 * y.x1};
  }
  return {};
}

Perplex model_identity(AlgebraKind kind) {
  return kind == AlgebraKind::Hyperbolic ? Perplex{1.0, 1.0} : Perplex{1.0, 0.0};
}

Mat2 iso_to_model(const Classification& cls, const PerplexAlgebra& alg) {
  const Perplex one = alg.identity();
  const Perplex centered = cls.j - (cls.trace / 2.0) * one;
  // Scale of the quantities entering the normalisation denominators.
  const double mag = std::max({1.0, cls.trace * cls.trace / 4.0, std::abs(cls.det)});

  switch (cls.kind) {
    case AlgebraKind::Field: {
      const double d = cls.det - cls.trace * cls.trace / 4.0;
      if (!(d > tol::kEq * mag)) throw IllConditioned("field normalisation denominator vanishes");
      const Perplex jhat = centered / std::sqrt(d);
      return invert_basis(one, jhat, tol::kEq);
    }
    case AlgebraKind::Hyperbolic: {
      const double d = cls.trace * cls.trace / 4.0 - cls.det;
      if (!(d > tol::kEq * mag)) {
        throw IllConditioned("hyperbolic normalisation denominator vanishes");
      }
      // Eigenvalues lambda_+- = tr/2 +- sqrt(d); k = (j - tr/2)/sqrt(d) has
      // k^2 = 1 and the spectral projectors are (1 +- k)/2.
      const Perplex k = centered / std::sqrt(d);
      const Perplex eps_plus = 0.5 * (one + k);
      const Perplex eps_minus = 0.5 * (one - k);
      return invert_basis(eps_plus, eps_minus, tol::kEq);
    }
    case AlgebraKind::Degenerate: {
      const double len = norm_max(centered);
      if (!(len > tol::kEq * mag)) throw IllConditioned("nilpotent generator vanishes");
      return invert_basis(one, centered / len, tol::kEq);
    }
  }
  return Mat2::Identity();
}

double iso_residual(const Mat2& iso, AlgebraKind kind, const PerplexAlgebra& alg, int pairs,
                    std::uint64_t seed) {
  auto phi = [&](const Perplex& x) { return Perplex(Vec2(iso * x.vec())); };
  double worst = norm_max(phi(alg.identity()) - model_identity(kind));
  CounterRng rng(seed, 0x150);
  for (int i = 0; i < pairs; ++i) {
    const Perplex x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Perplex y{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Perplex lhs = phi(alg.mul(x, y));
    const Perplex rhs = model_mul(kind, phi(x), phi(y));
    worst = std::max(worst, norm_max(lhs - rhs));
  }
  return worst;
}

namespace {

/// Real roots of c2 t^2 + c1 t + c0, with leading-coefficient degree
/// reduction under `tol`.
std::vector<double> real_roots(double c2, double c1, double c0, double tol) {
  if (std::abs(c2) <= tol) {
    if (std::abs(c1) <= tol) return {};
    return {-c0 / c1};
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) {
    if (disc < -tol * std::max(c1 * c1, std::abs(4.0 * c2 * c0))) return {};
    return {-c1 / (2.0 * c2)};
  }
  const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
  if (q == 0.0) return {0.0};
  return {q / c2, c0 / q};
}

Perplex canonical_direction(Perplex d) {
  d = d / norm_euclid(d);
  if (d.x1 < 0.0 || (d.x1 == 0.0 && d.x2 < 0.0)) d = -d;
  return d;
}

}  // namespace

std::vector<Perplex> nilpotent_directions(const PerplexAlgebra& alg, double tol) {
  const auto& a = alg.params().a;
  const auto& b = alg.params().b;
  const double s = alg.scale();
  const double eps = tol * s;

  auto qa = [&](double t) { return a[0] + 2.0 * a[1] * t + a[2] * t * t; };
  auto qb = [&](double t) { return b[0] + 2.0 * b[1] * t + b[2] * t * t; };

  std::vector<double> candidates = real_roots(a[2], 2.0 * a[1], a[0], eps);
  for (double t : real_roots(b[2], 2.0 * b[1], b[0], eps)) candidates.push_back(t);

  std::vector<Perplex> out;
  auto add = [&](const Perplex& d) {
    const Perplex c = canonical_direction(d);
    for (const auto& e : out) {
      if (norm_max(e - c) <= 1e-9) return;
    }
    out.push_back(c);
  };
  for (double t : candidates) {
    const double w = 1.0 + t * t;
    if (std::abs(qa(t)) <= eps * w && std::abs(qb(t)) <= eps * w) add({1.0, t});
  }
  if (std::abs(a[2]) <= eps && std::abs(b[2]) <= eps) add({0.0, 1.0});
  std::sort(out.begin(), out.end(),
            [](const Perplex& l, const Perplex& r) { return l.x2 < r.x2; });
  return out;
}

}  // namespace perplex
