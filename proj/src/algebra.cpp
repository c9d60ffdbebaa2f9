#include "perplex/algebra.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace perplex {

namespace {

std::string describe(const AlgebraParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "a=(" << p.a[0] << "," << p.a[1] << "," << p.a[2] << ") b=(" << p.b[0]
     << "," << p.b[1] << "," << p.b[2] << ")";
  return os.str();
}

}  // namespace

ValidationReport validate_params(const AlgebraParams& p, double tol) {
  const auto [a1, a2, a3] = p.a;
  const auto [b1, b2, b3] = p.b;
  for (double v : {a1, a2, a3, b1, b2, b3}) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite algebra parameter");
  }
  if (!(tol > 0.0)) throw InvalidArgument("validation tolerance must be positive");

  ValidationReport r;
  const double s = p.scale();
  r.threshold = tol * s * s;
  r.residuals = {a1 * a3 - a2 * a2, a1 * b2 - a2 * b1, a2 * b2 - a3 * b1,
                 a1 * a3 - a2 * a2 + a2 * b3 - a3 * b2};

  if (!(std::abs(r.residuals[0]) > r.threshold)) r.failures.push_back("i");
  if (!(std::abs(r.residuals[1]) > r.threshold)) r.failures.push_back("ii");
  if (!(std::abs(r.residuals[2]) <= r.threshold)) r.failures.push_back("iii");
  if (!(std::abs(r.residuals[3]) <= r.threshold)) r.failures.push_back("iv");

  const double eq_tol = tol * s;
  r.special_case = std::abs(a1 - b2) <= eq_tol && std::abs(a1) > eq_tol &&
                   std::abs(a2) <= eq_tol && std::abs(b1) <= eq_tol;

  if (!r.failures.empty() && !r.special_case) r.failures.push_back("special-case");
  r.valid = r.failures.empty();
  return r;
}

Perplex identity_element(const AlgebraParams& p, double tol) {
  const double det = p.a[0] * p.b[1] - p.a[1] * p.b[0];
  const double s = p.scale();
  if (!(std::abs(det) > tol * s * s)) {
    throw DegenerateParams("a1 b2 - a2 b1 vanishes; no identity for " + describe(p));
  }
  return {p.b[1] / det, -p.b[0] / det};
}

PerplexAlgebra::PerplexAlgebra(const AlgebraParams& params, double tol)
    : params_(params), tol_(tol), scale_(params.scale()) {
  const ValidationReport report = validate_params(params, tol);
  if (!report.valid) {
    std::string failed;
    for (const auto& f : report.failures) failed += (failed.empty() ? "" : ",") + f;
    throw InvalidParams("not a perplex algebra (" + failed + "): " + describe(params));
  }
  const auto [a1, a2, a3] = params.a;
  const auto [b1, b2, b3] = params.b;
  det_a_ = a1 * b2 - a2 * b1;
  const double m = a1 * b3 - a3 * b1;
  delta_ = m * m - 4.0 * det_a_ * (a2 * b3 - a3 * b2);
  norm_coeffs_ = {det_a_, m, -(a1 * a3 - a2 * a2)};
  identity_ = identity_element(params, tol);
  double mx = 0.0;
  for (double v : params.a) mx = std::max(mx, std::abs(v));
  for (double v : params.b) mx = std::max(mx, std::abs(v));
  k_bound_ = 4.0 * mx;
}

PerplexAlgebra PerplexAlgebra::complex() { return PerplexAlgebra({{1, 0, -1}, {0, 1, 0}}); }
PerplexAlgebra PerplexAlgebra::hyperbolic() { return PerplexAlgebra({{1, 0, 1}, {0, 1, 0}}); }
PerplexAlgebra PerplexAlgebra::dual_boundary() {
  return PerplexAlgebra({{1, 0, -1}, {0, 1, 2}});
}

Perplex PerplexAlgebra::mul(const Perplex& x, const Perplex& y) const {
  const auto& a = params_.a;
  const auto& b = params_.b;
  const double p11 = x.x1 * y.x1;
  const double p12 = x.x1 * y.x2 + x.x2 * y.x1;
  const double p22 = x.x2 * y.x2;
  return {a[0] * p11 + a[1] * p12 + a[2] * p22, b[0] * p11 + b[1] * p12 + b[2] * p22};
}

Mat2 PerplexAlgebra::left_mult_matrix(const Perplex& x) const {
  const auto& a = params_.a;
  const auto& b = params_.b;
  Mat2 l;
  l << a[0] * x.x1 + a[1] * x.x2, a[1] * x.x1 + a[2] * x.x2,
      b[0] * x.x1 + b[1] * x.x2, b[1] * x.x1 + b[2] * x.x2;
  return l;
}

double PerplexAlgebra::norm(const Perplex& x) const {
  const auto& c = norm_coeffs_;
  return c[0] * x.x1 * x.x1 + c[1] * x.x1 * x.x2 + c[2] * x.x2 * x.x2;
}

Perplex PerplexAlgebra::conjugate(const Perplex& x) const {
  const Mat2 l = left_mult_matrix(x);
  Mat2 adj;
  adj << l(1, 1), -l(0, 1), -l(1, 0), l(0, 0);
  return Perplex(Vec2(adj * identity_.vec()));
}

Perplex PerplexAlgebra::conjugate_explicit(const Perplex& x) const {
  const auto [a1, a2, a3] = params_.a;
  const auto [b1, b2, b3] = params_.b;
  const double d = b2 * b2 + a2 * b1;
  return Perplex{d * x.x1 + (b2 * b3 + a3 * b1) * x.x2,
                 -(a1 * b1 + b1 * b2) * x.x1 - d * x.x2} /
         det_a_;
}

bool PerplexAlgebra::is_unit(const Perplex& x) const {
  const double r2 = x.x1 * x.x1 + x.x2 * x.x2;
  return std::abs(norm(x)) > tol_ * scale_ * scale_ * r2 && r2 > 0.0;
}

Perplex PerplexAlgebra::inverse(const Perplex& x) const {
  if (!is_unit(x)) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << x.x1 << "," << x.x2 << ") is not a unit, N(x)=" << norm(x);
    throw NotAUnit(os.str());
  }
  return conjugate(x) / norm(x);
}

Perplex PerplexAlgebra::power(const Perplex& x, int n) const {
  if (n < 0 || n > 64) throw InvalidArgument("power exponent must lie in [0, 64]");
  Perplex r = identity_;
  for (int k = 0; k < n; ++k) r = mul(r, x);
  return r;
}

std::array<double, 3> PerplexAlgebra::zero_divisor_conic() const {
  const auto [a1, a2, a3] = params_.a;
  const auto [b1, b2, b3] = params_.b;
  return {a1 * b2 - a2 * b1, a1 * b3 - a3 * b1, a2 * b3 - a3 * b2};
}

double PerplexAlgebra::separation_margin(const Perplex& x) const {
  const double r = norm_euclid(x);
  if (r == 0.0) throw ZeroInput("separation margin of the zero element");
  return std::abs(norm(x / r));
}

double PerplexAlgebra::inverse_bound(double c) const {
  if (!(c > 0.0)) throw InvalidArgument("separation constant must be positive");
  constexpr int kSamples = 3600;
  double sup = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / kSamples;
    sup = std::max(sup, norm_euclid(conjugate({std::cos(phi), std::sin(phi)})));
  }
  return sup / c;
}

double PerplexAlgebra::q_ratio(const Perplex& t, int n, double theta) const {
  if (n < 2) throw InvalidArgument("q_ratio needs N >= 2");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("q_ratio needs theta in (0,1)");
  const double r = norm_max(t);
  if (r == 0.0) throw ZeroInput("q_ratio at t = 0");
  const Perplex lower = power(t, n - 1);
  const Perplex upper = mul(lower, t);
  auto vanishes = [&](const Perplex& v, int k) {
    return norm_max(v) <= tol_ * std::pow(k_bound_, k - 1) * std::pow(r, k);
  };
  if (vanishes(lower, n - 1) || vanishes(upper, n)) {
    throw DegenerateDirection("t^(N-1) or t^N vanishes along this direction");
  }
  return std::pow(norm_max(upper), theta) / norm_max(lower);
}

}  // namespace perplex
