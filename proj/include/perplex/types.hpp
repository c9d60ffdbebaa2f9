#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Core>

namespace perplex {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

/// Relative tolerances shared by every module.
namespace tol {
inline constexpr double kEq = 1e-9;
inline constexpr double kIso = 1e-8;
inline constexpr double kFit = 1e-8;
}  // namespace tol

/// An element (x1, x2) of R^2, read inside some fixed perplex algebra.
///
/// Addition and real scaling are the vector-space operations; the algebra
/// product lives on PerplexAlgebra because it depends on the parameters.
struct Perplex {
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr Perplex() = default;
  constexpr Perplex(double first, double second) : x1(first), x2(second) {}
  explicit Perplex(const Vec2& v) : x1(v(0)), x2(v(1)) {}

  Vec2 vec() const { return {x1, x2}; }

  Perplex& operator+=(const Perplex& o) {
    x1 += o.x1;
    x2 += o.x2;
    return *this;
  }
  Perplex& operator-=(const Perplex& o) {
    x1 -= o.x1;
    x2 -= o.x2;
    return *this;
  }
  Perplex& operator*=(double s) {
    x1 *= s;
    x2 *= s;
    return *this;
  }

  friend Perplex operator+(Perplex l, const Perplex& r) { return l += r; }
  friend Perplex operator-(Perplex l, const Perplex& r) { return l -= r; }
  friend Perplex operator-(const Perplex& x) { return {-x.x1, -x.x2}; }
  friend Perplex operator*(double s, Perplex x) { return x *= s; }
  friend Perplex operator*(Perplex x, double s) { return x *= s; }
  friend Perplex operator/(Perplex x, double s) { return x *= (1.0 / s); }
  friend bool operator==(const Perplex&, const Perplex&) = default;
};

/// ||x||_m = max(|x1|, |x2|).
inline double norm_max(const Perplex& x) {
  return std::max(std::abs(x.x1), std::abs(x.x2));
}

inline double norm_euclid(const Perplex& x) { return std::hypot(x.x1, x.x2); }

/// Raw product parameters (a, b) in R^3 x R^3. No validity implied.
struct AlgebraParams {
  std::array<double, 3> a{};
  std::array<double, 3> b{};

  /// max(1, ||a||_inf, ||b||_inf); the unit against which tolerances scale.
  double scale() const {
    double m = 1.0;
    for (double v : a) m = std::max(m, std::abs(v));
    for (double v : b) m = std::max(m, std::abs(v));
    return m;
  }

  friend bool operator==(const AlgebraParams&, const AlgebraParams&) = default;
};

}  // namespace perplex
