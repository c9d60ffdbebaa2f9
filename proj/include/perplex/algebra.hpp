#pragma once

#include <array>
#include <string>
#include <vector>

#include "perplex/errors.hpp"
#include "perplex/types.hpp"

namespace perplex {

/// Outcome of checking the four defining conditions on (a, b).
///
///   (i)   a1 a3 - a2^2 != 0
///   (ii)  a1 b2 - a2 b1 != 0
///   (iii) a2 b2 - a3 b1  = 0
///   (iv)  a1 a3 - a2^2 + a2 b3 - a3 b2 = 0
///
/// `valid` means all four hold. The alternative branch a1 = b2 != 0,
/// a2 = b1 = 0 is reported through `special_case` only; it never makes a
/// report valid on its own. "special-case" is appended to `failures` when
/// (i)-(iv) fail and the alternative branch fails as well.
struct ValidationReport {
  bool valid = false;
  bool special_case = false;
  std::vector<std::string> failures;
  /// Raw values of the expressions (i)..(iv).
  std::array<double, 4> residuals{};
  /// tol * max(1, ||a||_inf, ||b||_inf)^2, the band every condition used.
  double threshold = 0.0;
};

ValidationReport validate_params(const AlgebraParams& p, double tol = tol::kEq);

/// (b2, -b1) / (a1 b2 - a2 b1). Throws DegenerateParams when detA is inside
/// the tolerance band.
Perplex identity_element(const AlgebraParams& p, double tol = tol::kEq);

/// A validated perplex algebra with its derived quantities cached.
///
/// Construction throws InvalidParams unless (i)-(iv) hold. All members are
/// const; instances are freely shareable across threads.
class PerplexAlgebra {
 public:
  explicit PerplexAlgebra(const AlgebraParams& params, double tol = tol::kEq);

  static PerplexAlgebra complex();     ///< a=(1,0,-1), b=(0,1,0)
  static PerplexAlgebra hyperbolic();  ///< a=(1,0,1),  b=(0,1,0)
  static PerplexAlgebra dual_boundary();  ///< a=(1,0,-1), b=(0,1,2)

  const AlgebraParams& params() const { return params_; }
  double scale() const { return scale_; }
  double det_a() const { return det_a_; }
  /// (a1 b3 - a3 b1)^2 - 4 (a1 b2 - a2 b1)(a2 b3 - a3 b2).
  double delta() const { return delta_; }
  /// (c1, c2, c3) of N(x) = c1 x1^2 + c2 x1 x2 + c3 x2^2.
  const std::array<double, 3>& norm_coeffs() const { return norm_coeffs_; }
  Perplex identity() const { return identity_; }

  Perplex mul(const Perplex& x, const Perplex& y) const;
  Mat2 left_mult_matrix(const Perplex& x) const;

  /// N(x) = det L_x.
  double norm(const Perplex& x) const;

  /// adj(L_x) * 1.
  Perplex conjugate(const Perplex& x) const;
  /// The same conjugate from its closed-form linear formula in (a, b).
  Perplex conjugate_explicit(const Perplex& x) const;

  /// True iff |N(x)| > tol * scale^2 * ||x||^2.
  bool is_unit(const Perplex& x) const;
  /// conj(x) / N(x); throws NotAUnit for zero divisors and zero.
  Perplex inverse(const Perplex& x) const;

  /// Iterated product, x^0 = 1. Exponents above 64 are rejected.
  Perplex power(const Perplex& x, int n) const;

  /// K = 4 max|entries of a, b|, so ||x*y||_m <= K ||x||_m ||y||_m.
  double mul_bound_k() const { return k_bound_; }

  /// (a1 b2 - a2 b1, a1 b3 - a3 b1, a2 b3 - a3 b2): the non-unit conic.
  std::array<double, 3> zero_divisor_conic() const;

  /// |N(x / ||x||)| (Euclidean normalisation). Throws ZeroInput for x = 0.
  double separation_margin(const Perplex& x) const;

  /// M such that ||x^-1|| <= M / ||x|| whenever separation_margin(x) >= c.
  /// The supremum of ||adj(L_v) 1|| over the unit circle is taken on a
  /// 3600-point sample.
  double inverse_bound(double c) const;

  /// ||t^N||_m^theta / ||t^(N-1)||_m. Throws DegenerateDirection when either
  /// power vanishes relative to K^(k-1) ||t||_m^k.
  double q_ratio(const Perplex& t, int n, double theta) const;

 private:
  AlgebraParams params_;
  double tol_;
  double scale_;
  double det_a_;
  double delta_;
  std::array<double, 3> norm_coeffs_;
  Perplex identity_;
  double k_bound_;
};

}  // namespace perplex
