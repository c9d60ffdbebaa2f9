#pragma once

#include <map>
#include <vector>

#include <Eigen/Core>

#include "perplex/algebra.hpp"

namespace perplex {

using Exponent = std::vector<int>;

/// Sparse real polynomial in a fixed number of variables.
///
/// Terms are kept in a map keyed by exponent vector, so iteration order (and
/// therefore every printed or serialized form) is deterministic. Exact zero
/// coefficients are never stored.
class RealPoly {
 public:
  explicit RealPoly(int nvars = 0) : nvars_(nvars) {}

  static RealPoly constant(int nvars, double c);
  /// The coordinate function x_index, 0-based.
  static RealPoly variable(int nvars, int index);

  int nvars() const { return nvars_; }
  const std::map<Exponent, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& exp, double c);
  double coeff(const Exponent& exp) const;

  double eval(const std::vector<double>& x) const;
  RealPoly derivative(int var) const;
  int total_degree() const;
  double max_abs_coeff() const;
  /// Drops terms with |c| <= tol.
  RealPoly trimmed(double tol) const;

  RealPoly& operator+=(const RealPoly& o);
  RealPoly& operator-=(const RealPoly& o);
  RealPoly& operator*=(double s);

  friend RealPoly operator+(RealPoly l, const RealPoly& r) { return l += r; }
  friend RealPoly operator-(RealPoly l, const RealPoly& r) { return l -= r; }
  friend RealPoly operator*(RealPoly p, double s) { return p *= s; }
  friend RealPoly operator*(double s, RealPoly p) { return p *= s; }
  friend RealPoly operator*(const RealPoly& l, const RealPoly& r);
  friend bool operator==(const RealPoly&, const RealPoly&) = default;

 private:
  int nvars_;
  std::map<Exponent, double> terms_;
};

/// A pair (u, v) of real polynomials read as an R^2-valued function.
struct PolyPair {
  RealPoly u;
  RealPoly v;

  Perplex eval(const std::vector<double>& x) const { return {u.eval(x), v.eval(x)}; }
  double max_abs_coeff() const { return std::max(u.max_abs_coeff(), v.max_abs_coeff()); }
  PolyPair derivative(int var) const { return {u.derivative(var), v.derivative(var)}; }
  bool is_zero() const { return u.is_zero() && v.is_zero(); }

  friend PolyPair operator+(const PolyPair& l, const PolyPair& r) {
    return {l.u + r.u, l.v + r.v};
  }
  friend PolyPair operator-(const PolyPair& l, const PolyPair& r) {
    return {l.u - r.u, l.v - r.v};
  }
  friend bool operator==(const PolyPair&, const PolyPair&) = default;
};

/// Real polynomial map R^{2n} -> R^2 in the variables
/// x11, x12, ..., xn1, xn2 (real index 2i and 2i+1 for perplex variable i).
struct PolyMap {
  int nvars = 1;
  PolyPair f;

  PolyMap() : f{RealPoly(2), RealPoly(2)} {}
  PolyMap(int n, RealPoly u, RealPoly v) : nvars(n), f{std::move(u), std::move(v)} {}

  const RealPoly& u() const { return f.u; }
  const RealPoly& v() const { return f.v; }
  int real_vars() const { return 2 * nvars; }
  int total_degree() const { return std::max(f.u.total_degree(), f.v.total_degree()); }

  Perplex eval(const std::vector<double>& x) const { return f.eval(x); }
  /// (u, v) partials with respect to real variable `var`.
  PolyPair partial(int var) const { return f.derivative(var); }
  /// 2 x 2n real Jacobian at x.
  Eigen::MatrixXd jacobian(const std::vector<double>& x) const;

  friend bool operator==(const PolyMap&, const PolyMap&) = default;
};

/// Pointwise algebra product of two polynomial pairs, as a polynomial pair.
PolyPair star(const PerplexAlgebra& alg, const PolyPair& l, const PolyPair& r);
/// c * (u, v) for a constant element c; this is L_c applied to (u, v).
PolyPair star(const PerplexAlgebra& alg, const Perplex& c, const PolyPair& r);
PolyPair constant_pair(int nvars, const Perplex& c);

/// Flattens a list of perplex points into real coordinates x11, x12, ...
std::vector<double> flatten(const std::vector<Perplex>& p);

}  // namespace perplex
