#pragma once

#include <functional>
#include <vector>

#include "perplex/algebra.hpp"
#include "perplex/real_poly.hpp"

namespace perplex {

/// a_0 + a_1 * x + ... + a_d * x^d with coefficients in the algebra.
struct PerplexPoly {
  std::vector<Perplex> coeffs;

  /// Degree after dropping trailing coefficients with ||a_k||_m <= tol;
  /// -1 for the zero polynomial.
  int degree(double tol = 0.0) const;
  PerplexPoly trimmed(double tol) const;
};

Perplex poly_eval(const PerplexPoly& f, const Perplex& x, const PerplexAlgebra& alg);
PerplexPoly poly_derivative(const PerplexPoly& f);
PerplexPoly poly_add(const PerplexPoly& f, const PerplexPoly& g);
PerplexPoly poly_mul(const PerplexPoly& f, const PerplexPoly& g, const PerplexAlgebra& alg);

/// Real coordinate form (u, v) of f, a PolyMap with nvars = 1.
PolyMap expand(const PerplexPoly& f, const PerplexAlgebra& alg);

using PlaneMap = std::function<Perplex(const Perplex&)>;

struct DiffQuotientOptions {
  int max_steps = 40;
  double stop_increment = 1e-12;
  /// Lower bound c on separation_margin(direction).
  double min_margin = 0.1;
};

/// Outcome of a difference-quotient ladder h_n = 2^-n * direction.
struct DiffQuotientReport {
  /// Richardson-corrected value at the last step before stopping.
  Perplex estimate;
  /// Raw quotient at the final step taken.
  Perplex last;
  /// Increment between the estimate and the corrected value before it.
  double increment = 0.0;
  int steps = 0;
  bool converged = false;
};

/// (f(x + h_n) - f(x)) * h_n^-1 along the ladder. The raw quotients have an
/// O(h) bias, so each pair of neighbours is combined as 2 D_n - D_(n-1); the
/// ladder stops once the combined values move by less than stop_increment,
/// or when the increments stop shrinking at a level where rounding dominates.
/// Throws NotSeparated if the direction's margin is below min_margin.
DiffQuotientReport diff_quotient(const PlaneMap& f, const Perplex& x, const PerplexAlgebra& alg,
                                 const Perplex& direction,
                                 const DiffQuotientOptions& opts = {});

/// Up to `count` unit directions with separation margin >= min_margin, evenly
/// spread over the separated arcs of a sweep of 64 * count angles.
std::vector<Perplex> separated_directions(const PerplexAlgebra& alg, int count = 16,
                                          double min_margin = 0.1);

struct DirectionScan {
  std::vector<Perplex> directions;
  std::vector<DiffQuotientReport> reports;
  /// Largest ||estimate_i - estimate_j|| over all pairs, with the pair.
  double spread = 0.0;
  int first = -1;
  int second = -1;
};

/// Difference quotients along every separated direction; a spread well above
/// the ladder accuracy refutes differentiability at x.
DirectionScan scan_directions(const PlaneMap& f, const Perplex& x, const PerplexAlgebra& alg,
                              int count = 16, double min_margin = 0.1);

struct GcrResidual {
  /// e2 * d/dx_i1 - e1 * d/dx_i2 for each perplex variable i.
  std::vector<PolyPair> residual;
  double max_abs = 0.0;
  double threshold = 0.0;
  bool zero = true;
};

/// Symbolic GCR residual [[a2,a3],[b2,b3]] d1 - [[a1,a2],[b1,b2]] d2 of every
/// variable pair. Zero means every coefficient is within
/// tol * scale * max(1, max coefficient of m).
GcrResidual gcr_residual(const PolyMap& m, const PerplexAlgebra& alg, double tol = tol::kEq);

/// e1^-1 * d1(x), cross-checked against e2^-1 * d2(x); GcrViolated if they
/// differ beyond tolerance. nvars must be 1.
Perplex derivative_from_partials(const PolyMap& m, const PerplexAlgebra& alg, const Perplex& x,
                                 double tol = tol::kEq);

/// f' = e1^-1 * d1 as a polynomial pair. Throws GcrViolated for maps with a
/// nonzero residual.
PolyPair derivative_map(const PolyMap& m, const PerplexAlgebra& alg, double tol = tol::kEq);

struct CriticalLocus {
  /// N(f'(x1, x2)); its zero set is the critical set.
  RealPoly norm_poly;
  /// Points on the zero set found on the sampling grid.
  std::vector<Perplex> samples;
};

/// Critical set of a perplex-differentiable map. Samples are grid nodes with
/// |N(f')| within tolerance plus bisected sign changes along grid edges over
/// [-radius, radius]^2.
CriticalLocus critical_locus(const PolyMap& m, const PerplexAlgebra& alg, int grid_res = 101,
                             double radius = 1.0, double tol = tol::kEq);

}  // namespace perplex
