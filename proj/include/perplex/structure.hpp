#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perplex/algebra.hpp"

namespace perplex {

enum class AlgebraKind { Field, Hyperbolic, Degenerate };

std::string to_string(AlgebraKind kind);
AlgebraKind algebra_kind_from_string(const std::string& name);

/// Classification of a perplex algebra together with the data used to reach
/// it: j = e2 * e1^-1, its multiplication matrix L_j = B A^-1 and the
/// characteristic polynomial lambda^2 - trace lambda + det.
struct Classification {
  double delta = 0.0;
  /// |delta| <= band is Degenerate. band = tol * scale^4.
  double band = 0.0;
  AlgebraKind kind = AlgebraKind::Field;
  Perplex j;
  Mat2 lj = Mat2::Zero();
  double trace = 0.0;
  double det = 0.0;
  /// Linear isomorphism onto the canonical model (C, R+R or dual numbers).
  Mat2 iso = Mat2::Identity();
  /// Max homomorphism defect of `iso` over the sampled pairs.
  double iso_residual = 0.0;

  double char_poly_discriminant() const { return trace * trace - 4.0 * det; }
};

double discriminant(const PerplexAlgebra& alg);

/// Throws DegenerateParams if detA is within tolerance of zero, and
/// IllConditioned if the model basis cannot be normalised.
Classification classify(const PerplexAlgebra& alg, double tol = tol::kEq);

/// Product of the canonical model: complex, componentwise, or dual numbers.
Perplex model_mul(AlgebraKind kind, const Perplex& x, const Perplex& y);
Perplex model_identity(AlgebraKind kind);

/// Matrix phi mapping the algebra onto its model:
///   Field       1 -> (1,0), jhat -> (0,1) with jhat^2 = -1
///   Hyperbolic  eps+ -> (1,0), eps- -> (0,1), the two idempotents
///   Degenerate  1 -> (1,0), n -> (0,1) with n nilpotent, ||n||_m = 1
Mat2 iso_to_model(const Classification& cls, const PerplexAlgebra& alg);

/// max over `pairs` random pairs in [-1,1]^2 of
/// ||phi(x*y) - phi(x) phi(y)||, together with ||phi(1) - model 1||.
double iso_residual(const Mat2& iso, AlgebraKind kind, const PerplexAlgebra& alg,
                    int pairs = 100, std::uint64_t seed = 0);

/// Unit-length directions d with d*d = 0: common real roots t of
/// q_a(t) = a1 + 2 a2 t + a3 t^2 and q_b(t) = b1 + 2 b2 t + b3 t^2, mapped to
/// (1, t), plus (0, 1) when a3 = b3 = 0. Empty iff the algebra is reduced.
std::vector<Perplex> nilpotent_directions(const PerplexAlgebra& alg, double tol = tol::kEq);

}  // namespace perplex
