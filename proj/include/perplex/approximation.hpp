#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "perplex/algebra.hpp"
#include "perplex/real_poly.hpp"

namespace perplex {

enum class LinearFitStatus { Exact, Infeasible };

struct LinearFitResult {
  LinearFitStatus status = LinearFitStatus::Infeasible;
  /// Valid params with L_w = J (Exact only).
  AlgebraParams params;
  Perplex derivative;
  /// Why no algebra was found (Infeasible only).
  std::string certificate;
  /// True when the certificate is a proof rather than a failed search.
  bool proven = false;
  /// Condition the obstruction violates: "i", "ii" or empty.
  std::string violated;
  /// Newton residual of the selected start and its index.
  double residual = 0.0;
  int start = -1;
};

/// Finds (a, b) in which the linear map x -> J x is multiplication by some w.
///
/// The GCR equation for a linear map is the covector condition
/// -r a1 + (p - s) a2 + q a3 = 0 (same for b) with J = [[p, r], [q, s]].
/// Off-diagonal zeros are decided symbolically: q = 0 forces detA = 0 and
/// r = 0 forces a1 a3 - a2^2 = 0. Otherwise Newton runs from 32 seeded starts
/// on the constraint planes with (iii), (iv) and a unit normalisation, and
/// the lowest-residual start that clears the open conditions wins.
LinearFitResult fit_linear(const Mat2& j, std::uint64_t seed = 0);

struct LinearApprox {
  Mat2 jk;
  AlgebraParams params;
  /// Spectral norm ||J_k - J||.
  double distance = 0.0;
};

/// J_k -> J with every J_k exactly fitted: J itself when it fits, otherwise
/// J conjugated by the rotation through 1/k, falling back to J + G/k for a
/// fixed generic G. Throws FitFailed when neither fits.
std::vector<LinearApprox> approx_linear_sequence(const Mat2& j, int n, std::uint64_t seed = 0);

enum class QuadFitStatus { Exact, Inconsistent };

struct QuadFitResult {
  QuadFitStatus status = QuadFitStatus::Inconsistent;
  /// Least-squares solution of n_k = T m_k.
  Mat2 t = Mat2::Zero();
  /// max_k ||T m_k - n_k||_inf.
  double residual = 0.0;
  double threshold = 0.0;
  /// Algebra realising T, when the caller asked for it and one was found.
  std::optional<AlgebraParams> params;
  std::string params_error;
};

/// Coefficients of the partials d1 = m0 + m1 x1 + m2 x2 and
/// d2 = n0 + n1 x1 + n2 x2 of a map of degree <= 2, solved for T by least
/// squares. Exact iff the residual is within tol * max(1, max |coefficient|).
QuadFitResult quad_t_matrix(const PolyMap& m, double tol = tol::kFit);

/// An algebra with B^-1 A = T, A = [[a2,a3],[b2,b3]], B = [[a1,a2],[b1,b2]].
///
/// Since A and B share a2, b2, any solution satisfies T e1 = e2; a T that
/// fails this, or has T12 = 0 (e2 would be a zero divisor), is rejected
/// with a proof. Otherwise Newton searches for B from 32 seeded starts.
/// Throws FitFailed.
AlgebraParams params_from_t(const Mat2& t, std::uint64_t seed = 0);

/// quad_t_matrix followed by params_from_t when the T stage is Exact.
QuadFitResult fit_quadratic(const PolyMap& m, std::uint64_t seed = 0, double tol = tol::kFit);

struct QuadApprox {
  PolyMap map;
  /// Max coefficient change relative to the input.
  double distance = 0.0;
  Mat2 t = Mat2::Zero();
};

/// A nearby degree-2 map whose T stage is Exact. (x1^2, x2^2) gets
/// (x1^2 + eps x1 x2, eps x1^2 + x2^2); in general m0, m1 are made
/// independent by eps-sized changes, T is read off from them, and the x2^2
/// coefficients are reset to n2 = T m2. Throws FitFailed.
QuadApprox approx_quadratic(const PolyMap& g, double eps, double tol = tol::kFit);

/// 2x2 spectral norm.
double spectral_norm(const Mat2& m);

}  // namespace perplex
