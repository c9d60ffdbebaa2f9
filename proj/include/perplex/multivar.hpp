#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "perplex/algebra.hpp"
#include "perplex/real_poly.hpp"

namespace perplex {

struct PerplexTerm {
  Exponent exp;
  Perplex c;
};

/// Polynomial in n perplex variables p_1..p_n with algebra coefficients.
struct PerplexPolyN {
  int nvars = 1;
  std::vector<PerplexTerm> terms;

  /// Merges equal exponents and drops zero coefficients; terms sorted.
  PerplexPolyN normalised() const;
};

using PerplexPoint = std::vector<Perplex>;

Perplex eval(const PerplexPolyN& f, const PerplexPoint& p, const PerplexAlgebra& alg);

/// Formal derivative in variable i (0-based): e_i c p^(e - E_i).
PerplexPolyN partial_derivative(const PerplexPolyN& f, int i);

std::vector<Perplex> gradient(const PerplexPolyN& f, const PerplexPoint& p,
                              const PerplexAlgebra& alg);

/// sum_i w_i * df/dp_i(p).
Perplex directional_derivative(const PerplexPolyN& f, const PerplexPoint& p,
                               const std::vector<Perplex>& w, const PerplexAlgebra& alg);

/// Real coordinate form of f, a PolyMap over 2n real variables.
PolyMap expand(const PerplexPolyN& f, const PerplexAlgebra& alg);

/// [L_{g_1} | ... | L_{g_n}] with g_i = df/dp_i(p), the 2 x 2n real Jacobian.
Eigen::MatrixXd real_jacobian(const PerplexPolyN& f, const PerplexPoint& p,
                              const PerplexAlgebra& alg);

struct CriticalReport {
  bool critical = false;
  int rank = 0;
  std::vector<double> singular_values;
  /// |N(df/dp_i(p))| for each i.
  std::vector<double> partial_norms;
};

/// Rank of the real Jacobian by singular-value thresholding at
/// tol * scale * max(1, sigma_max); critical iff rank < 2.
CriticalReport is_critical(const PerplexPolyN& f, const PerplexPoint& p,
                           const PerplexAlgebra& alg, double tol = tol::kEq);

/// ||x||_m over every real coordinate of every component.
double max_norm(const std::vector<Perplex>& v);

struct LojaBin {
  double log_f = 0.0;
  double min_log_grad = 0.0;
  int count = 0;
};

struct LojaFit {
  double theta_hat = 0.0;
  double c_hat = 0.0;
  /// Non-empty bins only; log_f is that of the bin's minimising sample.
  std::vector<LojaBin> bins;
  /// Samples with ||grad f||_m < c_hat ||f||_m^theta_hat.
  int violations = 0;
  /// Usable samples (0 < ||f||_m < 1).
  int sample_count = 0;
  int drawn = 0;
  bool degenerate_algebra = false;
  std::vector<std::string> warnings;
};

struct LojaOptions {
  double r_min = 1e-4;
  double r_max = 1e-1;
  int samples = 10000;
  int bins = 20;
};

/// Empirical Lojasiewicz exponent near the zero f(0) = 0.
///
/// Sample k uses its own child stream of the seeded generator, so results do
/// not depend on evaluation order. Radii are log-uniform in [r_min, r_max],
/// directions uniform on the unit sphere of R^{2n}. The fitted line runs
/// through the per-bin minima of log ||grad f||_m against log ||f||_m.
/// Throws InvalidArgument if f(0) != 0 and InsufficientSamples below 100
/// usable samples.
LojaFit loja_scan(const PerplexPolyN& f, const PerplexAlgebra& alg, const LojaOptions& opts,
                  std::uint64_t seed);

/// Samples from a fresh draw violating ||grad f||_m >= c ||f||_m^theta.
int loja_violations(const PerplexPolyN& f, const PerplexAlgebra& alg, const LojaOptions& opts,
                    std::uint64_t seed, double theta, double c);

}  // namespace perplex
