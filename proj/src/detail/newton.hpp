#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace perplex::detail {

/// Residual F(x) and its Jacobian, written into the out-parameters.
using System = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)>;

struct NewtonResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Gauss-Newton with minimum-norm steps, so square, under- and
/// overdetermined systems all take the least-squares step of smallest
/// length. Stops when ||F||_inf <= tol or after max_iter steps.
inline NewtonResult solve_min_norm(const System& sys, Eigen::VectorXd x, int max_iter,
                                   double tol) {
  Eigen::VectorXd f;
  Eigen::MatrixXd jac;
  NewtonResult r;
  for (int it = 0;; ++it) {
    sys(x, f, jac);
    r.residual = f.lpNorm<Eigen::Infinity>();
    r.iterations = it;
    if (!std::isfinite(r.residual)) break;
    if (r.residual <= tol) {
      r.converged = true;
      break;
    }
    if (it == max_iter) break;
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-f);
    if (!step.allFinite()) break;
    x += step;
  }
  r.x = x;
  return r;
}

}  // namespace perplex::detail
