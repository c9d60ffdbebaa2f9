#include "perplex/approximation.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "detail/newton.hpp"
#include "perplex/random.hpp"

namespace perplex {

namespace {

constexpr int kStarts = 32;
constexpr int kNewtonIters = 50;
constexpr double kNewtonTol = 1e-12;
/// Lower bound on |(i)| and |(ii)| for params normalised to max |entry| = 1.
constexpr double kOpenMargin = 1e-6;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

AlgebraParams normalised(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  for (double v : b) m = std::max(m, std::abs(v));
  AlgebraParams p{a, b};
  for (double& v : p.a) v /= m;
  for (double& v : p.b) v /= m;
  return p;
}

bool clears_open_conditions(const AlgebraParams& p) {
  const auto [a1, a2, a3] = p.a;
  const auto [b1, b2, b3] = p.b;
  return std::abs(a1 * a3 - a2 * a2) >= kOpenMargin &&
         std::abs(a1 * b2 - a2 * b1) >= kOpenMargin && validate_params(p).valid;
}

Eigen::VectorXd random_unit(CounterRng rng, int dim) {
  Eigen::VectorXd z(dim);
  for (int i = 0; i < dim; ++i) z(i) = rng.normal();
  return z / z.norm();
}

/// Orthonormal basis (as columns) of the plane orthogonal to kappa, or the
/// identity when kappa vanishes.
Eigen::MatrixXd plane_basis(const Eigen::Vector3d& kappa, double tol) {
  if (kappa.norm() <= tol) return Eigen::Matrix3d::Identity();
  const Eigen::Vector3d k = kappa.normalized();
  int axis = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(k(i)) < std::abs(k(axis))) axis = i;
  }
  const Eigen::Vector3d v1 = k.cross(Eigen::Vector3d::Unit(axis)).normalized();
  const Eigen::Vector3d v2 = k.cross(v1).normalized();
  Eigen::MatrixXd basis(3, 2);
  basis << v1, v2;
  return basis;
}

}  // namespace

double spectral_norm(const Mat2& m) {
  return Eigen::JacobiSVD<Mat2>(m).singularValues()(0);
}

LinearFitResult fit_linear(const Mat2& j, std::uint64_t seed) {
  const double p = j(0, 0), r = j(0, 1), q = j(1, 0), s = j(1, 1);
  const double jscale = std::max(1.0, j.cwiseAbs().maxCoeff());
  const double eps = tol::kFit * jscale;
  const bool scalar = std::abs(q) <= eps && std::abs(r) <= eps && std::abs(p - s) <= eps;

  LinearFitResult res;
  if (!scalar && std::abs(q) <= eps) {
    res.proven = true;
    res.violated = "ii";
    res.certificate =
        "q = 0: the constraint -r a1 + (p - s) a2 = 0 (same for b) forces "
        "a1 b2 - a2 b1 = 0, violating (ii); e1 is an eigenvector of J and hence a zero divisor";
    return res;
  }
  if (!scalar && std::abs(r) <= eps) {
    res.proven = true;
    res.violated = "i";
    res.certificate =
        "r = 0: e2 is an eigenvector of J, so (w - s 1) * e2 = 0 makes e2 a zero divisor and "
        "N(e2) = -(a1 a3 - a2^2) = 0, violating (i)";
    return res;
  }

  const Eigen::MatrixXd basis = plane_basis({-r, p - s, q}, eps);
  const int d = static_cast<int>(basis.cols());

  const detail::System sys = [&](const Eigen::VectorXd& z, Eigen::VectorXd& f,
                                 Eigen::MatrixXd& jac) {
    const Eigen::Vector3d a = basis * z.head(d);
    const Eigen::Vector3d b = basis * z.tail(d);
    f.resize(3);
    f << a(1) * b(1) - a(2) * b(0),
        a(0) * a(2) - a(1) * a(1) + a(1) * b(2) - a(2) * b(1), z.squaredNorm() - 1.0;
    Eigen::RowVector3d g1a(0.0, b(1), -b(0)), g1b(-a(2), a(1), 0.0);
    Eigen::RowVector3d g2a(a(2), -2.0 * a(1) + b(2), a(0) - b(1)), g2b(0.0, -a(2), a(1));
    jac.resize(3, 2 * d);
    jac.row(0) << g1a * basis, g1b * basis;
    jac.row(1) << g2a * basis, g2b * basis;
    jac.row(2) = 2.0 * z.transpose();
  };

  const CounterRng root(seed, 0x1f17);
  for (int k = 0; k < kStarts; ++k) {
    const detail::NewtonResult nr =
        detail::solve_min_norm(sys, random_unit(root.split(k), 2 * d), kNewtonIters, kNewtonTol);
    if (!nr.converged) continue;
    const Eigen::Vector3d a = basis * nr.x.head(d);
    const Eigen::Vector3d b = basis * nr.x.tail(d);
    const AlgebraParams cand = normalised({a(0), a(1), a(2)}, {b(0), b(1), b(2)});
    if (!clears_open_conditions(cand)) continue;
    const PerplexAlgebra alg(cand);
    const Perplex w(Vec2(j * alg.identity().vec()));
    if ((alg.left_mult_matrix(w) - j).cwiseAbs().maxCoeff() > tol::kFit * jscale) continue;
    if (res.start < 0 || nr.residual < res.residual) {
      res.status = LinearFitStatus::Exact;
      res.params = cand;
      res.derivative = w;
      res.residual = nr.residual;
      res.start = k;
    }
  }
  if (res.start < 0) {
    res.certificate = "not found: no Newton start out of " + std::to_string(kStarts) +
                      " reached a valid algebra (not proven impossible)";
  }
  return res;
}

std::vector<LinearApprox> approx_linear_sequence(const Mat2& j, int n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sequence length must be positive");
  std::vector<LinearApprox> out;
  const LinearFitResult direct = fit_linear(j, seed);
  if (direct.status == LinearFitStatus::Exact) {
    for (int k = 1; k <= n; ++k) out.push_back({j, direct.params, 0.0});
    return out;
  }
  Mat2 g;
  g << 0.0, 0.7548776662466927, 0.5698402909980532, 0.0;
  g *= std::max(1.0, spectral_norm(j));
  for (int k = 1; k <= n; ++k) {
    const double theta = 1.0 / k;
    Mat2 rot;
    rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    Mat2 jk = rot * j * rot.transpose();
    LinearFitResult fit = fit_linear(jk, seed);
    if (fit.status != LinearFitStatus::Exact) {
      jk = j + theta * g;
      fit = fit_linear(jk, seed);
    }
    if (fit.status != LinearFitStatus::Exact) {
      throw FitFailed("approx_linear_sequence: member " + std::to_string(k) +
                      " has no exact fit after rotation and additive perturbation (" +
                      fit.certificate + ")");
    }
    out.push_back({jk, fit.params, spectral_norm(jk - j)});
  }
  return out;
}

QuadFitResult quad_t_matrix(const PolyMap& m, double tol) {
  if (m.nvars != 1) throw InvalidArgument("quad_t_matrix needs a one-variable map");
  if (m.total_degree() > 2) throw InvalidArgument("quad_t_matrix needs total degree <= 2");
  const PolyPair d1 = m.partial(0);
  const PolyPair d2 = m.partial(1);
  Eigen::Matrix<double, 2, 3> mk, nk;
  const Exponent exps[3] = {{0, 0}, {1, 0}, {0, 1}};
  for (int k = 0; k < 3; ++k) {
    mk.col(k) << d1.u.coeff(exps[k]), d1.v.coeff(exps[k]);
    nk.col(k) << d2.u.coeff(exps[k]), d2.v.coeff(exps[k]);
  }
  const Eigen::Matrix<double, 3, 2> lhs = mk.transpose();
  const Eigen::Matrix<double, 3, 2> rhs = nk.transpose();
  QuadFitResult res;
  res.t = Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<double, 3, 2>>(lhs)
              .solve(rhs)
              .transpose();
  res.residual = (res.t * mk - nk).cwiseAbs().maxCoeff();
  res.threshold = tol * std::max(1.0, m.f.max_abs_coeff());
  res.status = res.residual <= res.threshold ? QuadFitStatus::Exact : QuadFitStatus::Inconsistent;
  return res;
}

AlgebraParams params_from_t(const Mat2& t, std::uint64_t seed) {
  const double tscale = std::max(1.0, t.cwiseAbs().maxCoeff());
  const double eps = tol::kFit * tscale;
  if (std::abs(t(0, 0)) > eps || std::abs(t(1, 0) - 1.0) > eps) {
    throw FitFailed("proven infeasible: A and B share a2, b2, which forces T e1 = e2, but T e1 = (" +
                    fmt(t(0, 0)) + ", " + fmt(t(1, 0)) + ")");
  }
  if (std::abs(t(0, 1)) <= eps) {
    throw FitFailed(
        "proven infeasible: T12 = 0 makes e2 an eigenvector of L_j, so e2 is a zero divisor "
        "and a1 a3 - a2^2 = 0, violating (i)");
  }

  const double t00 = t(0, 0), t01 = t(0, 1), t10 = t(1, 0), t11 = t(1, 1);
  const detail::System sys = [&](const Eigen::VectorXd& y, Eigen::VectorXd& f,
                                 Eigen::MatrixXd& jac) {
    const double a1 = y(0), a2 = y(1), b1 = y(2), b2 = y(3);
    const double a3 = a1 * t01 + a2 * t11;
    const double b3 = b1 * t01 + b2 * t11;
    f.resize(5);
    f << a1 * t00 + a2 * t10 - a2, b1 * t00 + b2 * t10 - b2, a2 * b2 - a3 * b1,
        a1 * a3 - a2 * a2 + a2 * b3 - a3 * b2, y.squaredNorm() - 1.0;
    jac.resize(5, 4);
    jac << t00, t10 - 1.0, 0.0, 0.0,
        0.0, 0.0, t00, t10 - 1.0,
        -t01 * b1, b2 - t11 * b1, -a3, a2,
        a3 + a1 * t01 - t01 * b2, a1 * t11 - 2.0 * a2 + b3 - t11 * b2, a2 * t01, a2 * t11 - a3,
        2.0 * y.transpose();
  };

  const CounterRng root(seed, 0x7a7);
  std::optional<AlgebraParams> best;
  double best_residual = 0.0;
  for (int k = 0; k < kStarts; ++k) {
    const detail::NewtonResult nr =
        detail::solve_min_norm(sys, random_unit(root.split(k), 4), kNewtonIters, kNewtonTol);
    if (!nr.converged) continue;
    const double a1 = nr.x(0), a2 = nr.x(1), b1 = nr.x(2), b2 = nr.x(3);
    const AlgebraParams cand =
        normalised({a1, a2, a1 * t01 + a2 * t11}, {b1, b2, b1 * t01 + b2 * t11});
    if (!clears_open_conditions(cand)) continue;
    Mat2 a_gcr, b_gcr;
    a_gcr << cand.a[1], cand.a[2], cand.b[1], cand.b[2];
    b_gcr << cand.a[0], cand.a[1], cand.b[0], cand.b[1];
    if ((b_gcr.inverse() * a_gcr - t).cwiseAbs().maxCoeff() > eps) continue;
    if (!best || nr.residual < best_residual) {
      best = cand;
      best_residual = nr.residual;
    }
  }
  if (!best) {
    throw FitFailed("not found: no Newton start out of " + std::to_string(kStarts) +
                    " produced a valid algebra for T (not proven impossible)");
  }
  return *best;
}

QuadFitResult fit_quadratic(const PolyMap& m, std::uint64_t seed, double tol) {
  QuadFitResult res = quad_t_matrix(m, tol);
  if (res.status != QuadFitStatus::Exact) return res;
  try {
    res.params = params_from_t(res.t, seed);
  } catch (const FitFailed& e) {
    res.params_error = e.what();
  }
  return res;
}

QuadApprox approx_quadratic(const PolyMap& g, double eps, double tol) {
  if (!(eps != 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be finite and nonzero");
  const QuadFitResult direct = quad_t_matrix(g, tol);
  if (direct.status == QuadFitStatus::Exact) return {g, 0.0, direct.t};

  const double scale = std::max(1.0, g.f.max_abs_coeff());
  const double band = tol * scale;
  auto co = [](const RealPoly& p, int i, int j) { return p.coeff({i, j}); };

  RealPoly u = g.u();
  RealPoly v = g.v();
  RealPoly diag_u(2), diag_v(2);
  diag_u.add_term({2, 0}, 1.0);
  diag_v.add_term({0, 2}, 1.0);
  if ((u - diag_u).max_abs_coeff() <= band && (v - diag_v).max_abs_coeff() <= band) {
    u.add_term({1, 1}, eps);
    v.add_term({2, 0}, eps);
  } else {
    // d1 = m0 + m1 x1 + m2 x2 with m0 = (u10, v10), m1 = 2 (u20, v20).
    Vec2 m0(co(u, 1, 0), co(v, 1, 0));
    Vec2 m1(2.0 * co(u, 2, 0), 2.0 * co(v, 2, 0));
    if (m1.lpNorm<Eigen::Infinity>() <= band) {
      u.add_term({2, 0}, eps / 2.0);
      m1(0) += eps;
    }
    Mat2 mm;
    mm << m0, m1;
    if (std::abs(mm.determinant()) <= band * scale) {
      const Vec2 perp = Vec2(-m1(1), m1(0)).normalized();
      u.add_term({1, 0}, eps * perp(0));
      v.add_term({1, 0}, eps * perp(1));
      m0 += eps * perp;
      mm << m0, m1;
    }
    // n0 = (u01, v01) and n1 = m2 = (u11, v11); T m2 must equal n2 = 2 (u02, v02).
    Mat2 nn;
    nn << co(u, 0, 1), co(u, 1, 1), co(v, 0, 1), co(v, 1, 1);
    const Mat2 t = nn * mm.inverse();
    const Vec2 n2 = t * Vec2(co(u, 1, 1), co(v, 1, 1));
    u.add_term({0, 2}, n2(0) / 2.0 - co(u, 0, 2));
    v.add_term({0, 2}, n2(1) / 2.0 - co(v, 0, 2));
  }

  QuadApprox out;
  out.map = PolyMap(1, u, v);
  out.distance = std::max((u - g.u()).max_abs_coeff(), (v - g.v()).max_abs_coeff());
  const QuadFitResult fit = quad_t_matrix(out.map, tol);
  if (fit.status != QuadFitStatus::Exact) {
    throw FitFailed("approx_quadratic: perturbed map still inconsistent, residual " +
                    fmt(fit.residual));
  }
  out.t = fit.t;
  return out;
}

}  // namespace perplex
