#include "perplex/fibration.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "detail/newton.hpp"
#include "perplex/random.hpp"

namespace perplex {

namespace {

constexpr double kFiberResidual = 1e-10;
constexpr double kDedupe = 1e-6;
constexpr int kNewtonSteps = 50;
constexpr int kMaxProjectionSeeds = 4096;

using Complex = std::complex<double>;

Classification require_nondegenerate(const PerplexAlgebra& alg) {
  const Classification cls = classify(alg);
  if (cls.kind == AlgebraKind::Degenerate) {
    throw DegenerateAlgebra("fibration results need a nondegenerate algebra (delta = " +
                            std::to_string(cls.delta) + ")");
  }
  return cls;
}

Perplex eval1(const PerplexPolyN& f, const Perplex& x, const PerplexAlgebra& alg) {
  return eval(f, PerplexPoint{x}, alg);
}

/// Roots of c_0 + c_1 t + ... + c_d t^d from the companion matrix.
std::vector<Complex> poly_roots(std::vector<Complex> c) {
  double mx = 0.0;
  for (const auto& v : c) mx = std::max(mx, std::abs(v));
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * mx) c.pop_back();
  const int d = static_cast<int>(c.size()) - 1;
  if (d < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  std::vector<Complex> roots(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  return roots;
}

/// Real roots (imaginary part within 1e-6 relative), sorted and merged.
std::vector<double> real_roots(const std::vector<double>& coeffs) {
  std::vector<Complex> c(coeffs.begin(), coeffs.end());
  std::vector<double> out;
  for (const auto& z : poly_roots(c)) {
    if (std::abs(z.imag()) <= 1e-6 * std::max(1.0, std::abs(z))) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  std::vector<double> merged;
  for (double r : out) {
    if (merged.empty() || r - merged.back() > kDedupe) merged.push_back(r);
  }
  return merged;
}

std::vector<Perplex> one_variable_coeffs(const PerplexPolyN& f) {
  std::vector<Perplex> c;
  for (const auto& t : f.terms) {
    const int k = t.exp[0];
    if (static_cast<int>(c.size()) <= k) c.resize(k + 1);
    c[k] += t.c;
  }
  return c;
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

/// Discriminant samples of a one-variable f with ||c|| <= radius.
std::vector<Perplex> discriminant_one_var(const PerplexPolyN& f, const PerplexAlgebra& alg,
                                          const Classification& cls, double epsilon,
                                          double radius, double cell) {
  const std::vector<Perplex> coeffs = one_variable_coeffs(f);
  std::vector<Vec2> model;
  for (const auto& c : coeffs) model.push_back(cls.iso * c.vec());
  const Mat2 back = cls.iso.inverse();
  std::vector<Perplex> out;
  auto keep = [&](const Perplex& x) {
    if (norm_euclid(x) > epsilon) return;
    const Perplex c = eval1(f, x, alg);
    if (norm_euclid(c) <= radius) out.push_back(c);
  };

  if (cls.kind == AlgebraKind::Field) {
    std::vector<Complex> deriv;
    for (std::size_t k = 1; k < model.size(); ++k) {
      deriv.push_back(static_cast<double>(k) * Complex(model[k](0), model[k](1)));
    }
    bool constant = true;
    for (const auto& d : deriv) constant = constant && d == Complex(0.0, 0.0);
    if (constant) {
      keep({0.0, 0.0});
      return out;
    }
    for (const auto& z : poly_roots(deriv)) keep(Perplex(Vec2(back * Vec2(z.real(), z.imag()))));
    return out;
  }

  // Hyperbolic: f = (F+(y+), F-(y-)) in idempotent coordinates.
  for (int comp = 0; comp < 2; ++comp) {
    std::vector<double> deriv;
    for (std::size_t k = 1; k < model.size(); ++k) {
      deriv.push_back(static_cast<double>(k) * model[k](comp));
    }
    std::vector<double> roots = all_zero(deriv) ? std::vector<double>{0.0} : real_roots(deriv);
    const Vec2 u = back.col(comp);
    const Vec2 v = back.col(1 - comp);
    for (double r : roots) {
      // ||u r + v t||^2 <= eps^2 is a quadratic inequality in t.
      const double qa = v.squaredNorm();
      const double qb = 2.0 * r * u.dot(v);
      const double qc = r * r * u.squaredNorm() - epsilon * epsilon;
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc < 0.0) continue;
      const double t_lo = (-qb - std::sqrt(disc)) / (2.0 * qa);
      const double t_hi = (-qb + std::sqrt(disc)) / (2.0 * qa);
      auto point = [&](double t) { return Perplex(Vec2(u * r + v * t)); };
      auto image = [&](double t) { return eval1(f, point(t), alg); };

      auto push = [&](const Perplex& c) {
        if (norm_euclid(c) <= radius) out.push_back(c);
      };
      auto refine = [&](auto&& self, double ta, const Perplex& ca, double tb, const Perplex& cb,
                        int depth) -> void {
        const double gap = norm_euclid(ca - cb);
        if (gap <= 0.5 * cell || depth >= 40) return;
        if (std::min(norm_euclid(ca), norm_euclid(cb)) - gap > radius) return;
        const double tm = 0.5 * (ta + tb);
        const Perplex cm = image(tm);
        push(cm);
        self(self, ta, ca, tm, cm, depth + 1);
        self(self, tm, cm, tb, cb, depth + 1);
      };
      constexpr int kSegments = 2048;
      double t_prev = t_lo;
      Perplex c_prev = image(t_lo);
      push(c_prev);
      for (int s = 1; s <= kSegments; ++s) {
        const double t = t_lo + (t_hi - t_lo) * s / kSegments;
        const Perplex c = image(t);
        push(c);
        refine(refine, t_prev, c_prev, t, c, 0);
        t_prev = t;
        c_prev = c;
      }
    }
  }
  return out;
}

PerplexPoint random_ball_point(CounterRng rng, int nvars, double epsilon) {
  std::vector<double> dir(2 * nvars);
  double len = 0.0;
  do {
    len = 0.0;
    for (double& d : dir) {
      d = rng.normal();
      len += d * d;
    }
  } while (len == 0.0);
  const double r = epsilon * std::pow(rng.uniform(), 1.0 / (2 * nvars)) / std::sqrt(len);
  PerplexPoint p(nvars);
  for (int i = 0; i < nvars; ++i) p[i] = {r * dir[2 * i], r * dir[2 * i + 1]};
  return p;
}

PerplexPoint unflatten(const Eigen::VectorXd& x) {
  PerplexPoint p(x.size() / 2);
  for (Eigen::Index i = 0; i < x.size() / 2; ++i) p[i] = {x(2 * i), x(2 * i + 1)};
  return p;
}

Eigen::VectorXd flatten_point(const PerplexPoint& p) {
  Eigen::VectorXd x(2 * p.size());
  for (std::size_t i = 0; i < p.size(); ++i) x.segment<2>(2 * i) = p[i].vec();
  return x;
}

/// Discriminant samples for n >= 2 by projection onto the critical set.
std::vector<Perplex> discriminant_multi(const PerplexPolyN& f, const PerplexAlgebra& alg,
                                        const Classification& cls, double epsilon,
                                        double radius, int seeds) {
  const int n = f.nvars;
  std::vector<PerplexPolyN> first;
  std::vector<std::vector<PerplexPolyN>> second(n);
  for (int i = 0; i < n; ++i) {
    first.push_back(partial_derivative(f, i));
    for (int k = 0; k < n; ++k) second[i].push_back(partial_derivative(first[i], k));
  }
  double coeff = 1.0;
  for (const auto& t : f.terms) coeff = std::max(coeff, norm_max(t.c));

  // Field: every partial vanishes. Hyperbolic: one idempotent component of
  // every partial vanishes, giving two branches.
  std::vector<Eigen::MatrixXd> projections;
  if (cls.kind == AlgebraKind::Field) {
    projections.push_back(Eigen::Matrix2d::Identity());
  } else {
    projections.push_back(cls.iso.row(0));
    projections.push_back(cls.iso.row(1));
  }

  std::vector<Perplex> out;
  const CounterRng root(0x0d15c, 0x5eed);
  for (std::size_t b = 0; b < projections.size(); ++b) {
    const Eigen::MatrixXd& proj = projections[b];
    const int rows = static_cast<int>(proj.rows());
    const detail::System sys = [&](const Eigen::VectorXd& x, Eigen::VectorXd& fv,
                                   Eigen::MatrixXd& jac) {
      const PerplexPoint p = unflatten(x);
      fv.resize(rows * n);
      jac.resize(rows * n, 2 * n);
      for (int i = 0; i < n; ++i) {
        fv.segment(rows * i, rows) = proj * eval(first[i], p, alg).vec();
        for (int k = 0; k < n; ++k) {
          jac.block(rows * i, 2 * k, rows, 2) =
              proj * alg.left_mult_matrix(eval(second[i][k], p, alg));
        }
      }
    };
    const CounterRng branch = root.split(b);
    for (int s = 0; s < seeds; ++s) {
      const PerplexPoint p0 = random_ball_point(branch.split(s), n, epsilon);
      const detail::NewtonResult nr =
          detail::solve_min_norm(sys, flatten_point(p0), kNewtonSteps, 1e-12 * coeff);
      if (!nr.converged || nr.x.norm() > epsilon) continue;
      const Perplex c = eval(f, unflatten(nr.x), alg);
      if (norm_euclid(c) <= radius) out.push_back(c);
    }
  }
  return out;
}

std::vector<Perplex> discriminant_samples(const PerplexPolyN& f, const PerplexAlgebra& alg,
                                          const Classification& cls, double epsilon,
                                          double radius, double cell, int grid_res) {
  if (f.nvars == 1) return discriminant_one_var(f, alg, cls, epsilon, radius, cell);
  return discriminant_multi(f, alg, cls, epsilon, radius,
                            std::min(grid_res * grid_res, kMaxProjectionSeeds));
}

}  // namespace

std::vector<Perplex> critical_values(const PerplexPolyN& f, const PerplexAlgebra& alg,
                                     double epsilon, double eta, int grid_res) {
  if (!(epsilon > 0.0 && eta > 0.0) || grid_res < 2) {
    throw InvalidArgument("critical_values needs epsilon, eta > 0 and grid_res >= 2");
  }
  const Classification cls = require_nondegenerate(alg);
  return discriminant_samples(f, alg, cls, epsilon, eta, 2.0 * eta / grid_res, grid_res);
}

std::vector<Perplex> fiber_solve(const PerplexPolyN& f, const PerplexAlgebra& alg,
                                 const Perplex& c, double epsilon, int grid_res) {
  if (f.nvars != 1) throw InvalidArgument("fiber_solve needs a one-variable polynomial");
  if (!(epsilon > 0.0) || grid_res < 1) {
    throw InvalidArgument("fiber_solve needs epsilon > 0 and grid_res >= 1");
  }
  const PerplexPolyN fp = partial_derivative(f, 0);
  std::vector<Perplex> sols;
  const double h = 2.0 * epsilon / grid_res;
  for (int i = 0; i < grid_res; ++i) {
    for (int j = 0; j < grid_res; ++j) {
      Perplex x{-epsilon + (i + 0.5) * h, -epsilon + (j + 0.5) * h};
      if (norm_euclid(x) > epsilon) continue;
      for (int it = 0; it < kNewtonSteps; ++it) {
        const Vec2 r = (eval1(f, x, alg) - c).vec();
        const Mat2 jac = alg.left_mult_matrix(eval1(fp, x, alg));
        const Vec2 step = jac.completeOrthogonalDecomposition().solve(-r);
        if (!step.allFinite()) break;
        x += Perplex(step);
        if (step.norm() <= 1e-15 * std::max(1.0, norm_euclid(x))) break;
      }
      if (!std::isfinite(x.x1) || !std::isfinite(x.x2)) continue;
      if (norm_euclid(x) > epsilon * (1.0 + 1e-12)) continue;
      if (norm_euclid(eval1(f, x, alg) - c) > kFiberResidual) continue;
      const bool dup = std::any_of(sols.begin(), sols.end(), [&](const Perplex& s) {
        return norm_euclid(s - x) < kDedupe;
      });
      if (!dup) sols.push_back(x);
    }
  }
  std::sort(sols.begin(), sols.end(), [](const Perplex& a, const Perplex& b) {
    return a.x1 != b.x1 ? a.x1 < b.x1 : a.x2 < b.x2;
  });
  return sols;
}

namespace {

FibrationReport triviality_attempt(const PerplexPolyN& f, const PerplexAlgebra& alg,
                                   const Classification& cls, const TrivialityOptions& opts,
                                   double epsilon, double eta, CounterRng rng) {
  const int g = opts.target_grid;
  const double cell = 2.0 * eta / g;
  FibrationReport rep;
  rep.kind = cls.kind;
  rep.epsilon = epsilon;
  rep.eta = eta;

  const double reach = eta + (opts.mask_radius + 4) * cell;
  const std::vector<Perplex> disc =
      discriminant_samples(f, alg, cls, epsilon, reach, cell, opts.seed_grid);
  for (const auto& c : disc) {
    if (norm_euclid(c) <= eta) rep.discriminant.push_back(c);
  }

  auto centre = [&](int i, int j) {
    return Perplex{-eta + (i + 0.5) * cell, -eta + (j + 0.5) * cell};
  };
  auto idx = [&](int i, int j) { return static_cast<std::size_t>(i) * g + j; };
  std::vector<char> inside(static_cast<std::size_t>(g) * g, 0);
  std::vector<char> masked(static_cast<std::size_t>(g) * g, 0);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) inside[idx(i, j)] = norm_euclid(centre(i, j)) <= eta;
  }
  const double mask_dist = opts.mask_radius * cell;
  for (const auto& s : disc) {
    const int ci = static_cast<int>(std::floor((s.x1 + eta) / cell));
    const int cj = static_cast<int>(std::floor((s.x2 + eta) / cell));
    for (int i = ci - opts.mask_radius - 1; i <= ci + opts.mask_radius + 1; ++i) {
      for (int j = cj - opts.mask_radius - 1; j <= cj + opts.mask_radius + 1; ++j) {
        if (i < 0 || j < 0 || i >= g || j >= g) continue;
        if (norm_euclid(centre(i, j) - s) <= mask_dist) masked[idx(i, j)] = 1;
      }
    }
  }

  // 8-connected flood fill over free cells, seeded in row-major order.
  std::vector<int> label(static_cast<std::size_t>(g) * g, -1);
  std::vector<std::vector<std::pair<int, int>>> comps;
  for (int i0 = 0; i0 < g; ++i0) {
    for (int j0 = 0; j0 < g; ++j0) {
      if (!inside[idx(i0, j0)] || masked[idx(i0, j0)] || label[idx(i0, j0)] >= 0) continue;
      const int id = static_cast<int>(comps.size());
      comps.emplace_back();
      std::vector<std::pair<int, int>> stack{{i0, j0}};
      label[idx(i0, j0)] = id;
      while (!stack.empty()) {
        const auto [i, j] = stack.back();
        stack.pop_back();
        comps[id].push_back({i, j});
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            const int ni = i + di, nj = j + dj;
            if (ni < 0 || nj < 0 || ni >= g || nj >= g) continue;
            const std::size_t k = idx(ni, nj);
            if (!inside[k] || masked[k] || label[k] >= 0) continue;
            label[k] = id;
            stack.push_back({ni, nj});
          }
        }
      }
      std::sort(comps[id].begin(), comps[id].end());
    }
  }

  auto near_discriminant = [&](const Perplex& c) {
    return std::any_of(disc.begin(), disc.end(),
                       [&](const Perplex& s) { return norm_euclid(s - c) <= 3.0 * cell; });
  };

  if (comps.empty()) throw MaskTooCoarse("the discriminant mask covers the whole disk");

  rep.consistent = true;
  bool all_constant = true;
  for (std::size_t id = 0; id < comps.size(); ++id) {
    auto& cells = comps[id];
    if (static_cast<int>(cells.size()) < opts.probes_per_component) {
      throw MaskTooCoarse("component " + std::to_string(id) + " has " +
                          std::to_string(cells.size()) + " cells for " +
                          std::to_string(opts.probes_per_component) + " probes");
    }
    ComponentReport cr;
    cr.cells = static_cast<int>(cells.size());

    int boundary = 0, touching = 0;
    for (const auto& [i, j] : cells) {
      bool edge = false, mask_adj = false;
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int ni = i + di, nj = j + dj;
          if (ni < 0 || nj < 0 || ni >= g || nj >= g) {
            edge = true;
            continue;
          }
          const std::size_t k = idx(ni, nj);
          if (label[k] != static_cast<int>(id)) edge = true;
          if (inside[k] && masked[k]) mask_adj = true;
        }
      }
      boundary += edge;
      touching += edge && mask_adj;
    }
    cr.mask_boundary_fraction = boundary ? static_cast<double>(touching) / boundary : 0.0;
    cr.low_confidence = cr.mask_boundary_fraction > 0.5;

    CounterRng pick = rng.split(id);
    std::vector<std::pair<int, int>> pool = cells;
    std::map<int, int> tally;
    for (int k = 0; k < opts.probes_per_component; ++k) {
      const std::size_t span = pool.size() - k;
      const std::size_t choice = k + std::min<std::size_t>(
                                         span - 1, static_cast<std::size_t>(pick.uniform() * span));
      std::swap(pool[k], pool[choice]);
      const Perplex target = centre(pool[k].first, pool[k].second);
      const std::vector<Perplex> fiber = fiber_solve(f, alg, target, epsilon, opts.seed_grid);
      for (const auto& x : fiber) {
        rep.max_residual = std::max(rep.max_residual, norm_euclid(eval1(f, x, alg) - target));
      }
      cr.targets.push_back(target);
      cr.counts.push_back(static_cast<int>(fiber.size()));
      ++tally[cr.counts.back()];
    }
    int best = -1;
    for (const auto& [count, votes] : tally) {
      if (votes > best) {
        best = votes;
        cr.majority = count;
      }
    }
    cr.constant = tally.size() == 1;
    all_constant = all_constant && cr.constant;
    for (std::size_t k = 0; k < cr.counts.size(); ++k) {
      if (cr.counts[k] != cr.majority && !near_discriminant(cr.targets[k])) {
        rep.consistent = false;
      }
    }
    rep.components.push_back(std::move(cr));
  }
  rep.verified = rep.consistent && all_constant && !rep.components.empty();
  return rep;
}

}  // namespace

FibrationReport local_triviality_check(const PerplexPolyN& f, const PerplexAlgebra& alg,
                                       const TrivialityOptions& opts, std::uint64_t seed) {
  if (f.nvars != 1) throw InvalidArgument("local_triviality_check needs one variable");
  if (!(opts.epsilon > 0.0 && opts.eta > 0.0) || opts.eta > opts.epsilon / 10.0) {
    throw InvalidArgument("local_triviality_check needs 0 < eta <= epsilon / 10");
  }
  if (opts.probes_per_component < 1 || opts.target_grid < 4 || opts.seed_grid < 1 ||
      opts.mask_radius < 0 || opts.max_halvings < 0) {
    throw InvalidArgument("invalid local_triviality_check options");
  }
  const Classification cls = require_nondegenerate(alg);
  const CounterRng root(seed, 0xf1b);
  FibrationReport last;
  for (int h = 0; h <= opts.max_halvings; ++h) {
    const double shrink = std::ldexp(1.0, -h);
    try {
      last = triviality_attempt(f, alg, cls, opts, opts.epsilon * shrink, opts.eta * shrink,
                                root.split(h));
    } catch (const MaskTooCoarse&) {
      if (h == opts.max_halvings) throw;
      continue;
    }
    last.halvings = h;
    if (last.verified) break;
  }
  return last;
}

FiberCloud fiber_cloud(const PerplexPolyN& f, const PerplexAlgebra& alg, const Perplex& c,
                       const CloudOptions& opts, std::uint64_t seed) {
  if (f.nvars != 2) throw InvalidArgument("fiber_cloud needs two variables");
  if (!(opts.epsilon > 0.0 && opts.eta > 0.0) || opts.cloud_size < 1 || opts.target_grid < 2) {
    throw InvalidArgument("invalid fiber_cloud options");
  }
  FiberCloud cloud;
  cloud.seeds = opts.cloud_size;
  const detail::System sys = [&](const Eigen::VectorXd& x, Eigen::VectorXd& fv,
                                 Eigen::MatrixXd& jac) {
    const PerplexPoint p = unflatten(x);
    fv = (eval(f, p, alg) - c).vec();
    jac = real_jacobian(f, p, alg);
  };
  const CounterRng root(seed, 0xc10d);
  for (int s = 0; s < opts.cloud_size; ++s) {
    const PerplexPoint p0 = random_ball_point(root.split(s), 2, opts.epsilon);
    const detail::NewtonResult nr =
        detail::solve_min_norm(sys, flatten_point(p0), kNewtonSteps, 1e-13);
    if (!nr.x.allFinite() || nr.x.norm() > opts.epsilon) continue;
    const double res = (eval(f, unflatten(nr.x), alg) - c).vec().norm();
    if (res > kFiberResidual) continue;
    cloud.max_residual = std::max(cloud.max_residual, res);
    cloud.points.emplace_back(nr.x.data(), nr.x.data() + nr.x.size());
  }
  if (cloud.points.empty()) {
    throw EmptyFiber("no Newton projection converged inside the ball");
  }

  const std::size_t m = cloud.points.size();
  auto dist = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double d = cloud.points[a][k] - cloud.points[b][k];
      s += d * d;
    }
    return std::sqrt(s);
  };
  if (m == 1) {
    cloud.connectivity = 1;
  } else {
    double total = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      double nn = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < m; ++b) {
        if (a != b) nn = std::min(nn, dist(a, b));
      }
      total += nn;
    }
    cloud.link_radius = 5.0 * total / m;
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        if (dist(a, b) <= cloud.link_radius) {
          const std::size_t ra = find(a), rb = find(b);
          if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
        }
      }
    }
    for (std::size_t a = 0; a < m; ++a) cloud.connectivity += find(a) == a;
  }

  const Classification cls = classify(alg);
  if (cls.kind == AlgebraKind::Degenerate) {
    cloud.warnings.push_back("degenerate algebra: discriminant not traced");
  } else {
    const double cell = 2.0 * opts.eta / opts.target_grid;
    const double mask = opts.mask_radius * cell;
    const std::vector<Perplex> disc = discriminant_samples(
        f, alg, cls, opts.epsilon, norm_euclid(c) + mask, cell, opts.target_grid);
    cloud.on_discriminant = std::any_of(disc.begin(), disc.end(), [&](const Perplex& s) {
      return norm_euclid(s - c) <= mask;
    });
    if (cloud.on_discriminant) cloud.warnings.push_back("target lies on the discriminant mask");
  }
  return cloud;
}

}  // namespace perplex
