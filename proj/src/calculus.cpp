#include "perplex/calculus.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace perplex {

int PerplexPoly::degree(double tol) const {
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) {
    if (norm_max(coeffs[k]) > tol) return k;
  }
  return -1;
}

PerplexPoly PerplexPoly::trimmed(double tol) const {
  const int d = degree(tol);
  return {std::vector<Perplex>(coeffs.begin(), coeffs.begin() + (d + 1))};
}

Perplex poly_eval(const PerplexPoly& f, const Perplex& x, const PerplexAlgebra& alg) {
  if (f.coeffs.empty()) return {};
  Perplex r = f.coeffs.back();
  for (int k = static_cast<int>(f.coeffs.size()) - 2; k >= 0; --k) {
    r = alg.mul(r, x) + f.coeffs[k];
  }
  return r;
}

PerplexPoly poly_derivative(const PerplexPoly& f) {
  PerplexPoly d;
  for (std::size_t k = 1; k < f.coeffs.size(); ++k) {
    d.coeffs.push_back(static_cast<double>(k) * f.coeffs[k]);
  }
  return d;
}

PerplexPoly poly_add(const PerplexPoly& f, const PerplexPoly& g) {
  PerplexPoly s;
  s.coeffs.resize(std::max(f.coeffs.size(), g.coeffs.size()));
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) s.coeffs[k] += f.coeffs[k];
  for (std::size_t k = 0; k < g.coeffs.size(); ++k) s.coeffs[k] += g.coeffs[k];
  return s;
}

PerplexPoly poly_mul(const PerplexPoly& f, const PerplexPoly& g, const PerplexAlgebra& alg) {
  if (f.coeffs.empty() || g.coeffs.empty()) return {};
  PerplexPoly p;
  p.coeffs.resize(f.coeffs.size() + g.coeffs.size() - 1);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    for (std::size_t j = 0; j < g.coeffs.size(); ++j) {
      p.coeffs[i + j] += alg.mul(f.coeffs[i], g.coeffs[j]);
    }
  }
  return p;
}

PolyMap expand(const PerplexPoly& f, const PerplexAlgebra& alg) {
  const PolyPair x{RealPoly::variable(2, 0), RealPoly::variable(2, 1)};
  PolyPair r{RealPoly(2), RealPoly(2)};
  for (int k = static_cast<int>(f.coeffs.size()) - 1; k >= 0; --k) {
    r = star(alg, r, x) + constant_pair(2, f.coeffs[k]);
  }
  return PolyMap(1, r.u, r.v);
}

DiffQuotientReport diff_quotient(const PlaneMap& f, const Perplex& x, const PerplexAlgebra& alg,
                                 const Perplex& direction, const DiffQuotientOptions& opts) {
  const double margin = alg.separation_margin(direction);
  if (margin < opts.min_margin) {
    throw NotSeparated("direction margin " + std::to_string(margin) + " below " +
                       std::to_string(opts.min_margin));
  }
  const Perplex fx = f(x);
  DiffQuotientReport rep;
  rep.increment = std::numeric_limits<double>::infinity();
  Perplex prev_raw, prev_corrected;
  for (int n = 1; n <= opts.max_steps; ++n) {
    const Perplex h = std::ldexp(1.0, -n) * direction;
    const Perplex raw = alg.mul(f(x + h) - fx, alg.inverse(h));
    rep.last = raw;
    rep.steps = n;
    if (n == 1) {
      rep.estimate = raw;
    } else {
      const Perplex corrected = 2.0 * raw - prev_raw;
      if (n == 2) {
        rep.estimate = corrected;
      } else {
        const double inc = norm_euclid(corrected - prev_corrected);
        if (inc < opts.stop_increment) {
          rep.increment = inc;
          rep.estimate = corrected;
          rep.converged = true;
          break;
        }
        // Clean steps shrink the increment about fourfold. Once it stops
        // shrinking at a small size, rounding dominates and the previous
        // value is the best one available.
        const double small = 1e-6 * std::max(1.0, norm_euclid(corrected));
        if (inc > 0.5 * rep.increment && inc <= small) {
          rep.converged = true;
          break;
        }
        rep.increment = inc;
        rep.estimate = corrected;
      }
      prev_corrected = corrected;
    }
    prev_raw = raw;
  }
  return rep;
}

std::vector<Perplex> separated_directions(const PerplexAlgebra& alg, int count,
                                          double min_margin) {
  if (count < 1) return {};
  // Sweep a fine angle grid, then take count evenly spaced survivors.
  const int sweep = 64 * count;
  std::vector<Perplex> ok;
  for (int k = 0; k < sweep; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / sweep;
    const Perplex d{std::cos(phi), std::sin(phi)};
    if (alg.separation_margin(d) >= min_margin) ok.push_back(d);
  }
  if (static_cast<int>(ok.size()) <= count) return ok;
  std::vector<Perplex> out;
  for (int k = 0; k < count; ++k) out.push_back(ok[ok.size() * k / count]);
  return out;
}

DirectionScan scan_directions(const PlaneMap& f, const Perplex& x, const PerplexAlgebra& alg,
                              int count, double min_margin) {
  DirectionScan scan;
  scan.directions = separated_directions(alg, count, min_margin);
  DiffQuotientOptions opts;
  opts.min_margin = min_margin;
  for (const auto& d : scan.directions) scan.reports.push_back(diff_quotient(f, x, alg, d, opts));
  for (std::size_t i = 0; i < scan.reports.size(); ++i) {
    for (std::size_t j = i + 1; j < scan.reports.size(); ++j) {
      const double gap = norm_euclid(scan.reports[i].estimate - scan.reports[j].estimate);
      if (gap > scan.spread) {
        scan.spread = gap;
        scan.first = static_cast<int>(i);
        scan.second = static_cast<int>(j);
      }
    }
  }
  return scan;
}

GcrResidual gcr_residual(const PolyMap& m, const PerplexAlgebra& alg, double tol) {
  const Perplex e1{1.0, 0.0};
  const Perplex e2{0.0, 1.0};
  GcrResidual r;
  for (int i = 0; i < m.nvars; ++i) {
    const PolyPair d1 = m.partial(2 * i);
    const PolyPair d2 = m.partial(2 * i + 1);
    r.residual.push_back(star(alg, e2, d1) - star(alg, e1, d2));
    r.max_abs = std::max(r.max_abs, r.residual.back().max_abs_coeff());
  }
  r.threshold = tol * alg.scale() * std::max(1.0, m.f.max_abs_coeff());
  r.zero = r.max_abs <= r.threshold;
  return r;
}

Perplex derivative_from_partials(const PolyMap& m, const PerplexAlgebra& alg, const Perplex& x,
                                 double tol) {
  if (m.nvars != 1) throw InvalidArgument("derivative_from_partials needs a one-variable map");
  const std::vector<double> pt{x.x1, x.x2};
  const Perplex d1 = m.partial(0).eval(pt);
  const Perplex d2 = m.partial(1).eval(pt);
  const Perplex inv1 = alg.inverse({1.0, 0.0});
  const Perplex inv2 = alg.inverse({0.0, 1.0});
  const Perplex r1 = alg.mul(inv1, d1);
  const Perplex r2 = alg.mul(inv2, d2);
  const double mag = std::max(
      {1.0, norm_max(inv1) * norm_max(d1), norm_max(inv2) * norm_max(d2)});
  if (norm_max(r1 - r2) > tol * alg.mul_bound_k() * mag) {
    throw GcrViolated("e1^-1 * d1 and e2^-1 * d2 disagree at (" + std::to_string(x.x1) + "," +
                      std::to_string(x.x2) + ")");
  }
  return r1;
}

PolyPair derivative_map(const PolyMap& m, const PerplexAlgebra& alg, double tol) {
  if (m.nvars != 1) throw InvalidArgument("derivative_map needs a one-variable map");
  const GcrResidual r = gcr_residual(m, alg, tol);
  if (!r.zero) {
    throw GcrViolated("map is not perplex-differentiable: GCR residual " +
                      std::to_string(r.max_abs));
  }
  return star(alg, alg.inverse({1.0, 0.0}), m.partial(0));
}

CriticalLocus critical_locus(const PolyMap& m, const PerplexAlgebra& alg, int grid_res,
                             double radius, double tol) {
  if (grid_res < 2) throw InvalidArgument("critical_locus grid needs at least 2 nodes per side");
  const PolyPair d = derivative_map(m, alg, tol);
  const auto& c = alg.norm_coeffs();
  CriticalLocus out;
  out.norm_poly = c[0] * (d.u * d.u) + c[1] * (d.u * d.v) + c[2] * (d.v * d.v);

  const RealPoly& np = out.norm_poly;
  auto coord = [&](int k) { return -radius + 2.0 * radius * k / (grid_res - 1); };
  std::vector<double> values(static_cast<std::size_t>(grid_res) * grid_res);
  double peak = 0.0;
  for (int i = 0; i < grid_res; ++i) {
    for (int j = 0; j < grid_res; ++j) {
      const double v = np.eval({coord(i), coord(j)});
      values[static_cast<std::size_t>(i) * grid_res + j] = v;
      peak = std::max(peak, std::abs(v));
    }
  }
  const double zero_band = tol * alg.scale() * alg.scale() * std::max(1.0, peak);
  auto at = [&](int i, int j) { return values[static_cast<std::size_t>(i) * grid_res + j]; };

  auto bisect = [&](Perplex p, Perplex q, double fp) {
    for (int it = 0; it < 60; ++it) {
      const Perplex mid = 0.5 * (p + q);
      const double fm = np.eval({mid.x1, mid.x2});
      if ((fm < 0.0) == (fp < 0.0)) {
        p = mid;
        fp = fm;
      } else {
        q = mid;
      }
    }
    return 0.5 * (p + q);
  };

  for (int i = 0; i < grid_res; ++i) {
    for (int j = 0; j < grid_res; ++j) {
      const double v = at(i, j);
      const Perplex p{coord(i), coord(j)};
      if (std::abs(v) <= zero_band) {
        out.samples.push_back(p);
        continue;
      }
      for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
        if (i + di >= grid_res || j + dj >= grid_res) continue;
        const double w = at(i + di, j + dj);
        if (std::abs(w) <= zero_band || (v < 0.0) == (w < 0.0)) continue;
        out.samples.push_back(bisect(p, {coord(i + di), coord(j + dj)}, v));
      }
    }
  }
  return out;
}

}  // namespace perplex
