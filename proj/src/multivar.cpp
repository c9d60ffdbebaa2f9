#include "perplex/multivar.hpp"

#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "perplex/random.hpp"

namespace perplex {

namespace {

void check_point(const PerplexPolyN& f, const PerplexPoint& p) {
  if (static_cast<int>(p.size()) != f.nvars) throw InvalidArgument("point has wrong dimension");
}

void check_poly(const PerplexPolyN& f) {
  if (f.nvars < 1) throw InvalidArgument("polynomial needs at least one variable");
  for (const auto& t : f.terms) {
    if (static_cast<int>(t.exp.size()) != f.nvars) {
      throw InvalidArgument("term exponent length does not match nvars");
    }
    for (int e : t.exp) {
      if (e < 0 || e > 64) throw InvalidArgument("exponents must lie in [0, 64]");
    }
  }
}

}  // namespace

PerplexPolyN PerplexPolyN::normalised() const {
  std::map<Exponent, Perplex> merged;
  for (const auto& t : terms) merged[t.exp] += t.c;
  PerplexPolyN out{nvars, {}};
  for (const auto& [exp, c] : merged) {
    if (c.x1 != 0.0 || c.x2 != 0.0) out.terms.push_back({exp, c});
  }
  return out;
}

Perplex eval(const PerplexPolyN& f, const PerplexPoint& p, const PerplexAlgebra& alg) {
  check_poly(f);
  check_point(f, p);
  Perplex sum;
  for (const auto& t : f.terms) {
    Perplex term = t.c;
    for (int i = 0; i < f.nvars; ++i) {
      for (int k = 0; k < t.exp[i]; ++k) term = alg.mul(term, p[i]);
    }
    sum += term;
  }
  return sum;
}

PerplexPolyN partial_derivative(const PerplexPolyN& f, int i) {
  check_poly(f);
  if (i < 0 || i >= f.nvars) throw InvalidArgument("partial derivative index out of range");
  PerplexPolyN d{f.nvars, {}};
  for (const auto& t : f.terms) {
    if (t.exp[i] == 0) continue;
    PerplexTerm dt = t;
    dt.c = static_cast<double>(t.exp[i]) * t.c;
    --dt.exp[i];
    d.terms.push_back(dt);
  }
  return d.normalised();
}

std::vector<Perplex> gradient(const PerplexPolyN& f, const PerplexPoint& p,
                              const PerplexAlgebra& alg) {
  std::vector<Perplex> g;
  for (int i = 0; i < f.nvars; ++i) g.push_back(eval(partial_derivative(f, i), p, alg));
  return g;
}

Perplex directional_derivative(const PerplexPolyN& f, const PerplexPoint& p,
                               const std::vector<Perplex>& w, const PerplexAlgebra& alg) {
  if (static_cast<int>(w.size()) != f.nvars) throw InvalidArgument("direction has wrong length");
  const std::vector<Perplex> g = gradient(f, p, alg);
  Perplex sum;
  for (int i = 0; i < f.nvars; ++i) sum += alg.mul(w[i], g[i]);
  return sum;
}

PolyMap expand(const PerplexPolyN& f, const PerplexAlgebra& alg) {
  check_poly(f);
  const int nr = 2 * f.nvars;
  PolyPair sum{RealPoly(nr), RealPoly(nr)};
  for (const auto& t : f.terms) {
    PolyPair term = constant_pair(nr, t.c);
    for (int i = 0; i < f.nvars; ++i) {
      const PolyPair x{RealPoly::variable(nr, 2 * i), RealPoly::variable(nr, 2 * i + 1)};
      for (int k = 0; k < t.exp[i]; ++k) term = star(alg, term, x);
    }
    sum = sum + term;
  }
  return PolyMap(f.nvars, sum.u, sum.v);
}

Eigen::MatrixXd real_jacobian(const PerplexPolyN& f, const PerplexPoint& p,
                              const PerplexAlgebra& alg) {
  const std::vector<Perplex> g = gradient(f, p, alg);
  Eigen::MatrixXd jac(2, 2 * f.nvars);
  for (int i = 0; i < f.nvars; ++i) jac.block<2, 2>(0, 2 * i) = alg.left_mult_matrix(g[i]);
  return jac;
}

CriticalReport is_critical(const PerplexPolyN& f, const PerplexPoint& p,
                           const PerplexAlgebra& alg, double tol) {
  CriticalReport rep;
  for (const auto& g : gradient(f, p, alg)) rep.partial_norms.push_back(std::abs(alg.norm(g)));
  const Eigen::MatrixXd jac = real_jacobian(f, p, alg);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(jac).singularValues();
  const double cut = tol * alg.scale() * std::max(1.0, sv.size() ? sv(0) : 0.0);
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    rep.singular_values.push_back(sv(k));
    if (sv(k) > cut) ++rep.rank;
  }
  rep.critical = rep.rank < 2;
  return rep;
}

double max_norm(const std::vector<Perplex>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, norm_max(x));
  return m;
}

namespace {

struct LojaSample {
  double f = 0.0;
  double grad = 0.0;
  bool usable = false;
};

LojaSample draw_sample(const PerplexPolyN& f, const PerplexAlgebra& alg, const LojaOptions& opts,
                       CounterRng rng) {
  const double log_r = rng.uniform(std::log(opts.r_min), std::log(opts.r_max));
  std::vector<double> dir(2 * f.nvars);
  double len = 0.0;
  do {
    len = 0.0;
    for (double& d : dir) {
      d = rng.normal();
      len += d * d;
    }
  } while (len == 0.0);
  const double scale = std::exp(log_r) / std::sqrt(len);
  PerplexPoint p(f.nvars);
  for (int i = 0; i < f.nvars; ++i) p[i] = {scale * dir[2 * i], scale * dir[2 * i + 1]};
  LojaSample s;
  s.f = norm_max(eval(f, p, alg));
  s.grad = max_norm(gradient(f, p, alg));
  s.usable = s.f > 0.0 && s.f < 1.0;
  return s;
}

void check_options(const LojaOptions& opts) {
  if (!(opts.r_min > 0.0 && opts.r_min < opts.r_max)) {
    throw InvalidArgument("loja_scan needs 0 < rMin < rMax");
  }
  if (opts.samples < 1 || opts.bins < 2) throw InvalidArgument("loja_scan needs samples, bins >= 2");
}

void check_vanishes_at_origin(const PerplexPolyN& f, const PerplexAlgebra& alg) {
  const Perplex f0 = eval(f, PerplexPoint(f.nvars), alg);
  double coeff = 0.0;
  for (const auto& t : f.terms) coeff = std::max(coeff, norm_max(t.c));
  if (norm_max(f0) > tol::kEq * std::max(1.0, coeff)) {
    throw InvalidArgument("loja_scan needs f(0) = 0");
  }
}

}  // namespace

LojaFit loja_scan(const PerplexPolyN& f, const PerplexAlgebra& alg, const LojaOptions& opts,
                  std::uint64_t seed) {
  check_options(opts);
  check_poly(f);
  check_vanishes_at_origin(f, alg);

  LojaFit fit;
  const double s = alg.scale();
  fit.degenerate_algebra = std::abs(alg.delta()) <= tol::kEq * s * s * s * s;
  if (fit.degenerate_algebra) {
    fit.warnings.push_back("discriminant inside the degenerate band");
  }

  const CounterRng root(seed, 0x10a);
  std::vector<LojaSample> samples;
  int zero_grad = 0;
  for (int k = 0; k < opts.samples; ++k) {
    const LojaSample smp = draw_sample(f, alg, opts, root.split(k));
    if (!smp.usable) continue;
    if (smp.grad == 0.0) {
      ++zero_grad;
      continue;
    }
    samples.push_back(smp);
  }
  fit.drawn = opts.samples;
  fit.sample_count = static_cast<int>(samples.size()) + zero_grad;
  if (fit.sample_count < 100) {
    throw InsufficientSamples("only " + std::to_string(fit.sample_count) +
                              " samples with 0 < ||f||_m < 1");
  }
  if (zero_grad > 0) {
    fit.warnings.push_back(std::to_string(zero_grad) + " samples with vanishing gradient");
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& smp : samples) {
    lo = std::min(lo, std::log(smp.f));
    hi = std::max(hi, std::log(smp.f));
  }
  const double width = (hi - lo) / opts.bins;
  std::vector<LojaBin> bins(opts.bins);
  std::vector<bool> seen(opts.bins, false);
  for (const auto& smp : samples) {
    const double lf = std::log(smp.f);
    const double lg = std::log(smp.grad);
    int idx = width > 0.0 ? static_cast<int>((lf - lo) / width) : 0;
    idx = std::clamp(idx, 0, opts.bins - 1);
    LojaBin& b = bins[idx];
    ++b.count;
    if (!seen[idx] || lg < b.min_log_grad) {
      b.min_log_grad = lg;
      b.log_f = lf;
      seen[idx] = true;
    }
  }
  for (int k = 0; k < opts.bins; ++k) {
    if (seen[k]) fit.bins.push_back(bins[k]);
  }
  if (fit.bins.size() < 2) {
    throw InsufficientSamples("||f||_m does not vary across the sampled region");
  }

  Eigen::MatrixXd design(fit.bins.size(), 2);
  Eigen::VectorXd rhs(fit.bins.size());
  for (std::size_t k = 0; k < fit.bins.size(); ++k) {
    design(k, 0) = fit.bins[k].log_f;
    design(k, 1) = 1.0;
    rhs(k) = fit.bins[k].min_log_grad;
  }
  const Eigen::Vector2d line = design.colPivHouseholderQr().solve(rhs);
  fit.theta_hat = line(0);
  fit.c_hat = std::exp(line(1));
  if (!(fit.theta_hat > 0.0)) {
    fit.warnings.push_back("fitted exponent is not positive");
  }

  fit.violations = zero_grad;
  for (const auto& smp : samples) {
    if (smp.grad < fit.c_hat * std::pow(smp.f, fit.theta_hat)) ++fit.violations;
  }
  return fit;
}

int loja_violations(const PerplexPolyN& f, const PerplexAlgebra& alg, const LojaOptions& opts,
                    std::uint64_t seed, double theta, double c) {
  check_options(opts);
  check_poly(f);
  check_vanishes_at_origin(f, alg);
  const CounterRng root(seed, 0x10a);
  int count = 0;
  for (int k = 0; k < opts.samples; ++k) {
    const LojaSample smp = draw_sample(f, alg, opts, root.split(k));
    if (smp.usable && smp.grad < c * std::pow(smp.f, theta)) ++count;
  }
  return count;
}

}  // namespace perplex
