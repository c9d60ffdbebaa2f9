// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "perplex/approximation.hpp"
#include "perplex/calculus.hpp"
#include "perplex/cli.hpp"
#include "perplex/fibration.hpp"
#include "perplex/multivar.hpp"
#include "perplex/structure.hpp"
#include "support/generators.hpp"

using namespace perplex;
using namespace perplex::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PolyMap poly_linear(const Mat2& j) {
  return poly_map(1, {{{1, 0}, j(0, 0)}, {{0, 1}, j(0, 1)}}, {{{1, 0}, j(1, 0)}, {{0, 1}, j(1, 1)}});
}

// 1. Algebra laws over 1000 random algebras x 100 triples, under 10 s.
Outcome algebra_laws() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  CounterRng rng(1);
  double worst = 0.0;
  bool commutative = true;
  for (int k = 0; k < 1000; ++k) {
    const PerplexAlgebra alg(random_algebra(rng).params);
    const double scale = alg.scale() * alg.scale();
    for (int t = 0; t < 100; ++t) {
      const Perplex x = random_perplex(rng), y = random_perplex(rng), z = random_perplex(rng);
      commutative = commutative && alg.mul(x, y) == alg.mul(y, x);
      const double r[4] = {
          norm_max(alg.mul(alg.mul(x, y), z) - alg.mul(x, alg.mul(y, z))),
          norm_max(alg.mul(alg.identity(), x) - x),
          std::abs(alg.norm(alg.mul(x, y)) - alg.norm(x) * alg.norm(y)),
          norm_max(alg.mul(x, alg.conjugate(x)) - alg.norm(x) * alg.identity()),
      };
      for (double v : r) worst = std::max(worst, v / scale);
    }
  }
  const double secs = seconds_since(t0);
  o.require(commutative, "commutativity not exact");
  o.require(worst <= 1e-9, "law residual " + fmt("%.3g", worst));
  o.require(secs < 10.0, "runtime " + fmt("%.1f s", secs));
  if (o.pass) o.detail = "max residual/scale " + fmt("%.2g", worst) + ", " + fmt("%.2f s", secs);
  return o;
}

// 2. Classification of the three reference algebras and their isomorphisms.
Outcome classification_oracles() {
  Outcome o;
  const auto c = PerplexAlgebra::complex();
  const auto h = PerplexAlgebra::hyperbolic();
  const auto d = PerplexAlgebra::dual_boundary();
  const Classification cc = classify(c), ch = classify(h), cd = classify(d);
  o.require(cc.kind == AlgebraKind::Field && cc.delta == -4.0, "complex not Field/-4");
  o.require(ch.kind == AlgebraKind::Hyperbolic && ch.delta == 4.0, "hyperbolic not Hyperbolic/4");
  o.require(cd.kind == AlgebraKind::Degenerate && cd.delta == 0.0, "dual not Degenerate/0");
  const auto nil = nilpotent_directions(d);
  o.require(nil.size() == 1, "dual nilpotent count");
  if (!nil.empty()) {
    const Perplex n = nil[0] / nil[0].x1;  // scaled to (1, t)
    o.require(std::abs(n.x2 + 1.0) <= 1e-12, "nilpotent direction not (1,-1)");
  }
  o.require(d.mul({1, -1}, {1, -1}) == Perplex{0, 0}, "(1,-1)^2 != 0");
  double worst = 0.0;
  for (const auto* pr : {&cc, &ch, &cd}) {
    const PerplexAlgebra& alg = pr == &cc ? c : pr == &ch ? h : d;
    worst = std::max(worst, iso_residual(pr->iso, pr->kind, alg, 100, 17));
  }
  o.require(worst <= 1e-8, "iso residual " + fmt("%.3g", worst));
  if (o.pass) o.detail = "iso residual " + fmt("%.2g", worst);
  return o;
}

// 3. disc(chi_j) = Delta / detA^2, relative to max(tr^2, 4|det|, |rhs|).
Outcome char_poly_discriminant() {
  Outcome o;
  CounterRng rng(3);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const PerplexAlgebra alg(random_algebra(rng).params);
    const Classification c = classify(alg);
    const double rhs = alg.delta() / (alg.det_a() * alg.det_a());
    const double scale = std::max({c.trace * c.trace, 4 * std::abs(c.det), std::abs(rhs)});
    worst = std::max(worst, std::abs(c.char_poly_discriminant() - rhs) / scale);
    worst = std::max(worst, std::abs(char_poly_disc(alg.params()) - rhs) / scale);
  }
  o.require(worst <= 1e-9, "relative error " + fmt("%.3g", worst));
  if (o.pass) o.detail = "max relative error " + fmt("%.2g", worst);
  return o;
}

// 4. GCR reduces to the classical and split Cauchy-Riemann systems.
Outcome gcr_reductions() {
  Outcome o;
  const auto c = PerplexAlgebra::complex();
  const auto h = PerplexAlgebra::hyperbolic();
  for (int e = 0; e < 4; ++e) {
    const int var = e / 2, comp = e % 2;
    const Exponent ex{var == 0 ? 1 : 0, var == 1 ? 1 : 0};
    const PolyMap m = comp == 0 ? poly_map(1, {{ex, 1}}, {}) : poly_map(1, {}, {{ex, 1}});
    const double ux1 = comp == 0 && var == 0, ux2 = comp == 0 && var == 1;
    const double vx1 = comp == 1 && var == 0, vx2 = comp == 1 && var == 1;
    const Perplex rc = gcr_residual(m, c).residual[0].eval({0, 0});
    const Perplex rh = gcr_residual(m, h).residual[0].eval({0, 0});
    // C: u_x1 = v_x2, u_x2 = -v_x1.  R+R: u_x1 = v_x2, u_x2 = v_x1.
    o.require(rc.x2 == ux1 - vx2 && rc.x1 == -(ux2 + vx1), "complex basis map " + std::to_string(e));
    o.require(rh.x2 == ux1 - vx2 && rh.x1 == vx1 - ux2, "split basis map " + std::to_string(e));
  }
  if (o.pass) o.detail = "4 basis maps x 2 algebras";
  return o;
}

// 5. Difference quotients agree for GCR maps and refute the conjugation.
Outcome gcr_theorem() {
  Outcome o;
  CounterRng rng(5);
  double worst = 0.0;
  int maps = 0;
  while (maps < 50) {
    const PerplexAlgebra alg(random_algebra(rng).params);
    const PolyMap m = expand(random_perplex_poly(rng, 3), alg);
    if (!gcr_residual(m, alg).zero) {
      o.require(false, "expanded polynomial failed the symbolic test");
      continue;
    }
    ++maps;
    const Perplex x = random_perplex(rng, 0.5);
    const Perplex want = derivative_from_partials(m, alg, x);
    const auto f = [&m](const Perplex& p) { return m.eval({p.x1, p.x2}); };
    const DirectionScan scan = scan_directions(f, x, alg, 16);
    if (scan.directions.size() < 16) {
      o.require(false, "fewer than 16 separated directions");
      break;
    }
    for (const auto& r : scan.reports) {
      worst = std::max(worst, norm_max(r.estimate - want) / std::max(1.0, norm_max(want)));
    }
  }
  o.require(worst <= 1e-6, "quotient disagreement " + fmt("%.3g", worst));
  const PolyMap conj = poly_map(1, {{{1, 0}, 1}}, {{{0, 1}, -1}});
  const auto fc = [&conj](const Perplex& p) { return conj.eval({p.x1, p.x2}); };
  double weakest = 1e300;
  for (int k = 0; k < 20; ++k) {
    const PerplexAlgebra alg(random_algebra(rng).params);
    weakest = std::min(weakest, scan_directions(fc, random_perplex(rng), alg, 16).spread);
  }
  o.require(weakest > 0.1, "conjugation spread only " + fmt("%.3g", weakest));
  if (o.pass) {
    o.detail = "agreement " + fmt("%.2g", worst) + ", min conjugation spread " + fmt("%.3g", weakest);
  }
  return o;
}

// 6. Linear and quadratic fitting.
Outcome approximation() {
  Outcome o;
  Mat2 conj;
  conj << 1, 0, 0, -1;
  const LinearFitResult inf = fit_linear(conj);
  o.require(inf.status == LinearFitStatus::Infeasible && inf.proven && inf.violated == "ii",
            "diag(1,-1) not a proven detA = 0 infeasibility");
  const auto seq = approx_linear_sequence(conj, 5);
  o.require(seq.size() == 5, "sequence length");
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const bool ok = seq[k].distance <= 2.0 / double(k + 1) &&
                    validate_params(seq[k].params).valid &&
                    gcr_residual(poly_linear(seq[k].jk), PerplexAlgebra(seq[k].params)).zero;
    o.require(ok, "sequence member " + std::to_string(k + 1));
  }
  const PolyMap squares = poly_map(1, {{{2, 0}, 1}}, {{{0, 2}, 1}});
  o.require(quad_t_matrix(squares).status == QuadFitStatus::Inconsistent,
            "(x1^2, x2^2) accepted");
  for (double e : {1.0, 0.5, 0.1}) {
    const PolyMap fe = poly_map(1, {{{2, 0}, 1}, {{1, 1}, e}}, {{{2, 0}, e}, {{0, 2}, 1}});
    const QuadFitResult r = quad_t_matrix(fe);
    Mat2 want;
    want << 0, 0.5, 2 / e, -2 / (e * e);
    const double err = (r.t - want).lpNorm<Eigen::Infinity>();
    o.require(r.status == QuadFitStatus::Exact && err <= 1e-8,
              "f_eps T mismatch at eps=" + fmt("%g", e));
  }
  CounterRng rng(6);
  int exact = 0;
  for (int k = 0; k < 1000; ++k) {
    Mat2 j;
    j << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
    const LinearFitResult r = fit_linear(j, k);
    if (r.status != LinearFitStatus::Exact) continue;
    const PerplexAlgebra alg(r.params);
    if ((alg.left_mult_matrix(r.derivative) - j).norm() <= 1e-8 * std::max(1.0, j.norm())) ++exact;
  }
  o.require(exact >= 990, "random exact-fit rate " + std::to_string(exact) + "/1000");
  if (o.pass) o.detail = "random exact fits " + std::to_string(exact) + "/1000";
  return o;
}

// 7. Lojasiewicz exponents of p^2 and p^3 over C.
Outcome lojasiewicz() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = PerplexAlgebra::complex();
  const LojaOptions opts;
  const LojaFit f2 = loja_scan(monomial1(2), c, opts, 7);
  const LojaFit f3 = loja_scan(monomial1(3), c, opts, 7);
  o.require(f2.theta_hat >= 0.45 && f2.theta_hat <= 0.55, "p^2 theta " + fmt("%.4f", f2.theta_hat));
  o.require(f3.theta_hat >= 0.61 && f3.theta_hat <= 0.72, "p^3 theta " + fmt("%.4f", f3.theta_hat));
  const int v2 = loja_violations(monomial1(2), c, opts, 8, f2.theta_hat, 0.5 * f2.c_hat);
  const int v3 = loja_violations(monomial1(3), c, opts, 8, f3.theta_hat, 0.5 * f3.c_hat);
  o.require(v2 == 0 && v3 == 0, "fresh-sample violations " + std::to_string(v2 + v3));
  const double secs = seconds_since(t0);
  o.require(secs < 30.0, "runtime " + fmt("%.1f s", secs));
  if (o.pass) {
    o.detail = "theta(p^2) " + fmt("%.4f", f2.theta_hat) + ", theta(p^3) " +
               fmt("%.4f", f3.theta_hat) + ", " + fmt("%.2f s", secs);
  }
  return o;
}

std::vector<int> majorities(const FibrationReport& r) {
  std::vector<int> m;
  for (const auto& comp : r.components) m.push_back(comp.majority);
  std::sort(m.begin(), m.end(), std::greater<>());
  return m;
}

std::string list(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s + ")";
}

// 8. Fiber counts of p^2 over C and over R+R.
Outcome fibration() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = PerplexAlgebra::complex();
  const auto h = PerplexAlgebra::hyperbolic();
  const FibrationReport rc = local_triviality_check(monomial1(2), c, {}, 42);
  const FibrationReport rc2 = local_triviality_check(monomial1(2), c, {}, 43);
  const FibrationReport rh = local_triviality_check(monomial1(2), h, {}, 42);
  const FibrationReport rh2 = local_triviality_check(monomial1(2), h, {}, 43);
  o.require(majorities(rc) == std::vector<int>{2} && rc.verified,
            "complex counts " + list(majorities(rc)));
  o.require(majorities(rh) == std::vector<int>{4, 0, 0, 0},
            "hyperbolic counts " + list(majorities(rh)) + ", expected (4,0,0,0)");
  bool constant = true;
  for (const auto* r : {&rc, &rh}) {
    for (const auto& comp : r->components) constant = constant && comp.constant;
  }
  o.require(constant, "non-constant component");
  const double res = std::max({rc.max_residual, rh.max_residual, rc2.max_residual, rh2.max_residual});
  o.require(res <= 1e-10, "fiber residual " + fmt("%.3g", res));
  o.require(majorities(rc) == majorities(rc2) && majorities(rh) == majorities(rh2),
            "counts differ across seeds");
  const double secs = seconds_since(t0);
  o.require(secs < 60.0, "runtime " + fmt("%.1f s", secs));
  if (o.pass) o.detail = fmt("%.2f s", secs);
  return o;
}

// 9. Q_N along the real axis.
Outcome q_divergence() {
  Outcome o;
  const auto c = PerplexAlgebra::complex();
  double worst = 0.0;
  for (int e = 1; e <= 6; ++e) {
    const double r = std::pow(10.0, -e);
    const double q = c.q_ratio({r, 0}, 3, 0.5);
    worst = std::max(worst, std::abs(q / std::pow(r, -0.5) - 1.0));
  }
  o.require(worst <= 0.01, "ratio off by " + fmt("%.3g", worst));
  const double q10 = c.q_ratio({1e-2, 0}, 3, 0.5);
  o.require(std::abs(q10 - 10.0) <= 1e-9, "Q(1e-2) = " + fmt("%.17g", q10));
  if (o.pass) o.detail = "max relative deviation " + fmt("%.2g", worst);
  return o;
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args, const std::string& input) {
  std::vector<const char*> argv{"perplex"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

// 10. Seeded subcommands are byte-for-byte reproducible.
Outcome cli_determinism() {
  Outcome o;
  const std::string cx = R"("a":[1,0,-1],"b":[0,1,0])";
  const std::string hy = R"("a":[1,0,1],"b":[0,1,0])";
  const std::string p2 = R"("f":{"nvars":1,"terms":[{"exp":[2],"c":[1,0]}]})";
  const std::string s2 =
      R"("f":{"nvars":2,"terms":[{"exp":[2,0],"c":[1,0]},{"exp":[0,2],"c":[1,0]}]})";
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases = {
      {{"loja-scan", "--seed", "11"}, "{" + cx + "," + p2 + "}"},
      {{"fiber-count", "--seed", "11"}, "{" + hy + "," + p2 + "}"},
      {{"fiber-cloud", "--seed", "11"}, "{" + cx + "," + s2 + R"(,"c":[0.025,0],"cloudSize":512})"},
      {{"discriminant"}, "{" + hy + "," + p2 + "}"},
      {{"classify", "--seed", "11"}, "{" + hy + "}"},
      {{"fit-linear", "--seed", "11"}, R"({"J":[0.3,-0.7,0.2,0.9]})"},
      {{"approx-linear", "--seed", "11"}, R"({"J":[1,0,0,-1],"n":5})"},
      {{"fit-quad", "--seed", "11"},
       R"({"map":{"nvars":1,"u":[{"exp":[2,0],"c":1},{"exp":[1,1],"c":2}],"v":[{"exp":[2,0],"c":2},{"exp":[0,2],"c":1}]}})"},
  };
  for (const auto& [args, input] : cases) {
    const CliRun a = run_cli(args, input), b = run_cli(args, input);
    o.require(a.code == 0 && !a.out.empty(), args[0] + " failed: " + a.err);
    o.require(a.code == b.code && a.out == b.out && a.err == b.err, args[0] + " output differs");
  }
  if (o.pass) o.detail = std::to_string(cases.size()) + " subcommands";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"algebra law suite", algebra_laws},
      {"classification oracles", classification_oracles},
      {"char poly discriminant", char_poly_discriminant},
      {"GCR reductions", gcr_reductions},
      {"GCR theorem at desk scale", gcr_theorem},
      {"approximation", approximation},
      {"Lojasiewicz scan", lojasiewicz},
      {"fibration counts", fibration},
      {"Q_N divergence", q_divergence},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
