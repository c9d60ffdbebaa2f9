#include "perplex/real_poly.hpp"

#include <cmath>

namespace perplex {

namespace {

void check_arity(int l, int r) {
  if (l != r) throw InvalidArgument("polynomials over different variable counts");
}

}  // namespace

RealPoly RealPoly::constant(int nvars, double c) {
  RealPoly p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

RealPoly RealPoly::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw InvalidArgument("variable index out of range");
  Exponent e(nvars, 0);
  e[index] = 1;
  RealPoly p(nvars);
  p.add_term(e, 1.0);
  return p;
}

void RealPoly::add_term(const Exponent& exp, double c) {
  if (static_cast<int>(exp.size()) != nvars_) {
    throw InvalidArgument("exponent length does not match variable count");
  }
  for (int e : exp) {
    if (e < 0) throw InvalidArgument("negative exponent");
  }
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(exp, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double RealPoly::coeff(const Exponent& exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? 0.0 : it->second;
}

double RealPoly::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != nvars_) throw InvalidArgument("point has wrong dimension");
  double sum = 0.0;
  for (const auto& [exp, c] : terms_) {
    double t = c;
    for (int i = 0; i < nvars_; ++i) {
      for (int k = 0; k < exp[i]; ++k) t *= x[i];
    }
    sum += t;
  }
  return sum;
}

RealPoly RealPoly::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw InvalidArgument("variable index out of range");
  RealPoly d(nvars_);
  for (const auto& [exp, c] : terms_) {
    if (exp[var] == 0) continue;
    Exponent e = exp;
    --e[var];
    d.add_term(e, c * exp[var]);
  }
  return d;
}

int RealPoly::total_degree() const {
  int deg = 0;
  for (const auto& [exp, c] : terms_) {
    int s = 0;
    for (int e : exp) s += e;
    deg = std::max(deg, s);
  }
  return deg;
}

double RealPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [exp, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

RealPoly RealPoly::trimmed(double tol) const {
  RealPoly r(nvars_);
  for (const auto& [exp, c] : terms_) {
    if (std::abs(c) > tol) r.terms_.emplace(exp, c);
  }
  return r;
}

RealPoly& RealPoly::operator+=(const RealPoly& o) {
  check_arity(nvars_, o.nvars_);
  for (const auto& [exp, c] : o.terms_) add_term(exp, c);
  return *this;
}

RealPoly& RealPoly::operator-=(const RealPoly& o) {
  check_arity(nvars_, o.nvars_);
  for (const auto& [exp, c] : o.terms_) add_term(exp, -c);
  return *this;
}

RealPoly& RealPoly::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [exp, c] : terms_) c *= s;
  return *this;
}

RealPoly operator*(const RealPoly& l, const RealPoly& r) {
  check_arity(l.nvars_, r.nvars_);
  RealPoly out(l.nvars_);
  for (const auto& [el, cl] : l.terms_) {
    for (const auto& [er, cr] : r.terms_) {
      Exponent e(el.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = el[i] + er[i];
      out.add_term(e, cl * cr);
    }
  }
  return out;
}

Eigen::MatrixXd PolyMap::jacobian(const std::vector<double>& x) const {
  Eigen::MatrixXd jac(2, real_vars());
  for (int k = 0; k < real_vars(); ++k) {
    jac(0, k) = f.u.derivative(k).eval(x);
    jac(1, k) = f.v.derivative(k).eval(x);
  }
  return jac;
}

PolyPair star(const PerplexAlgebra& alg, const PolyPair& l, const PolyPair& r) {
  const auto& a = alg.params().a;
  const auto& b = alg.params().b;
  const RealPoly p11 = l.u * r.u;
  const RealPoly p12 = l.u * r.v + l.v * r.u;
  const RealPoly p22 = l.v * r.v;
  return {a[0] * p11 + a[1] * p12 + a[2] * p22, b[0] * p11 + b[1] * p12 + b[2] * p22};
}

PolyPair star(const PerplexAlgebra& alg, const Perplex& c, const PolyPair& r) {
  const Mat2 l = alg.left_mult_matrix(c);
  return {l(0, 0) * r.u + l(0, 1) * r.v, l(1, 0) * r.u + l(1, 1) * r.v};
}

PolyPair constant_pair(int nvars, const Perplex& c) {
  return {RealPoly::constant(nvars, c.x1), RealPoly::constant(nvars, c.x2)};
}

std::vector<double> flatten(const std::vector<Perplex>& p) {
  std::vector<double> x;
  x.reserve(2 * p.size());
  for (const auto& e : p) {
    x.push_back(e.x1);
    x.push_back(e.x2);
  }
  return x;
}

}  // namespace perplex
