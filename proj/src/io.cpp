#include "perplex/io.hpp"

#include <cmath>
#include <cstdio>

namespace perplex::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

const Json& member(const Json& obj, const std::string& key) {
  if (!obj.is_object()) bad("expected a JSON object holding '" + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) bad("missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(what + " must be finite");
  return v;
}

int integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) bad(what + " must be an integer");
  return j.get<int>();
}

std::array<double, 3> triple(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) bad(what + " must be a list of three numbers");
  return {number(j[0], what), number(j[1], what), number(j[2], what)};
}

Exponent exponent(const Json& j, std::size_t len, const std::string& what) {
  if (!j.is_array() || j.size() != len) {
    bad(what + " exponent must list " + std::to_string(len) + " integers");
  }
  Exponent e;
  for (const auto& v : j) {
    const int k = integer(v, what + " exponent");
    if (k < 0) bad(what + " exponent must be nonnegative");
    e.push_back(k);
  }
  return e;
}

RealPoly real_poly(const Json& j, int nreal, const std::string& what) {
  if (!j.is_array()) bad(what + " must be a list of terms");
  RealPoly p(nreal);
  for (const auto& t : j) {
    p.add_term(exponent(member(t, "exp"), nreal, what), number(member(t, "c"), what));
  }
  return p;
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

AlgebraParams read_params(const Json& j) {
  return {triple(member(j, "a"), "a"), triple(member(j, "b"), "b")};
}

Perplex read_perplex(const Json& j) {
  if (!j.is_array() || j.size() != 2) bad("a perplex number must be [x1, x2]");
  return {number(j[0], "x1"), number(j[1], "x2")};
}

std::vector<Perplex> read_perplex_list(const Json& j) {
  if (!j.is_array()) bad("expected a list of perplex numbers");
  std::vector<Perplex> out;
  for (const auto& e : j) out.push_back(read_perplex(e));
  return out;
}

PolyMap read_poly_map(const Json& j) {
  const int n = integer(member(j, "nvars"), "nvars");
  if (n < 1) bad("nvars must be positive");
  return PolyMap(n, real_poly(member(j, "u"), 2 * n, "u"), real_poly(member(j, "v"), 2 * n, "v"));
}

PerplexPoly read_perplex_poly(const Json& j) {
  return {read_perplex_list(member(j, "coeffs"))};
}

PerplexPolyN read_perplex_poly_n(const Json& j) {
  PerplexPolyN f;
  f.nvars = integer(member(j, "nvars"), "nvars");
  if (f.nvars < 1) bad("nvars must be positive");
  const Json& terms = member(j, "terms");
  if (!terms.is_array()) bad("terms must be a list");
  for (const auto& t : terms) {
    Exponent e = exponent(member(t, "exp"), f.nvars, "term");
    for (int k : e) {
      if (k > 64) bad("term exponents must not exceed 64");
    }
    f.terms.push_back({std::move(e), read_perplex(member(t, "c"))});
  }
  return f;
}

Mat2 read_mat2_flat(const Json& j) {
  if (!j.is_array() || j.size() != 4) bad("J must be a flat list [p, r, q, s]");
  Mat2 m;
  m << number(j[0], "J"), number(j[1], "J"), number(j[2], "J"), number(j[3], "J");
  return m;
}

double get_number(const Json& obj, const std::string& key) { return number(member(obj, key), key); }

double get_number_or(const Json& obj, const std::string& key, double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return number(obj.at(key), key);
}

int get_int_or(const Json& obj, const std::string& key, int fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return integer(obj.at(key), key);
}

Json to_json(const AlgebraParams& p) { return Json{{"a", p.a}, {"b", p.b}}; }

Json to_json(const Perplex& x) { return Json::array({x.x1, x.x2}); }

Json to_json(const std::vector<Perplex>& xs) {
  Json arr = Json::array();
  for (const auto& x : xs) arr.push_back(to_json(x));
  return arr;
}

Json to_json(const Mat2& m) {
  return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}

Json to_json(const RealPoly& p) {
  Json arr = Json::array();
  for (const auto& [exp, c] : p.terms()) arr.push_back(Json{{"exp", exp}, {"c", c}});
  return arr;
}

Json to_json(const PolyMap& m) {
  return Json{{"nvars", m.nvars}, {"u", to_json(m.u())}, {"v", to_json(m.v())}};
}

Json to_json(const PerplexPoly& f) { return Json{{"coeffs", to_json(f.coeffs)}}; }

Json to_json(const PerplexPolyN& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms) terms.push_back(Json{{"exp", t.exp}, {"c", to_json(t.c)}});
  return Json{{"nvars", f.nvars}, {"terms", terms}};
}

Json to_json(const ValidationReport& r) {
  Json residuals = Json::object();
  const char* names[4] = {"i", "ii", "iii", "iv"};
  for (int k = 0; k < 4; ++k) residuals[names[k]] = r.residuals[k];
  return Json{{"valid", r.valid},
              {"specialCase", r.special_case},
              {"failures", r.failures},
              {"residuals", residuals},
              {"threshold", r.threshold}};
}

Json to_json(const Classification& c) {
  return Json{{"delta", c.delta},
              {"band", c.band},
              {"kind", to_string(c.kind)},
              {"j", to_json(c.j)},
              {"Lj", to_json(c.lj)},
              {"charPoly", Json{{"trace", c.trace}, {"det", c.det}}},
              {"iso", to_json(c.iso)},
              {"isoResidual", c.iso_residual}};
}

Json to_json(const GcrResidual& r) {
  Json parts = Json::array();
  for (const auto& p : r.residual) parts.push_back(Json{{"u", to_json(p.u)}, {"v", to_json(p.v)}});
  return Json{{"zero", r.zero}, {"maxAbs", r.max_abs}, {"threshold", r.threshold},
              {"residual", parts}};
}

Json to_json(const LinearFitResult& r) {
  Json j{{"status", r.status == LinearFitStatus::Exact ? "Exact" : "Infeasible"}};
  if (r.status == LinearFitStatus::Exact) {
    j["params"] = to_json(r.params);
    j["derivative"] = to_json(r.derivative);
    j["residual"] = r.residual;
    j["start"] = r.start;
  } else {
    j["certificate"] = r.certificate;
    j["proven"] = r.proven;
    if (!r.violated.empty()) j["violated"] = r.violated;
  }
  return j;
}

Json to_json(const std::vector<LinearApprox>& seq) {
  Json arr = Json::array();
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const Mat2& m = seq[k].jk;
    arr.push_back(Json{{"k", k + 1},
                       {"J", Json::array({m(0, 0), m(0, 1), m(1, 0), m(1, 1)})},
                       {"params", to_json(seq[k].params)},
                       {"distance", seq[k].distance}});
  }
  return Json{{"sequence", arr}};
}

Json to_json(const QuadFitResult& r) {
  Json j{{"status", r.status == QuadFitStatus::Exact ? "Exact" : "Inconsistent"},
         {"T", to_json(r.t)},
         {"residual", r.residual},
         {"threshold", r.threshold}};
  if (r.params) j["params"] = to_json(*r.params);
  if (!r.params_error.empty()) j["paramsError"] = r.params_error;
  return j;
}

Json to_json(const QuadApprox& r) {
  return Json{{"map", to_json(r.map)}, {"distance", r.distance}, {"T", to_json(r.t)}};
}

Json to_json(const CriticalReport& r) {
  return Json{{"critical", r.critical},
              {"rank", r.rank},
              {"singularValues", r.singular_values},
              {"partialNorms", r.partial_norms}};
}

Json to_json(const LojaFit& r) {
  Json bins = Json::array();
  for (const auto& b : r.bins) {
    bins.push_back(Json{{"logF", b.log_f}, {"minLogGrad", b.min_log_grad}, {"count", b.count}});
  }
  return Json{{"thetaHat", r.theta_hat},
              {"cHat", r.c_hat},
              {"violations", r.violations},
              {"sampleCount", r.sample_count},
              {"drawn", r.drawn},
              {"degenerateAlgebra", r.degenerate_algebra},
              {"warnings", r.warnings},
              {"bins", bins}};
}

Json to_json(const FibrationReport& r) {
  Json comps = Json::array();
  for (const auto& c : r.components) {
    Json counts = Json::array();
    for (std::size_t k = 0; k < c.counts.size(); ++k) {
      counts.push_back(Json{{"target", to_json(c.targets[k])}, {"count", c.counts[k]}});
    }
    comps.push_back(Json{{"cells", c.cells},
                         {"majority", c.majority},
                         {"constant", c.constant},
                         {"lowConfidence", c.low_confidence},
                         {"maskBoundaryFraction", c.mask_boundary_fraction},
                         {"fiberCounts", counts}});
  }
  return Json{{"algebraKind", to_string(r.kind)},
              {"epsilon", r.epsilon},
              {"eta", r.eta},
              {"halvings", r.halvings},
              {"verified", r.verified},
              {"consistent", r.consistent},
              {"maxResidual", r.max_residual},
              {"componentCount", r.components.size()},
              {"components", comps},
              {"discriminantSamples", r.discriminant.size()}};
}

Json to_json(const FiberCloud& c) {
  return Json{{"points", c.points.size()},
              {"seeds", c.seeds},
              {"maxResidual", c.max_residual},
              {"linkRadius", c.link_radius},
              {"connectivity", c.connectivity},
              {"onDiscriminant", c.on_discriminant},
              {"warnings", c.warnings}};
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_real(row[k]);
    os << '\n';
  }
}

}  // namespace perplex::io
