#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "perplex/algebra.hpp"
#include "perplex/approximation.hpp"
#include "perplex/calculus.hpp"
#include "perplex/fibration.hpp"
#include "perplex/multivar.hpp"
#include "perplex/structure.hpp"

namespace perplex::io {

using Json = nlohmann::ordered_json;

/// Parses text, mapping syntax errors to ParseError.
Json parse(const std::string& text);

// Readers throw ParseError when the value does not match the schema.
AlgebraParams read_params(const Json& j);
Perplex read_perplex(const Json& j);
std::vector<Perplex> read_perplex_list(const Json& j);
/// {"nvars": n, "u": [{"exp": [...], "c": real}], "v": [...]}
PolyMap read_poly_map(const Json& j);
/// {"coeffs": [[x1, x2], ...]}
PerplexPoly read_perplex_poly(const Json& j);
/// {"nvars": n, "terms": [{"exp": [...], "c": [x1, x2]}]}
PerplexPolyN read_perplex_poly_n(const Json& j);
/// Flat row-major [p, r, q, s].
Mat2 read_mat2_flat(const Json& j);

double get_number(const Json& obj, const std::string& key);
double get_number_or(const Json& obj, const std::string& key, double fallback);
int get_int_or(const Json& obj, const std::string& key, int fallback);

Json to_json(const AlgebraParams& p);
Json to_json(const Perplex& x);
Json to_json(const std::vector<Perplex>& xs);
Json to_json(const Mat2& m);
Json to_json(const RealPoly& p);
Json to_json(const PolyMap& m);
Json to_json(const PerplexPoly& f);
Json to_json(const PerplexPolyN& f);
Json to_json(const ValidationReport& r);
Json to_json(const Classification& c);
Json to_json(const GcrResidual& r);
Json to_json(const LinearFitResult& r);
Json to_json(const std::vector<LinearApprox>& seq);
Json to_json(const QuadFitResult& r);
Json to_json(const QuadApprox& r);
Json to_json(const CriticalReport& r);
Json to_json(const LojaFit& r);
Json to_json(const FibrationReport& r);
Json to_json(const FiberCloud& c);

/// Fixed-precision real formatting (17 significant digits) for CSV output.
std::string format_real(double v);
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace perplex::io
