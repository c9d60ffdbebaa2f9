#include "perplex/cli.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "perplex/io.hpp"

namespace perplex::cli {

namespace {

using io::Json;

struct Context {
  Json input;
  std::optional<std::uint64_t> seed;
  double tol_eq = tol::kEq;
  double tol_iso = tol::kIso;
  double tol_fit = tol::kFit;
  std::string report_path;
};

using Handler = std::function<int(const Context&, std::ostream&)>;

// -0.0 prints as "-0.0"; fold it into 0.0.
void fold_negative_zero(Json& j) {
  if (j.is_number_float() && j.get<double>() == 0.0) {
    j = 0.0;
  } else if (j.is_structured()) {
    for (auto& v : j) fold_negative_zero(v);
  }
}

void emit(std::ostream& os, Json j) {
  fold_negative_zero(j);
  os << j.dump(2) << '\n';
}

std::uint64_t seed_or_default(const Context& ctx) { return ctx.seed.value_or(0); }

std::uint64_t required_seed(const Context& ctx, const std::string& command) {
  if (!ctx.seed) throw InvalidArgument(command + " requires --seed");
  return *ctx.seed;
}

PerplexAlgebra algebra(const Context& ctx) {
  return PerplexAlgebra(io::read_params(ctx.input), ctx.tol_eq);
}

const Json& field(const Context& ctx, const std::string& key) {
  if (!ctx.input.is_object() || !ctx.input.contains(key)) {
    throw ParseError("missing field '" + key + "'");
  }
  return ctx.input.at(key);
}

int cmd_validate(const Context& ctx, std::ostream& os) {
  const ValidationReport r = validate_params(io::read_params(ctx.input), ctx.tol_eq);
  emit(os, io::to_json(r));
  return r.valid ? kOk : kNegative;
}

int cmd_classify(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  const Classification c = classify(alg, ctx.tol_eq);
  Json j = io::to_json(c);
  j["isoVerified"] = c.iso_residual <= ctx.tol_iso * alg.scale();
  emit(os, j);
  return kOk;
}

int cmd_mul(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  const Perplex r =
      alg.mul(io::read_perplex(field(ctx, "x")), io::read_perplex(field(ctx, "y")));
  emit(os, Json{{"result", io::to_json(r)}});
  return kOk;
}

int cmd_inv(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  emit(os, Json{{"result", io::to_json(alg.inverse(io::read_perplex(field(ctx, "x"))))}});
  return kOk;
}

int cmd_norm(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  emit(os, Json{{"result", alg.norm(io::read_perplex(field(ctx, "x")))}});
  return kOk;
}

int cmd_conj(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  emit(os, Json{{"result", io::to_json(alg.conjugate(io::read_perplex(field(ctx, "x"))))}});
  return kOk;
}

int cmd_pow(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  const int n = io::get_int_or(ctx.input, "n", -1);
  emit(os, Json{{"result", io::to_json(alg.power(io::read_perplex(field(ctx, "x")), n))}});
  return kOk;
}

int cmd_conic(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  emit(os, Json{{"conic", alg.zero_divisor_conic()},
                {"nilpotentDirections", io::to_json(nilpotent_directions(alg, ctx.tol_eq))}});
  return kOk;
}

int cmd_gcr_check(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  const GcrResidual r = gcr_residual(io::read_poly_map(field(ctx, "map")), alg, ctx.tol_eq);
  emit(os, io::to_json(r));
  return r.zero ? kOk : kNegative;
}

int cmd_derive(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  Json j;
  if (ctx.input.contains("poly")) {
    const PerplexPoly f = io::read_perplex_poly(ctx.input.at("poly"));
    const PerplexPoly d = poly_derivative(f);
    j["derivative"] = io::to_json(d);
    if (ctx.input.contains("x")) {
      j["value"] = io::to_json(poly_eval(d, io::read_perplex(ctx.input.at("x")), alg));
    }
  } else {
    const PolyMap m = io::read_poly_map(field(ctx, "map"));
    const PolyPair d = derivative_map(m, alg, ctx.tol_eq);
    j["derivative"] = Json{{"u", io::to_json(d.u)}, {"v", io::to_json(d.v)}};
    if (ctx.input.contains("x")) {
      j["value"] = io::to_json(
          derivative_from_partials(m, alg, io::read_perplex(ctx.input.at("x")), ctx.tol_eq));
    }
  }
  emit(os, j);
  return kOk;
}

int cmd_fit_linear(const Context& ctx, std::ostream& os) {
  const LinearFitResult r = fit_linear(io::read_mat2_flat(field(ctx, "J")), seed_or_default(ctx));
  emit(os, io::to_json(r));
  return r.status == LinearFitStatus::Exact ? kOk : kNegative;
}

int cmd_approx_linear(const Context& ctx, std::ostream& os) {
  const int n = io::get_int_or(ctx.input, "n", 5);
  emit(os, io::to_json(
               approx_linear_sequence(io::read_mat2_flat(field(ctx, "J")), n, seed_or_default(ctx))));
  return kOk;
}

int cmd_fit_quad(const Context& ctx, std::ostream& os) {
  const QuadFitResult r =
      fit_quadratic(io::read_poly_map(field(ctx, "map")), seed_or_default(ctx), ctx.tol_fit);
  emit(os, io::to_json(r));
  return r.status == QuadFitStatus::Exact && r.params ? kOk : kNegative;
}

int cmd_approx_quad(const Context& ctx, std::ostream& os) {
  const QuadApprox r = approx_quadratic(io::read_poly_map(field(ctx, "map")),
                                        io::get_number(ctx.input, "eps"), ctx.tol_fit);
  emit(os, io::to_json(r));
  return kOk;
}

int cmd_grad(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  const PerplexPolyN f = io::read_perplex_poly_n(field(ctx, "f"));
  const PerplexPoint p = io::read_perplex_list(field(ctx, "p"));
  Json j{{"gradient", io::to_json(gradient(f, p, alg))},
         {"criticality", io::to_json(is_critical(f, p, alg, ctx.tol_eq))}};
  if (ctx.input.contains("w")) {
    j["directional"] = io::to_json(
        directional_derivative(f, p, io::read_perplex_list(ctx.input.at("w")), alg));
  }
  emit(os, j);
  return kOk;
}

int cmd_critical(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  const CriticalLocus loc = critical_locus(
      io::read_poly_map(field(ctx, "map")), alg, io::get_int_or(ctx.input, "gridRes", 101),
      io::get_number_or(ctx.input, "radius", 1.0), ctx.tol_eq);
  emit(os, Json{{"normPoly", io::to_json(loc.norm_poly)}, {"samples", io::to_json(loc.samples)}});
  return kOk;
}

int cmd_loja_scan(const Context& ctx, std::ostream& os) {
  const std::uint64_t seed = required_seed(ctx, "loja-scan");
  const PerplexAlgebra alg = algebra(ctx);
  LojaOptions opts;
  opts.r_min = io::get_number_or(ctx.input, "rMin", opts.r_min);
  opts.r_max = io::get_number_or(ctx.input, "rMax", opts.r_max);
  opts.samples = io::get_int_or(ctx.input, "samples", opts.samples);
  opts.bins = io::get_int_or(ctx.input, "bins", opts.bins);
  emit(os, io::to_json(loja_scan(io::read_perplex_poly_n(field(ctx, "f")), alg, opts, seed)));
  return kOk;
}

int cmd_fiber_count(const Context& ctx, std::ostream& os) {
  const std::uint64_t seed = required_seed(ctx, "fiber-count");
  const PerplexAlgebra alg = algebra(ctx);
  TrivialityOptions opts;
  opts.epsilon = io::get_number_or(ctx.input, "epsilon", opts.epsilon);
  opts.eta = io::get_number_or(ctx.input, "eta", opts.eta);
  opts.probes_per_component = io::get_int_or(ctx.input, "probes", opts.probes_per_component);
  opts.target_grid = io::get_int_or(ctx.input, "targetGrid", opts.target_grid);
  opts.seed_grid = io::get_int_or(ctx.input, "seedGrid", opts.seed_grid);
  const FibrationReport r =
      local_triviality_check(io::read_perplex_poly_n(field(ctx, "f")), alg, opts, seed);
  emit(os, io::to_json(r));
  return r.verified ? kOk : kNegative;
}

int cmd_fiber_cloud(const Context& ctx, std::ostream& os) {
  const std::uint64_t seed = required_seed(ctx, "fiber-cloud");
  const PerplexAlgebra alg = algebra(ctx);
  CloudOptions opts;
  opts.epsilon = io::get_number_or(ctx.input, "epsilon", opts.epsilon);
  opts.eta = io::get_number_or(ctx.input, "eta", opts.eta);
  opts.cloud_size = io::get_int_or(ctx.input, "cloudSize", opts.cloud_size);
  const FiberCloud cloud = fiber_cloud(io::read_perplex_poly_n(field(ctx, "f")), alg,
                                       io::read_perplex(field(ctx, "c")), opts, seed);
  io::write_csv(os, {"x11", "x12", "x21", "x22"}, cloud.points);
  if (!ctx.report_path.empty()) {
    std::ofstream report(ctx.report_path, std::ios::binary);
    if (!report) throw InvalidArgument("cannot open report file " + ctx.report_path);
    emit(report, io::to_json(cloud));
  }
  return kOk;
}

int cmd_discriminant(const Context& ctx, std::ostream& os) {
  const PerplexAlgebra alg = algebra(ctx);
  const std::vector<Perplex> pts = critical_values(
      io::read_perplex_poly_n(field(ctx, "f")), alg, io::get_number_or(ctx.input, "epsilon", 1.0),
      io::get_number_or(ctx.input, "eta", 0.05), io::get_int_or(ctx.input, "gridRes", 256));
  std::vector<std::vector<double>> rows;
  for (const auto& p : pts) rows.push_back({p.x1, p.x2});
  io::write_csv(os, {"c1", "c2"}, rows);
  return kOk;
}

const std::map<std::string, std::pair<Handler, std::string>>& commands() {
  static const std::map<std::string, std::pair<Handler, std::string>> table = {
      {"validate", {cmd_validate, "check conditions (i)-(iv) on {a, b}"}},
      {"classify", {cmd_classify, "discriminant, type and model isomorphism"}},
      {"mul", {cmd_mul, "product x * y"}},
      {"inv", {cmd_inv, "inverse of x"}},
      {"norm", {cmd_norm, "perplex norm N(x)"}},
      {"conj", {cmd_conj, "perplex conjugate of x"}},
      {"pow", {cmd_pow, "power x^n, 0 <= n <= 64"}},
      {"conic", {cmd_conic, "zero-divisor conic and nilpotent directions"}},
      {"gcr-check", {cmd_gcr_check, "symbolic GCR residual of a polynomial map"}},
      {"derive", {cmd_derive, "derivative of a perplex polynomial or polynomial map"}},
      {"fit-linear", {cmd_fit_linear, "algebra making x -> J x perplex-linear"}},
      {"approx-linear", {cmd_approx_linear, "exactly fitted sequence J_k -> J"}},
      {"fit-quad", {cmd_fit_quad, "T matrix and algebra for a quadratic map"}},
      {"approx-quad", {cmd_approx_quad, "nearby quadratic map with an exact T"}},
      {"grad", {cmd_grad, "perplex gradient and criticality at a point"}},
      {"critical", {cmd_critical, "critical locus N(f') = 0 of a map"}},
      {"loja-scan", {cmd_loja_scan, "empirical Lojasiewicz exponent"}},
      {"fiber-count", {cmd_fiber_count, "fiber counts over discriminant complement"}},
      {"fiber-cloud", {cmd_fiber_cloud, "sampled fiber of a two-variable map (CSV)"}},
      {"discriminant", {cmd_discriminant, "discriminant samples (CSV)"}},
  };
  return table;
}

void apply_tolerance(Context& ctx, const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) throw InvalidArgument("--tol expects name=value, got " + arg);
  const std::string name = arg.substr(0, eq);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(arg.substr(eq + 1), &used);
    if (used != arg.size() - eq - 1) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw InvalidArgument("--tol value is not a number: " + arg);
  }
  if (!(value > 0.0) || !std::isfinite(value)) throw InvalidArgument("tolerances must be positive");
  if (name == "eq") {
    ctx.tol_eq = value;
  } else if (name == "iso") {
    ctx.tol_iso = value;
  } else if (name == "fit") {
    ctx.tol_fit = value;
  } else {
    throw InvalidArgument("unknown tolerance '" + name + "' (eq, iso, fit)");
  }
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Perplex algebra toolkit", "perplex"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string input_path, output_path, report_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tols;
  app.add_option("--input", input_path, "input JSON file (default: stdin)");
  app.add_option("--output", output_path, "output file (default: stdout)");
  app.add_option("--seed", seed, "64-bit seed; required by loja-scan, fiber-count, fiber-cloud");
  app.add_option("--tol", tols, "tolerance override name=value (eq, iso, fit)");
  app.add_option("--report", report_path, "fiber-cloud: JSON summary file");
  for (const auto& [name, entry] : commands()) app.add_subcommand(name, entry.second);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return kError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Context ctx;
    ctx.seed = seed;
    ctx.report_path = report_path;
    for (const auto& t : tols) apply_tolerance(ctx, t);

    std::string text;
    if (input_path.empty()) {
      text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
      std::ifstream file(input_path, std::ios::binary);
      if (!file) throw InvalidArgument("cannot open input file " + input_path);
      text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
    }
    ctx.input = io::parse(text);

    std::ostringstream buffer;
    const int code = commands().at(name).first(ctx, buffer);
    if (output_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(output_path, std::ios::binary);
      if (!file) throw InvalidArgument("cannot open output file " + output_path);
      file << buffer.str();
    }
    return code;
  } catch (const DomainError& e) {
    report_error(err, e.kind(), e.what());
    return kError;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kError;
  }
}

}  // namespace perplex::cli
