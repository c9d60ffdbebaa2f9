#pragma once

#include <istream>
#include <ostream>

namespace perplex::cli {

/// Exit codes of the command-line tool.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
/// The command ran and produced a negative answer (invalid params,
/// infeasible fit, nonzero GCR residual, unverified fibration).
inline constexpr int kNegative = 2;

/// Runs one command line. Input is read from --input or `in`, results go to
/// --output or `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace perplex::cli
