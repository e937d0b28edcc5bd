#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace perov::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitNumerical = 1, ///< NaN/overflow in a map, or a routine that did not converge
    kExitHypothesis = 2, ///< hypothesis violated or contraction not certified
    kExitBudget = 3,
    kExitUsage = 64,
};

/// Runs one subcommand. args excludes the program name, e.g.
/// {"solve-perov", "problems/linear44.prob"}. The report goes to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

} // namespace perov::cli
