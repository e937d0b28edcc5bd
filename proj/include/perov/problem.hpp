#pragma once

// Line-oriented problem files.
//
//   # comment
//   n      = 2
//   W      = 1,0.5; 0.5,1          matrices: rows separated by ';'
//   f.kind = affine                affine | nonlinear
//   f.M    = 0.5,0.25; 0.25,0.5
//   f.b    = 1,1                   vectors: comma separated
//   f.L    = ...                   nonlinear only: inner matrix
//   f.d    = ...                   nonlinear only: inner offset
//   f.tags = tanh,identity         nonlinear only
//   g.*                            optional second map, same keys as f
//   gsolve.*                       optional preimage map for g, same keys
//   k      = 0.5,0.25; 0.25,0.5    contraction matrix, or
//   lambda = 0.5,0; 0,0.5          linear comparison function (exactly one)
//   x0     = 0,0
//   eps    = 1e-10                 scalar, or a vector of positive entries
//   budget = 100000
//   seed   = 42
//   samples = 10000                sample count for the sampled checks
//
// Keys may appear in any order, at most once each. Unknown keys are errors.

#include "perov/map_spec.hpp"
#include "perov/ordered_algebra.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace perov {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& origin, std::size_t line, const std::string& field,
               const std::string& what);

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

struct ProblemFile {
    std::size_t n = 0;
    SquareMatrix W;
    std::optional<MapSpec> f;
    std::optional<MapSpec> g;
    std::optional<MapSpec> g_solve;
    std::optional<SquareMatrix> k;
    std::optional<SquareMatrix> lambda;
    ModuleVector x0;
    /// Always expanded to a vector; eps_scalar remembers the shorthand form.
    ModuleVector eps;
    bool eps_scalar = false;
    std::size_t budget = 100'000;
    std::uint64_t seed = 1;
    std::size_t samples = 10'000;

    friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

/// Throws ParseError with the line number and key of the first problem.
ProblemFile parse_problem_text(std::string_view text, const std::string& origin = "<input>");
/// Throws ParseError (line 0) when the file cannot be read.
ProblemFile parse_problem(const std::string& path);

/// Canonical text form; parse_problem_text(emit_problem(p)) == p.
std::string emit_problem(const ProblemFile& p);

} // namespace perov
