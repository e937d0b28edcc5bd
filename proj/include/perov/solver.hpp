#pragma once

// Iteration engines for fixed points, points of coincidence and common fixed
// points under a vector-valued metric, plus the sampled hypothesis checks
// that go with them.
//
// All three engines build the same sequence. Starting from x_0, each step
// picks x_{n+1} with g(x_{n+1}) = f(x_n) through a caller-supplied preimage
// oracle. The trace records z_n = g(x_n), so z_0 = g(x_0) and z_{n+1} = f(x_n)
// (for g = identity this is the plain Picard sequence x_n). The step distance
// d(z_n, z_{n+1}) = d(g x_n, f x_n) is at the same time the coincidence
// residual of the candidate x_n.

#include "perov/contraction.hpp"
#include "perov/map_spec.hpp"
#include "perov/ordered_algebra.hpp"
#include "perov/rmetric.hpp"
#include "perov/sampling.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace perov {

inline constexpr std::size_t kDefaultBudget = 100'000;
/// Comparison solver: the previous step distance must fall below safety * eps
/// before convergence is declared.
inline constexpr double kStepSafety = 0.5;
/// Commutator tolerance for the weak-compatibility verdict.
inline constexpr double kWeakCompatibilityTol = 1e-8;
/// Relative accuracy demanded of a preimage oracle: |g(x) - y|_inf <= tol * max(1, |y|_inf).
inline constexpr double kPreimageTol = 1e-12;

/// Returns some x with g(x) = y.
using PreimageOracle = std::function<ModuleVector(const ModuleVector&)>;

PreimageOracle preimage_oracle(const MapSpec& g_inverse);

enum class SolveStatus { converged, budget_exhausted, hypothesis_violated };

std::string to_string(SolveStatus s);

struct IterationTrace {
    /// z_0, z_1, ..., one longer than step_dists and bounds.
    std::vector<ModuleVector> points;
    /// d(z_n, z_{n+1})
    std::vector<ModuleVector> step_dists;
    /// Certified solvers: k^n S d(z_1, z_0), a bound on d(z_n, limit).
    /// Comparison solver: phi^n(d(z_1, z_0)), a bound on d(z_n, z_{n+1}).
    std::vector<ModuleVector> bounds;
    SolveStatus status = SolveStatus::budget_exhausted;
    /// Index n of the last recorded step.
    std::size_t iterations = 0;
    /// Step at which an online hypothesis check failed.
    std::optional<std::size_t> violation_step;
    std::string message;
};

struct SolveResult {
    /// Fixed point, or coincidence point p.
    ModuleVector point;
    /// Point of coincidence q = g(p); equals point for fixed-point problems.
    ModuleVector value;
    /// d(f p, g p)
    ModuleVector residual;
    IterationTrace trace;
    std::optional<ContractionCertificate> certificate;
    std::optional<ComparisonAxiomReport> comparison_precheck;

    /// Set by the two-map solvers once a coincidence point was found.
    std::optional<bool> weakly_compatible;
    /// |f(g p) - g(f p)|_inf
    double commutator = 0.0;
    /// Reported only when weakly compatible and both fixed-point residuals
    /// are within 10 |eps|_inf.
    std::optional<ModuleVector> common_fixed_point;
    double common_residual_f = 0.0; ///< |f(w) - w|_inf
    double common_residual_g = 0.0; ///< |g(w) - w|_inf

    SolveStatus status() const noexcept { return trace.status; }
};

struct PairWitness {
    ModuleVector x;
    ModuleVector y;
    ModuleVector lhs; ///< d(f x, f y)
    ModuleVector rhs; ///< the bound it had to stay under
};

struct LipschitzReport {
    std::size_t samples_tested = 0;
    std::vector<PairWitness> violations;
    bool passed() const noexcept { return violations.empty(); }
};

struct ConditionCReport {
    std::size_t samples_tested = 0;
    /// Pairs accepted by u = d(gx,gy), u = d(gx,fx), u = d(gy,fy), first
    /// matching branch wins.
    std::array<std::size_t, 3> branch_counts{};
    std::vector<PairWitness> failures;
    bool passed() const noexcept { return failures.empty(); }
};

/// Samples pairs and checks d(f x, f y) <=_P k d(g x, g y) with kOrderSlack.
LipschitzReport verify_matrix_lipschitz(const MapSpec& f, const MapSpec& g,
                                        const SquareMatrix& k, const Metric& metric,
                                        const PointSampler& sampler, std::size_t count,
                                        std::uint64_t seed = kDefaultSeed,
                                        Execution exec = Execution::parallel);

/// Samples pairs and checks that some u in {d(gx,gy), d(gx,fx), d(gy,fy)}
/// has d(f x, f y) <=_P phi(u) with kOrderSlack.
ConditionCReport verify_condition_C(const MapSpec& f, const MapSpec& g,
                                    const ComparisonFunction& phi, const Metric& metric,
                                    const PointSampler& sampler, std::size_t count,
                                    std::uint64_t seed = kDefaultSeed,
                                    Execution exec = Execution::parallel);

/// Picard iteration x_{n+1} = f(x_n) stopped by the certificate bound.
/// Converged when d(x_n, f x_n) << eps and either k^n S d(x_1, x_0) << eps or
/// S d(x_n, x_{n+1}) << eps; both bound d(x_n, x*). Online, every step is checked against
/// d_{n} <=_P k d_{n-1} + slack; a failure ends with hypothesis_violated.
SolveResult perov_solve(const MapSpec& f, const WeightedMatrixMetric& metric,
                        const ContractionCertificate& cert, const ModuleVector& x0,
                        const ModuleVector& eps, std::size_t budget = kDefaultBudget);

/// Jungck iteration f(x_n) = g(x_{n+1}) with the same stopping rule applied to
/// d(g x_1, g x_0). Afterwards weak compatibility is evaluated at the
/// coincidence point and, when it holds, the common fixed point is reported.
/// Throws HypothesisBreach when g_solve misses its target.
SolveResult jungck_solve(const MapSpec& f, const MapSpec& g, const PreimageOracle& g_solve,
                         const WeightedMatrixMetric& metric, const ContractionCertificate& cert,
                         const ModuleVector& x0, const ModuleVector& eps,
                         std::size_t budget = kDefaultBudget);

inline constexpr std::size_t kComparisonPrecheckSamples = 256;

/// Jungck iteration for a pair satisfying the comparison-function contraction
/// condition. phi is first run through check_comparison_axioms; a failing
/// precheck ends with hypothesis_violated before any step is taken. Steps are
/// checked online against d_n <=_P phi(d_{n-1}) + slack. Converges when
/// d_{n-1} << 0.5 eps and d_n << eps, or exits at once when a step distance
/// is exactly zero.
SolveResult comparison_solve(const MapSpec& f, const MapSpec& g, const PreimageOracle& g_solve,
                             const ComparisonFunction& phi, const WeightedMatrixMetric& metric,
                             const ModuleVector& x0, const ModuleVector& eps,
                             std::size_t budget = kDefaultBudget,
                             std::uint64_t seed = kDefaultSeed);

/// A nonnegative k with d(f x, f y) <=_P k d(x, y) for the affine map
/// f = M x + b under the weighted metric: the positive part of W |M| W^-1.
SquareMatrix affine_lipschitz_matrix(const SquareMatrix& M, const WeightedMatrixMetric& metric);

} // namespace perov
