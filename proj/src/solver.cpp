#include "perov/solver.hpp"

#include "perov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace perov {

std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::budget_exhausted: return "budget_exhausted";
    case SolveStatus::hypothesis_violated: return "hypothesis_violated";
    }
    return "unknown";
}

PreimageOracle preimage_oracle(const MapSpec& g_inverse)
{
    return [inv = g_inverse](const ModuleVector& y) { return inv(y); };
}

namespace {

bool is_zero(const ModuleVector& v)
{
    return std::all_of(v.values().begin(), v.values().end(), [](double x) { return x == 0.0; });
}

/// Which contraction hypothesis drives the stopping rule.
struct Contraction {
    const ContractionCertificate* cert = nullptr;
    const ComparisonFunction* phi = nullptr;
};

struct Problem {
    const MapSpec& f;
    const MapSpec& g;
    const PreimageOracle& g_solve;
    const WeightedMatrixMetric& metric;
    Contraction rule;
};

void validate(const Problem& p, const ModuleVector& x0, const ModuleVector& eps,
              std::size_t budget)
{
    const std::size_t n = p.metric.dim();
    if (p.f.dim() != n || p.g.dim() != n || x0.dim() != n || eps.dim() != n)
        throw UsageError("solver: map, metric, start and tolerance dimensions must agree");
    if (!x0.all_finite()) throw UsageError("solver: start point must be finite");
    if (!OrthantCone(n).interior(eps))
        throw UsageError("solver: tolerance vector must be strictly positive");
    if (budget == 0) throw UsageError("solver: budget must be >= 1");
    if (p.rule.cert && p.rule.cert->k.dim() != n)
        throw UsageError("solver: certificate dimension does not match the problem");
}

ModuleVector next_point(const Problem& p, const ModuleVector& target, std::size_t step)
{
    ModuleVector x = p.g_solve(target);
    if (x.dim() != target.dim() || !x.all_finite())
        throw HypothesisBreach("preimage oracle returned an invalid point at step " +
                               std::to_string(step));
    const double miss = (p.g(x) - target).norm_inf();
    if (!(miss <= kPreimageTol * std::max(1.0, target.norm_inf()))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "preimage oracle missed f(x_n) by " << miss << " at step " << step
            << "; the range of g does not cover the range of f there";
        throw HypothesisBreach(msg.str());
    }
    return x;
}

SolveResult iterate(const Problem& p, const ModuleVector& x0, const ModuleVector& eps,
                    std::size_t budget)
{
    validate(p, x0, eps, budget);
    const std::size_t n = x0.dim();
    const OrthantCone cone(n);
    const ModuleVector slack = ModuleVector::constant(n, kOrderSlack);
    const ModuleVector step_eps = kStepSafety * eps;

    SolveResult r;
    IterationTrace& tr = r.trace;
    if (p.rule.cert) r.certificate = *p.rule.cert;

    ModuleVector x = x0;
    ModuleVector gx = p.g(x);
    ModuleVector fx = p.f(x);
    ModuleVector bound;
    ModuleVector prev;
    tr.points.push_back(gx);

    for (std::size_t step = 0;; ++step) {
        const ModuleVector dist = p.metric(gx, fx);
        if (step == 0)
            bound = p.rule.cert ? p.rule.cert->S * dist : dist;
        else
            bound = p.rule.cert ? p.rule.cert->k * bound : (*p.rule.phi)(bound);

        tr.step_dists.push_back(dist);
        tr.bounds.push_back(bound);
        tr.points.push_back(fx);
        tr.iterations = step;
        r.point = x;
        r.value = gx;
        r.residual = dist;

        if (p.rule.cert) {
            if (step > 0 && !cone.leq(dist, p.rule.cert->k * prev + slack)) {
                tr.status = SolveStatus::hypothesis_violated;
                tr.violation_step = step;
                tr.message = "step distance exceeds k times the previous one";
                return r;
            }
            if (cone.ll(dist, eps) &&
                (cone.ll(bound, eps) || cone.ll(p.rule.cert->S * dist, eps))) {
                tr.status = SolveStatus::converged;
                return r;
            }
        } else {
            if (is_zero(dist)) {
                tr.status = SolveStatus::converged;
                tr.message = "stationary sequence";
                return r;
            }
            if (step > 0 && !cone.leq(dist, (*p.rule.phi)(prev) + slack)) {
                tr.status = SolveStatus::hypothesis_violated;
                tr.violation_step = step;
                tr.message = "step distance exceeds phi of the previous one";
                return r;
            }
            if (step > 0 && cone.ll(prev, step_eps) && cone.ll(dist, eps)) {
                tr.status = SolveStatus::converged;
                return r;
            }
        }

        if (step + 1 >= budget) {
            tr.status = SolveStatus::budget_exhausted;
            tr.message = "iteration budget exhausted";
            return r;
        }

        x = next_point(p, fx, step + 1);
        gx = p.g(x);
        fx = p.f(x);
        prev = dist;
    }
}

// Weak compatibility at the coincidence point and, when it holds, the common
// fixed point w = g(p), refined by a short second run started at w.
void assess_pair(SolveResult& r, const Problem& p, const ModuleVector& eps)
{
    if (r.status() != SolveStatus::converged) return;
    const ModuleVector fgp = p.f(p.g(r.point));
    const ModuleVector gfp = p.g(p.f(r.point));
    r.commutator = (fgp - gfp).norm_inf();
    r.weakly_compatible = r.commutator <= kWeakCompatibilityTol;
    if (!*r.weakly_compatible) return;

    ModuleVector w = r.value;
    try {
        const SolveResult refined = iterate(p, w, 0.1 * eps, 1000);
        if (refined.status() == SolveStatus::converged) w = refined.value;
    } catch (const std::exception&) {
        // keep the unrefined candidate
    }
    r.common_residual_f = (p.f(w) - w).norm_inf();
    r.common_residual_g = (p.g(w) - w).norm_inf();
    const double limit = 10.0 * eps.norm_inf();
    if (r.common_residual_f <= limit && r.common_residual_g <= limit) r.common_fixed_point = w;
}

} // namespace

LipschitzReport verify_matrix_lipschitz(const MapSpec& f, const MapSpec& g,
                                        const SquareMatrix& k, const Metric& metric,
                                        const PointSampler& sampler, std::size_t count,
                                        std::uint64_t seed, Execution exec)
{
    if (count == 0) throw UsageError("verify_matrix_lipschitz: count must be >= 1");
    if (!k.nonnegative()) throw UsageError("verify_matrix_lipschitz: k must be nonnegative");
    if (f.dim() != g.dim() || f.dim() != k.dim())
        throw UsageError("verify_matrix_lipschitz: dimension mismatch");

    LipschitzReport report;
    report.samples_tested = count;
    report.violations = collect_samples<PairWitness>(
        count, seed, exec, [&](std::size_t, Rng& rng) -> std::optional<PairWitness> {
            const ModuleVector x = sampler(rng);
            const ModuleVector y = sampler(rng);
            const ModuleVector lhs = metric(f(x), f(y));
            const ModuleVector rhs = k * metric(g(x), g(y));
            if (leq(lhs, rhs + ModuleVector::constant(rhs.dim(), kOrderSlack))) return std::nullopt;
            return PairWitness{x, y, lhs, rhs};
        });
    return report;
}

namespace {

struct BranchOutcome {
    int branch = -1;
    std::optional<PairWitness> failure;
};

} // namespace

ConditionCReport verify_condition_C(const MapSpec& f, const MapSpec& g,
                                    const ComparisonFunction& phi, const Metric& metric,
                                    const PointSampler& sampler, std::size_t count,
                                    std::uint64_t seed, Execution exec)
{
    if (count == 0) throw UsageError("verify_condition_C: count must be >= 1");
    if (f.dim() != g.dim()) throw UsageError("verify_condition_C: dimension mismatch");

    const auto outcomes = collect_samples<BranchOutcome>(
        count, seed, exec, [&](std::size_t, Rng& rng) -> std::optional<BranchOutcome> {
            const ModuleVector x = sampler(rng);
            const ModuleVector y = sampler(rng);
            const ModuleVector fx = f(x), fy = f(y), gx = g(x), gy = g(y);
            const ModuleVector lhs = metric(fx, fy);
            const ModuleVector candidates[3] = {metric(gx, gy), metric(gx, fx), metric(gy, fy)};
            const ModuleVector slack = ModuleVector::constant(lhs.dim(), kOrderSlack);
            ModuleVector closest;
            for (int b = 0; b < 3; ++b) {
                const ModuleVector rhs = phi(candidates[b]);
                if (leq(lhs, rhs + slack)) return BranchOutcome{b, std::nullopt};
                if (b == 0) closest = rhs;
            }
            return BranchOutcome{-1, PairWitness{x, y, lhs, closest}};
        });

    ConditionCReport report;
    report.samples_tested = count;
    for (const auto& o : outcomes) {
        if (o.branch >= 0)
            ++report.branch_counts[static_cast<std::size_t>(o.branch)];
        else
            report.failures.push_back(*o.failure);
    }
    return report;
}

SolveResult perov_solve(const MapSpec& f, const WeightedMatrixMetric& metric,
                        const ContractionCertificate& cert, const ModuleVector& x0,
                        const ModuleVector& eps, std::size_t budget)
{
    const MapSpec id = MapSpec::identity(f.dim());
    const PreimageOracle same = [](const ModuleVector& y) { return y; };
    const Problem p{f, id, same, metric, Contraction{&cert, nullptr}};
    return iterate(p, x0, eps, budget);
}

SolveResult jungck_solve(const MapSpec& f, const MapSpec& g, const PreimageOracle& g_solve,
                         const WeightedMatrixMetric& metric, const ContractionCertificate& cert,
                         const ModuleVector& x0, const ModuleVector& eps, std::size_t budget)
{
    const Problem p{f, g, g_solve, metric, Contraction{&cert, nullptr}};
    SolveResult r = iterate(p, x0, eps, budget);
    assess_pair(r, p, eps);
    return r;
}

SolveResult comparison_solve(const MapSpec& f, const MapSpec& g, const PreimageOracle& g_solve,
                             const ComparisonFunction& phi, const WeightedMatrixMetric& metric,
                             const ModuleVector& x0, const ModuleVector& eps, std::size_t budget,
                             std::uint64_t seed)
{
    const Problem p{f, g, g_solve, metric, Contraction{nullptr, &phi}};
    validate(p, x0, eps, budget);

    ComparisonAxiomReport pre = check_comparison_axioms(phi, cone_sampler(x0.dim()),
                                                        kComparisonPrecheckSamples, seed);
    if (!pre.passed()) {
        SolveResult r;
        r.point = x0;
        r.value = g(x0);
        r.residual = metric(f(x0), r.value);
        r.trace.points.push_back(r.value);
        r.trace.status = SolveStatus::hypothesis_violated;
        r.trace.message = "comparison function failed its axiom precheck";
        r.comparison_precheck = std::move(pre);
        return r;
    }

    SolveResult r = iterate(p, x0, eps, budget);
    r.comparison_precheck = std::move(pre);
    assess_pair(r, p, eps);
    return r;
}

SquareMatrix affine_lipschitz_matrix(const SquareMatrix& M, const WeightedMatrixMetric& metric)
{
    const SquareMatrix& W = metric.weights();
    if (M.dim() != W.dim()) throw UsageError("affine_lipschitz_matrix: dimension mismatch");
    SquareMatrix k = W * M.abs() * inverse(W);
    for (std::size_t i = 0; i < k.dim(); ++i)
        for (std::size_t j = 0; j < k.dim(); ++j) k(i, j) = std::max(k(i, j), 0.0);
    return k;
}

} // namespace perov
