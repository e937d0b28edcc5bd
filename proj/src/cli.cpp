#include "perov/cli.hpp"

#include "perov/contraction.hpp"
#include "perov/errors.hpp"
#include "perov/problem.hpp"
#include "perov/report.hpp"
#include "perov/rmetric.hpp"
#include "perov/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace perov::cli {

namespace {

/// Iteration rows beyond this count are elided from the middle of the table.
constexpr std::size_t kMaxTableRows = 200;

struct Context {
    ProblemFile problem;
    std::string path;
    std::string command;
    std::ostream& out;
};

[[noreturn]] void usage(const std::string& what) { throw UsageError(what); }

const MapSpec& require_f(const Context& c)
{
    if (!c.problem.f) usage(c.command + " needs a map f (f.M, f.b)");
    return *c.problem.f;
}

const SquareMatrix& require_k(const Context& c)
{
    if (!c.problem.k) usage(c.command + " needs a contraction matrix k");
    return *c.problem.k;
}

const SquareMatrix& require_lambda(const Context& c)
{
    if (!c.problem.lambda) usage(c.command + " needs a comparison matrix lambda");
    return *c.problem.lambda;
}

MapSpec g_or_identity(const Context& c)
{
    return c.problem.g ? *c.problem.g : MapSpec::identity(c.problem.n);
}

PreimageOracle g_preimage(const Context& c)
{
    if (!c.problem.g) return [](const ModuleVector& y) { return y; };
    if (c.problem.g_solve) return preimage_oracle(*c.problem.g_solve);
    // Parsing already rejected singular affine g without gsolve.
    return preimage_oracle(invert_affine(*c.problem.g).value());
}

int finish(Context& c, int code)
{
    c.out << Record("exit").add("code", code) << '\n';
    return code;
}

void print_certificate(Context& c, const ContractionCertificate& cert)
{
    c.out << "certificate: rho = " << format_real(cert.rho) << " (ring norm "
          << format_real(ring_norm(cert.k)) << "), Neumann terms = " << cert.series_terms
          << ", residual = " << format_real(cert.residual) << '\n';
    c.out << Record("certificate")
                 .add("rho", cert.rho)
                 .add("rho_upper", cert.rho_upper)
                 .add("ring_norm", ring_norm(cert.k))
                 .add("terms", cert.series_terms)
                 .add("residual", cert.residual)
                 .add("S", cert.S)
          << '\n';
}

void print_not_certified(Context& c, const NotCertified& e)
{
    c.out << e.what() << '\n';
    c.out << Record("certificate").add("certified", false).add("rho", e.rho()) << '\n';
}

void print_trace(Context& c, const IterationTrace& tr)
{
    const std::size_t rows = tr.step_dists.size();
    c.out << "iterations:\n";
    for (std::size_t i = 0; i < rows; ++i) {
        if (rows > kMaxTableRows && i == kMaxTableRows / 2) {
            const std::size_t skip = rows - kMaxTableRows;
            c.out << Record("iter_elided").add("count", skip) << '\n';
            i += skip - 1;
            continue;
        }
        c.out << Record("iter")
                     .add("n", i)
                     .add("y", tr.points[i])
                     .add("dist", tr.step_dists[i])
                     .add("bound", tr.bounds[i])
              << '\n';
    }
}

int status_code(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged: return kExitOk;
    case SolveStatus::hypothesis_violated: return kExitHypothesis;
    case SolveStatus::budget_exhausted: return kExitBudget;
    }
    return kExitNumerical;
}

void print_result(Context& c, const SolveResult& r)
{
    print_trace(c, r.trace);
    c.out << "status: " << to_string(r.status());
    if (!r.trace.message.empty()) c.out << " (" << r.trace.message << ")";
    c.out << "\npoint: " << format_vector(r.point) << "\nresidual d(f p, g p): "
          << format_vector(r.residual) << '\n';

    Record rec("result");
    rec.add("status", to_string(r.status()))
        .add("iterations", r.trace.iterations)
        .add("point", r.point)
        .add("value", r.value)
        .add("residual", r.residual);
    if (r.trace.violation_step) rec.add("violation_step", *r.trace.violation_step);
    if (r.weakly_compatible) {
        rec.add("weakly_compatible", *r.weakly_compatible).add("commutator", r.commutator);
        c.out << "weakly compatible: " << (*r.weakly_compatible ? "yes" : "no")
              << " (commutator " << format_real(r.commutator) << ")\n";
        if (r.common_fixed_point) {
            rec.add("common_fixed_point", *r.common_fixed_point)
                .add("common_residual_f", r.common_residual_f)
                .add("common_residual_g", r.common_residual_g);
            c.out << "common fixed point: " << format_vector(*r.common_fixed_point) << '\n';
        } else {
            rec.add("common_fixed_point", std::string("none"));
        }
    }
    c.out << rec << '\n';
}

void print_lipschitz(Context& c, const LipschitzReport& rep)
{
    c.out << "Lipschitz check: " << rep.violations.size() << " violations in "
          << rep.samples_tested << " samples\n";
    Record rec("hypothesis");
    rec.add("check", std::string("lipschitz"))
        .add("samples", rep.samples_tested)
        .add("violations", rep.violations.size())
        .add("verdict", std::string(rep.passed() ? "pass" : "fail"));
    if (!rep.passed())
        rec.add("witness_x", rep.violations.front().x).add("witness_y", rep.violations.front().y);
    c.out << rec << '\n';
}

void print_condition_c(Context& c, const ConditionCReport& rep)
{
    c.out << "condition (C) check: " << rep.failures.size() << " failures in "
          << rep.samples_tested << " samples; branches " << rep.branch_counts[0] << '/'
          << rep.branch_counts[1] << '/' << rep.branch_counts[2] << '\n';
    Record rec("hypothesis");
    rec.add("check", std::string("condition_c"))
        .add("samples", rep.samples_tested)
        .add("branch_ggxy", rep.branch_counts[0])
        .add("branch_gfx", rep.branch_counts[1])
        .add("branch_gfy", rep.branch_counts[2])
        .add("failures", rep.failures.size())
        .add("verdict", std::string(rep.passed() ? "pass" : "fail"));
    if (!rep.passed())
        rec.add("witness_x", rep.failures.front().x).add("witness_y", rep.failures.front().y);
    c.out << rec << '\n';
}

void print_comparison_report(Context& c, const ComparisonAxiomReport& rep)
{
    c.out << "comparison axioms (sampled; a pass is evidence, not proof): "
          << rep.zero_and_decrease.size() << '/' << rep.monotone.size() << '/'
          << rep.interior_gap.size() << '/' << rep.iterates_vanish.size()
          << " violations of (i)/(ii)/(iii)/(iv) in " << rep.samples_tested << " samples\n";
    c.out << Record("hypothesis")
                 .add("check", std::string("comparison_axioms"))
                 .add("samples", rep.samples_tested)
                 .add("axiom_i", rep.zero_and_decrease.size())
                 .add("axiom_ii", rep.monotone.size())
                 .add("axiom_iii", rep.interior_gap.size())
                 .add("axiom_iv", rep.iterates_vanish.size())
                 .add("verdict", std::string(rep.passed() ? "pass" : "fail"))
          << '\n';
}

// --- subcommands ------------------------------------------------------------

int cmd_check_metric(Context& c)
{
    const WeightedMatrixMetric metric(c.problem.W);
    const MetricAxiomReport rep = check_metric_axioms(
        metric.as_function(), uniform_sampler(c.problem.n), c.problem.samples, c.problem.seed);
    c.out << "metric axioms: " << rep.d1_violations.size() << '/' << rep.d2_violations.size()
          << '/' << rep.d3_violations.size() << " violations of d1/d2/d3 in "
          << rep.samples_tested << " samples\n";
    c.out << Record("hypothesis")
                 .add("check", std::string("metric_axioms"))
                 .add("samples", rep.samples_tested)
                 .add("d1", rep.d1_violations.size())
                 .add("d2", rep.d2_violations.size())
                 .add("d3", rep.d3_violations.size())
                 .add("verdict", std::string(rep.passed() ? "pass" : "fail"))
          << '\n';
    return finish(c, rep.passed() ? kExitOk : kExitHypothesis);
}

int cmd_check_comparison(Context& c)
{
    const LinearComparison phi(require_lambda(c));
    print_certificate(c, phi.certificate());
    c.out << Record("comparison").add("identity_dominates", phi.identity_dominates()) << '\n';
    const ComparisonAxiomReport rep = check_comparison_axioms(
        phi.as_function(), cone_sampler(c.problem.n), c.problem.samples, c.problem.seed);
    print_comparison_report(c, rep);
    return finish(c, rep.passed() ? kExitOk : kExitHypothesis);
}

int cmd_certify(Context& c)
{
    const SquareMatrix& k = c.problem.k ? *c.problem.k : require_lambda(c);
    const SpectralEstimate est = estimate_spectral_radius(k);
    c.out << "spectral radius: " << format_real(est.value) << " via " << to_string(est.method)
          << " in [" << format_real(est.lower) << ", " << format_real(est.upper) << "]\n";
    c.out << Record("spectral")
                 .add("rho", est.value)
                 .add("lower", est.lower)
                 .add("upper", est.upper)
                 .add("method", to_string(est.method))
                 .add("iterations", est.iterations)
                 .add("gelfand", est.gelfand)
                 .add("gelfand_squarings", static_cast<unsigned long>(est.gelfand_squarings))
          << '\n';
    const ContractionCertificate cert = certify_in_K(k);
    print_certificate(c, cert);
    return finish(c, kExitOk);
}

int cmd_verify_lipschitz(Context& c)
{
    const WeightedMatrixMetric metric(c.problem.W);
    const LipschitzReport rep =
        verify_matrix_lipschitz(require_f(c), g_or_identity(c), require_k(c), metric.as_function(),
                                uniform_sampler(c.problem.n), c.problem.samples, c.problem.seed);
    print_lipschitz(c, rep);
    return finish(c, rep.passed() ? kExitOk : kExitHypothesis);
}

int cmd_verify_condition_c(Context& c)
{
    const WeightedMatrixMetric metric(c.problem.W);
    const LinearComparison phi(require_lambda(c));
    const ConditionCReport rep =
        verify_condition_C(require_f(c), g_or_identity(c), phi.as_function(),
                           metric.as_function(), uniform_sampler(c.problem.n), c.problem.samples,
                           c.problem.seed);
    print_condition_c(c, rep);
    return finish(c, rep.passed() ? kExitOk : kExitHypothesis);
}

int cmd_solve_certified(Context& c, bool two_maps)
{
    const MapSpec& f = require_f(c);
    if (!two_maps && c.problem.g) usage("solve-perov takes a single map; use solve-jungck for g");
    if (two_maps && !c.problem.g) usage("solve-jungck needs a second map g");
    const WeightedMatrixMetric metric(c.problem.W);
    const MapSpec g = g_or_identity(c);

    const ContractionCertificate cert = certify_in_K(require_k(c));
    print_certificate(c, cert);

    const LipschitzReport lip =
        verify_matrix_lipschitz(f, g, cert.k, metric.as_function(), uniform_sampler(c.problem.n),
                                c.problem.samples, c.problem.seed);
    print_lipschitz(c, lip);
    if (!lip.passed()) return finish(c, kExitHypothesis);

    const SolveResult r =
        two_maps ? jungck_solve(f, g, g_preimage(c), metric, cert, c.problem.x0, c.problem.eps,
                                c.problem.budget)
                 : perov_solve(f, metric, cert, c.problem.x0, c.problem.eps, c.problem.budget);
    print_result(c, r);
    return finish(c, status_code(r.status()));
}

int cmd_solve_comparison(Context& c)
{
    const MapSpec& f = require_f(c);
    const WeightedMatrixMetric metric(c.problem.W);
    const MapSpec g = g_or_identity(c);
    const LinearComparison phi(require_lambda(c));
    c.out << Record("comparison").add("identity_dominates", phi.identity_dominates()) << '\n';

    const ConditionCReport cc =
        verify_condition_C(f, g, phi.as_function(), metric.as_function(),
                           uniform_sampler(c.problem.n), c.problem.samples, c.problem.seed);
    print_condition_c(c, cc);
    if (!cc.passed()) return finish(c, kExitHypothesis);

    const SolveResult r = comparison_solve(f, g, g_preimage(c), phi.as_function(), metric,
                                           c.problem.x0, c.problem.eps, c.problem.budget,
                                           c.problem.seed);
    if (r.comparison_precheck) print_comparison_report(c, *r.comparison_precheck);
    print_result(c, r);
    return finish(c, status_code(r.status()));
}

const std::map<std::string, std::function<int(Context&)>>& commands()
{
    static const std::map<std::string, std::function<int(Context&)>> table = {
        {"check-metric", cmd_check_metric},
        {"check-comparison", cmd_check_comparison},
        {"certify", cmd_certify},
        {"solve-perov", [](Context& c) { return cmd_solve_certified(c, false); }},
        {"solve-jungck", [](Context& c) { return cmd_solve_certified(c, true); }},
        {"solve-comparison", cmd_solve_comparison},
        {"verify-lipschitz", cmd_verify_lipschitz},
        {"verify-condition-c", cmd_verify_condition_c},
    };
    return table;
}

const char* describe(const std::string& name)
{
    static const std::map<std::string, const char*> text = {
        {"check-metric", "sample the metric axioms for the weight matrix W"},
        {"check-comparison", "sample the comparison-function axioms for lambda"},
        {"certify", "certify k (or lambda) by spectral radius and Neumann sum"},
        {"solve-perov", "fixed point of f under a certified matrix contraction k"},
        {"solve-jungck", "point of coincidence / common fixed point of (f, g)"},
        {"solve-comparison", "coincidence point of (f, g) under phi(t) = lambda t"},
        {"verify-lipschitz", "sample d(fx,fy) <= k d(gx,gy)"},
        {"verify-condition-c", "sample the comparison contraction condition for (f, g)"},
    };
    return text.at(name);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Fixed-point, coincidence-point and common-fixed-point solvers under "
                 "matrix-weighted vector metrics"};
    app.name("perov");
    app.require_subcommand(1);

    std::string path;
    std::optional<std::uint64_t> seed;
    for (const auto& [name, fn] : commands()) {
        CLI::App* sub = app.add_subcommand(name, describe(name));
        sub->add_option("problem", path, "problem file")->required();
        sub->add_option("--seed", seed, "override the problem file's seed");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Context ctx{ProblemFile{}, path, name, out};
    try {
        ctx.problem = parse_problem(path);
        if (seed) ctx.problem.seed = *seed;
        out << Record("problem")
                   .add("command", name)
                   .add("n", ctx.problem.n)
                   .add("seed", static_cast<unsigned long long>(ctx.problem.seed))
                   .add("samples", ctx.problem.samples)
                   .add("eps", ctx.problem.eps)
            << '\n';
        return commands().at(name)(ctx);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return finish(ctx, kExitUsage);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return finish(ctx, kExitUsage);
    } catch (const NotCertified& e) {
        print_not_certified(ctx, e);
        return finish(ctx, kExitHypothesis);
    } catch (const HypothesisBreach& e) {
        err << "hypothesis violated: " << e.what() << '\n';
        out << Record("result").add("status", std::string("hypothesis_violated")) << '\n';
        return finish(ctx, kExitHypothesis);
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << '\n';
        return finish(ctx, kExitNumerical);
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return finish(ctx, kExitNumerical);
    }
}

int run(int argc, const char* const* argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace perov::cli
