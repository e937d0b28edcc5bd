// Serial reference vs OpenMP path for the sampled verifiers.
//
//   bench_verifiers [samples]

#include "perov/contraction.hpp"
#include "perov/rmetric.hpp"
#include "perov/solver.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace perov;

namespace {

template <typename Fn>
double seconds(Fn&& fn, int reps)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        best = std::min(best, s);
    }
    return best;
}

template <typename Run, typename Same>
void row(const char* name, std::size_t samples, Run run, Same same)
{
    decltype(run(Execution::serial)) serial, parallel;
    const double ts = seconds([&] { serial = run(Execution::serial); }, 3);
    const double tp = seconds([&] { parallel = run(Execution::parallel); }, 3);
    std::printf("%-22s %9zu %10.4f %10.4f %8.2fx   %s\n", name, samples, ts, tp, ts / tp,
                same(serial, parallel) ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv)
{
    const std::size_t samples = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200'000;
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP: both columns run the serial path\n");
#endif
    std::printf("%-22s %9s %10s %10s %9s\n", "verifier", "samples", "serial s", "parallel s",
                "speedup");

    const std::size_t n = 5;
    SquareMatrix W(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) W(i, j) = (i == j ? 1.0 : 0.0) + 1.0 / double(1 + i + j);
    const WeightedMatrixMetric metric(W);

    row("metric axioms", samples,
        [&](Execution e) {
            return check_metric_axioms(metric.as_function(), uniform_sampler(n), samples,
                                       kDefaultSeed, e);
        },
        [](const MetricAxiomReport& a, const MetricAxiomReport& b) {
            return a.samples_tested == b.samples_tested &&
                   a.d3_violations.size() == b.d3_violations.size();
        });

    SquareMatrix M(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) = (i == j ? 0.3 : 0.05) * (j % 2 ? -1 : 1);
    const MapSpec f = MapSpec::nonlinear({M, ModuleVector::constant(n, 1.0)},
                                         {SquareMatrix::identity(n), ModuleVector(n)},
                                         std::vector<UnaryFn>(n, UnaryFn::tanh));
    const SquareMatrix k = affine_lipschitz_matrix(M, metric);
    const auto same_pairs = [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].x != b[i].x || a[i].y != b[i].y) return false;
        return true;
    };

    row("matrix Lipschitz", samples,
        [&](Execution e) {
            return verify_matrix_lipschitz(f, MapSpec::identity(n), k, metric.as_function(),
                                           uniform_sampler(n), samples, kDefaultSeed, e);
        },
        [&](const LipschitzReport& a, const LipschitzReport& b) {
            return same_pairs(a.violations, b.violations);
        });

    const ComparisonFunction phi = LinearComparison(0.6 * SquareMatrix::identity(n)).as_function();
    row("condition (C)", samples,
        [&](Execution e) {
            return verify_condition_C(f, MapSpec::identity(n), phi, metric.as_function(),
                                      uniform_sampler(n), samples, kDefaultSeed, e);
        },
        [&](const ConditionCReport& a, const ConditionCReport& b) {
            return a.branch_counts == b.branch_counts && same_pairs(a.failures, b.failures);
        });

    row("comparison axioms", samples / 20,
        [&](Execution e) {
            return check_comparison_axioms(phi, cone_sampler(n), samples / 20, kDefaultSeed, e);
        },
        [](const ComparisonAxiomReport& a, const ComparisonAxiomReport& b) {
            return a.passed() == b.passed() && a.samples_tested == b.samples_tested;
        });
    return 0;
}
