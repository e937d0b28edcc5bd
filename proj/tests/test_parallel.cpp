#include "perov/contraction.hpp"
#include "perov/rmetric.hpp"
#include "perov/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace perov;

namespace {

bool same_pairs(const std::vector<PairWitness>& a, const std::vector<PairWitness>& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].x != b[i].x || a[i].y != b[i].y || a[i].lhs != b[i].lhs || a[i].rhs != b[i].rhs)
            return false;
    return true;
}

} // namespace

TEST_CASE("sample seeds depend only on seed and index")
{
    CHECK(sample_seed(1, 0) == sample_seed(1, 0));
    CHECK(sample_seed(1, 0) != sample_seed(1, 1));
    CHECK(sample_seed(1, 0) != sample_seed(2, 0));
}

TEST_CASE("collect_samples keeps index order")
{
    const auto fn = [](std::size_t i, Rng& rng) -> std::optional<std::pair<std::size_t, std::uint64_t>> {
        if (i % 3 == 0) return std::nullopt;
        return std::make_pair(i, rng());
    };
    const auto s = collect_samples<std::pair<std::size_t, std::uint64_t>>(1000, 5, Execution::serial, fn);
    const auto p = collect_samples<std::pair<std::size_t, std::uint64_t>>(1000, 5, Execution::parallel, fn);
    CHECK(s == p);
    CHECK(s.size() == 666);
    CHECK(s.front().first == 1);
}

TEST_CASE("collect_samples propagates exceptions from the parallel path")
{
    const auto fn = [](std::size_t i, Rng&) -> std::optional<int> {
        if (i == 77) throw std::runtime_error("boom");
        return 1;
    };
    CHECK_THROWS_AS(collect_samples<int>(200, 1, Execution::parallel, fn), std::runtime_error);
    CHECK_THROWS_AS(collect_samples<int>(200, 1, Execution::serial, fn), std::runtime_error);
}

TEST_CASE("Lipschitz reports are identical in serial and parallel")
{
    const WeightedMatrixMetric m({{1, 0.5}, {0.25, 1}});
    const MapSpec f = MapSpec::affine(SquareMatrix{{0.6, 0.3}, {-0.2, 0.5}}, {1, 2});
    const SquareMatrix k{{0.4, 0.1}, {0.1, 0.4}}; // too small: produces violations
    const auto s = verify_matrix_lipschitz(f, MapSpec::identity(2), k, m.as_function(),
                                           uniform_sampler(2), 3000, 7, Execution::serial);
    const auto p = verify_matrix_lipschitz(f, MapSpec::identity(2), k, m.as_function(),
                                           uniform_sampler(2), 3000, 7, Execution::parallel);
    CHECK_FALSE(s.violations.empty());
    CHECK(same_pairs(s.violations, p.violations));
}

TEST_CASE("condition C reports are identical in serial and parallel")
{
    const WeightedMatrixMetric m(SquareMatrix{{1}});
    const ComparisonFunction phi = LinearComparison(SquareMatrix{{0.5}}).as_function();
    const MapSpec f = MapSpec::nonlinear({SquareMatrix{{0.6}}, ModuleVector{0.5}},
                                         {SquareMatrix{{1}}, ModuleVector{0}}, {UnaryFn::sin});
    const auto s = verify_condition_C(f, MapSpec::identity(1), phi, m.as_function(),
                                      uniform_sampler(1), 3000, 8, Execution::serial);
    const auto p = verify_condition_C(f, MapSpec::identity(1), phi, m.as_function(),
                                      uniform_sampler(1), 3000, 8, Execution::parallel);
    CHECK(s.branch_counts == p.branch_counts);
    CHECK(same_pairs(s.failures, p.failures));
}

TEST_CASE("metric axiom reports are identical in serial and parallel")
{
    const Metric squared = [](const ModuleVector& x, const ModuleVector& y) {
        ModuleVector d = (x - y).abs();
        for (std::size_t i = 0; i < d.dim(); ++i) d[i] *= d[i];
        return d;
    };
    const auto s = check_metric_axioms(squared, uniform_sampler(3), 3000, 9, Execution::serial);
    const auto p = check_metric_axioms(squared, uniform_sampler(3), 3000, 9, Execution::parallel);
    REQUIRE(s.d3_violations.size() == p.d3_violations.size());
    for (std::size_t i = 0; i < s.d3_violations.size(); ++i) {
        CHECK(s.d3_violations[i].x == p.d3_violations[i].x);
        CHECK(s.d3_violations[i].lhs == p.d3_violations[i].lhs);
    }
}
