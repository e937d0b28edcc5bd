#include "perov/errors.hpp"
#include "perov/rmetric.hpp"

#include "oracles.hpp"
#include "properties.hpp"

#include <doctest.h>

#include <cmath>

using namespace perov;

namespace {

SquareMatrix positive_weights(Rng& rng, std::size_t n)
{
    std::uniform_real_distribution<double> d(0.01, 5.0);
    SquareMatrix w(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w(i, j) = d(rng);
    return w;
}

oracle::Mat to_oracle(const SquareMatrix& m)
{
    oracle::Mat out(m.dim(), oracle::Vec(m.dim()));
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) out[i][j] = m(i, j);
    return out;
}

} // namespace

TEST_CASE("metric_eval examples")
{
    CHECK(metric_eval(WeightedMatrixMetric({{1, 0.1}, {0.1, 1}}), {5, 7}, {5, 7}) ==
          ModuleVector{0, 0});
    CHECK(metric_eval(WeightedMatrixMetric({{1, 1}, {1, 1}}), {0, 0}, {1, 1}) ==
          ModuleVector{2, 2});
    CHECK(metric_eval(WeightedMatrixMetric({{2, 1}, {1, 3}}), {1, 0}, {0, 1}) ==
          ModuleVector{3, 4});
    CHECK_THROWS_AS(metric_eval(WeightedMatrixMetric({{1, 1}, {1, 1}}), {0, 0}, {1}), UsageError);
}

TEST_CASE("weights must be strictly positive")
{
    CHECK_THROWS_AS(WeightedMatrixMetric({{1, 0}, {1, 1}}), UsageError);
    CHECK_THROWS_AS(WeightedMatrixMetric({{1, -1}, {1, 1}}), UsageError);
    CHECK_NOTHROW(WeightedMatrixMetric(SquareMatrix{{1e-300}}));
}

TEST_CASE("metric_eval matches a scalar double loop")
{
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const SquareMatrix w = positive_weights(rng, n);
        const ModuleVector x = props::uniform_vec(rng, n, -10, 10);
        const ModuleVector y = props::uniform_vec(rng, n, -10, 10);
        const oracle::Vec expected = oracle::weighted_distance(
            to_oracle(w), {x.values().begin(), x.values().end()},
            {y.values().begin(), y.values().end()});
        const ModuleVector got = WeightedMatrixMetric(w)(x, y);
        for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-14));
    }
}

TEST_CASE("weighted metrics pass the axiom checker")
{
    Rng rng(3);
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
        const WeightedMatrixMetric m(positive_weights(rng, n));
        const auto report = check_metric_axioms(m.as_function(), uniform_sampler(n), 2000);
        CHECK(report.samples_tested == 2000);
        CHECK(report.passed());
    }
}

TEST_CASE("signed difference is caught by d1")
{
    const Metric signed_diff = [](const ModuleVector& x, const ModuleVector& y) { return x - y; };
    const auto report = check_metric_axioms(signed_diff, uniform_sampler(2), 500);
    REQUIRE_FALSE(report.d1_violations.empty());
    const AxiomWitness& w = report.d1_violations.front();
    const ModuleVector zero(2);
    CHECK_FALSE((leq(zero, w.x - w.y) && leq(zero, w.x - w.z) && leq(zero, w.z - w.y)));
    CHECK_FALSE(report.d2_violations.empty());
}

TEST_CASE("a negative weight is caught by d1")
{
    const SquareMatrix w{{1, -2}, {0.5, 1}};
    const Metric bad = [w](const ModuleVector& x, const ModuleVector& y) {
        return w * (x - y).abs();
    };
    const auto report = check_metric_axioms(bad, uniform_sampler(2), 1000);
    CHECK_FALSE(report.d1_violations.empty());
    CHECK_FALSE(report.passed());
}

TEST_CASE("a metric that ignores a coordinate breaks identity of indiscernibles")
{
    const Metric first_only = [](const ModuleVector& x, const ModuleVector& y) {
        return ModuleVector{std::abs(x[0] - y[0]), std::abs(x[0] - y[0])};
    };
    // Only x == y pairs can witness this for continuous samplers; a lattice
    // sampler makes x_0 == y_0 with x != y likely.
    const PointSampler lattice = [](Rng& rng) {
        std::uniform_int_distribution<int> d(0, 1);
        return ModuleVector{double(d(rng)), double(d(rng))};
    };
    CHECK_FALSE(check_metric_axioms(first_only, lattice, 200).d1_violations.empty());
}

TEST_CASE("squared distance breaks the triangle inequality")
{
    const Metric squared = [](const ModuleVector& x, const ModuleVector& y) {
        ModuleVector d = (x - y).abs();
        for (std::size_t i = 0; i < d.dim(); ++i) d[i] *= d[i];
        return d;
    };
    const auto report = check_metric_axioms(squared, uniform_sampler(2), 2000);
    CHECK(report.d1_violations.empty());
    CHECK(report.d2_violations.empty());
    CHECK_FALSE(report.d3_violations.empty());
}

TEST_CASE("axiom checker rejects a zero count")
{
    const WeightedMatrixMetric m(SquareMatrix{{1}});
    CHECK_THROWS_AS(check_metric_axioms(m.as_function(), uniform_sampler(1), 0), UsageError);
}

TEST_CASE("converged is strict in every component")
{
    CHECK(converged({0, 0}, {1e-8, 1e-8}));
    CHECK_FALSE(converged({1e-8, 0}, {1e-8, 1e-8}));
    CHECK(converged({1e-9, 1e-9}, {1e-8, 1e-8}));
    CHECK_THROWS_AS(converged({0, 0}, {1e-8, 0}), UsageError);
    CHECK_THROWS_AS(converged({0, 0}, {1e-8, -1}), UsageError);
}

TEST_CASE("scaling the weights scales the distance")
{
    Rng rng(21);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const SquareMatrix w = positive_weights(rng, n);
        const double c = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
        const ModuleVector x = props::uniform_vec(rng, n, -10, 10);
        const ModuleVector y = props::uniform_vec(rng, n, -10, 10);
        const ModuleVector scaled = WeightedMatrixMetric(c * w)(x, y);
        const ModuleVector expected = c * WeightedMatrixMetric(w)(x, y);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(scaled[i] - expected[i]) <= 1e-15 * std::max(1.0, std::abs(expected[i])) * 16);
    }
}

TEST_CASE("limits are unique")
{
    // x_k = x + 2^-k e: d(x_k, x) -> 0. If also d(x_k, y) -> 0 then the
    // triangle inequality forces d(x, y) = 0, hence x == y.
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const WeightedMatrixMetric m(positive_weights(rng, n));
        const ModuleVector x = props::uniform_vec(rng, n, -10, 10);
        const ModuleVector e = props::uniform_vec(rng, n, -1, 1);
        const ModuleVector y = trial % 2 ? x : x + props::interior_vec(rng, n);

        ModuleVector to_x, to_y;
        for (int k = 0; k < 1100; ++k) {
            const ModuleVector xk = x + std::ldexp(1.0, -k) * e;
            to_x = m(xk, x);
            to_y = m(xk, y);
        }
        CHECK(to_x.norm_inf() == 0.0);
        if (to_y.norm_inf() == 0.0)
            CHECK((x - y).norm_inf() == 0.0);
        else
            CHECK(x != y);
    }
}
