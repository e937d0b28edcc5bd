#pragma once

#include "perov/ordered_algebra.hpp"
#include "perov/sampling.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace perov {

/// A vector-valued distance: pair of points in, cone vector out.
using Metric = std::function<ModuleVector(const ModuleVector&, const ModuleVector&)>;

/// Slack added per component when an order relation is checked after
/// floating-point arithmetic.
inline constexpr double kOrderSlack = 1e-12;

/// d(x, y)_i = sum_j w_ij |x_j - y_j| for a weight matrix with strictly
/// positive entries.
class WeightedMatrixMetric {
public:
    /// Throws UsageError unless every entry of weights is finite and > 0.
    explicit WeightedMatrixMetric(SquareMatrix weights);

    std::size_t dim() const noexcept { return weights_.dim(); }
    const SquareMatrix& weights() const noexcept { return weights_; }

    ModuleVector operator()(const ModuleVector& x, const ModuleVector& y) const;

    /// Type-erased view usable wherever a Metric is expected.
    Metric as_function() const;

private:
    SquareMatrix weights_;
};

ModuleVector metric_eval(const WeightedMatrixMetric& m, const ModuleVector& x,
                         const ModuleVector& y);

struct AxiomWitness {
    ModuleVector x;
    ModuleVector y;
    ModuleVector z;
    /// The distance vector(s) that broke the axiom; for the triangle check
    /// these are d(x,y) and d(x,z) + d(z,y).
    ModuleVector lhs;
    ModuleVector rhs;
};

struct MetricAxiomReport {
    std::size_t samples_tested = 0;
    std::vector<AxiomWitness> d1_violations; ///< nonnegativity / identity of indiscernibles
    std::vector<AxiomWitness> d2_violations; ///< symmetry
    std::vector<AxiomWitness> d3_violations; ///< triangle inequality

    bool passed() const noexcept
    {
        return d1_violations.empty() && d2_violations.empty() && d3_violations.empty();
    }
};

/// Samples `count` triples and checks the three R-metric axioms in the cone
/// order. A failing metric yields a populated report, never an exception.
/// Throws UsageError if count == 0.
MetricAxiomReport check_metric_axioms(const Metric& metric, const PointSampler& sampler,
                                      std::size_t count, std::uint64_t seed = kDefaultSeed,
                                      Execution exec = Execution::serial);

/// dist << eps. Throws UsageError unless eps is in the interior of the cone.
bool converged(const ModuleVector& dist, const ModuleVector& eps);

} // namespace perov
