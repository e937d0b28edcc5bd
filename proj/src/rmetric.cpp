#include "perov/rmetric.hpp"

#include "perov/errors.hpp"

#include <cmath>
#include <optional>
#include <utility>

namespace perov {

PointSampler uniform_sampler(std::size_t n, double lo, double hi)
{
    return [n, lo, hi](Rng& rng) {
        std::uniform_real_distribution<double> dist(lo, hi);
        ModuleVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = dist(rng);
        return v;
    };
}

PointSampler cone_sampler(std::size_t n, double hi)
{
    return [n, hi](Rng& rng) {
        std::uniform_real_distribution<double> dist(0.0, hi);
        std::uniform_int_distribution<int> pin(0, 7);
        ModuleVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = pin(rng) == 0 ? 0.0 : dist(rng);
        return v;
    };
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

WeightedMatrixMetric::WeightedMatrixMetric(SquareMatrix weights) : weights_(std::move(weights))
{
    if (weights_.dim() == 0) throw UsageError("metric weight matrix is empty");
    for (std::size_t i = 0; i < weights_.dim(); ++i)
        for (std::size_t j = 0; j < weights_.dim(); ++j)
            if (!(std::isfinite(weights_(i, j)) && weights_(i, j) > 0.0))
                throw UsageError("metric weight matrix entries must be strictly positive");
}

ModuleVector WeightedMatrixMetric::operator()(const ModuleVector& x, const ModuleVector& y) const
{
    if (x.dim() != dim() || y.dim() != dim()) throw UsageError("metric_eval: dimension mismatch");
    const std::size_t n = dim();
    ModuleVector r(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += weights_(i, j) * std::abs(x[j] - y[j]);
        r[i] = s;
    }
    return r;
}

Metric WeightedMatrixMetric::as_function() const
{
    return [m = *this](const ModuleVector& x, const ModuleVector& y) { return m(x, y); };
}

ModuleVector metric_eval(const WeightedMatrixMetric& m, const ModuleVector& x,
                         const ModuleVector& y)
{
    return m(x, y);
}

namespace {

struct TripleOutcome {
    std::optional<AxiomWitness> d1;
    std::optional<AxiomWitness> d2;
    std::optional<AxiomWitness> d3;
};

bool is_zero(const ModuleVector& v)
{
    for (double c : v.values())
        if (c != 0.0) return false;
    return true;
}

} // namespace

MetricAxiomReport check_metric_axioms(const Metric& metric, const PointSampler& sampler,
                                      std::size_t count, std::uint64_t seed, Execution exec)
{
    if (count == 0) throw UsageError("check_metric_axioms: count must be >= 1");

    auto outcomes = collect_samples<TripleOutcome>(
        count, seed, exec, [&](std::size_t index, Rng& rng) -> std::optional<TripleOutcome> {
            const ModuleVector x = sampler(rng);
            // Every 16th triple repeats x so the "d(x,y) = 0 iff x = y"
            // direction is exercised on equal points too.
            const ModuleVector y = index % 16 == 0 ? x : sampler(rng);
            const ModuleVector z = sampler(rng);
            const OrthantCone cone(x.dim());

            const ModuleVector dxy = metric(x, y);
            const ModuleVector dyx = metric(y, x);
            const ModuleVector dxz = metric(x, z);
            const ModuleVector dzy = metric(z, y);
            const ModuleVector dxx = metric(x, x);

            TripleOutcome out;
            const bool nonneg = cone.contains(dxy) && cone.contains(dxz) && cone.contains(dzy);
            const bool indiscernible = is_zero(dxx) && (is_zero(dxy) == (x == y));
            if (!nonneg || !indiscernible) out.d1 = AxiomWitness{x, y, z, dxy, dxx};
            if (dxy != dyx) out.d2 = AxiomWitness{x, y, z, dxy, dyx};

            ModuleVector bound = dxz + dzy;
            bound += ModuleVector::constant(bound.dim(), kOrderSlack);
            if (!cone.leq(dxy, bound)) out.d3 = AxiomWitness{x, y, z, dxy, dxz + dzy};

            if (!out.d1 && !out.d2 && !out.d3) return std::nullopt;
            return out;
        });

    MetricAxiomReport report;
    report.samples_tested = count;
    for (auto& o : outcomes) {
        if (o.d1) report.d1_violations.push_back(std::move(*o.d1));
        if (o.d2) report.d2_violations.push_back(std::move(*o.d2));
        if (o.d3) report.d3_violations.push_back(std::move(*o.d3));
    }
    return report;
}

bool converged(const ModuleVector& dist, const ModuleVector& eps)
{
    const OrthantCone cone(eps.dim());
    if (!cone.interior(eps)) throw UsageError("tolerance vector must be strictly positive");
    return cone.ll(dist, eps);
}

} // namespace perov
