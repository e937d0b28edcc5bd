#include "perov/contraction.hpp"

#include "perov/errors.hpp"
#include "perov/rmetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>

namespace perov {

namespace {

void require_nonnegative(const SquareMatrix& a, const char* what)
{
    if (a.dim() == 0) throw UsageError(std::string(what) + ": empty matrix");
    if (!a.all_finite()) throw UsageError(std::string(what) + ": matrix entries must be finite");
    if (!a.nonnegative())
        throw UsageError(std::string(what) + ": matrix entries must be nonnegative");
}

struct GelfandResult {
    double value = 0.0;
    unsigned squarings = 0;
    bool converged = false;
};

// N(A^m)^(1/m) for m = 2^j. The running power is kept at unit norm and its
// scale carried in log form, so nothing underflows for small radii.
GelfandResult gelfand_sequence(const SquareMatrix& a, double tol)
{
    constexpr unsigned kMaxSquarings = 62;
    GelfandResult r;
    const double n0 = ring_norm(a);
    if (n0 == 0.0) {
        r.converged = true;
        return r;
    }
    SquareMatrix c = (1.0 / n0) * a;
    double log_scale = std::log(n0);
    double prev = n0;
    r.value = n0;
    for (unsigned j = 1; j <= kMaxSquarings; ++j) {
        c = c * c;
        const double cn = ring_norm(c);
        if (cn == 0.0) {
            // nilpotent
            r.value = 0.0;
            r.squarings = j;
            r.converged = true;
            return r;
        }
        c *= 1.0 / cn;
        log_scale = 2.0 * log_scale + std::log(cn);
        const double g = std::exp(std::ldexp(log_scale, -static_cast<int>(j)));
        r.value = g;
        r.squarings = j;
        if (std::abs(g - prev) <= 0.25 * tol) {
            r.converged = true;
            return r;
        }
        prev = g;
    }
    return r;
}

} // namespace

std::string to_string(SpectralMethod m)
{
    return m == SpectralMethod::power_iteration ? "power_iteration" : "gelfand";
}

SpectralEstimate estimate_spectral_radius(const SquareMatrix& a, double tol)
{
    require_nonnegative(a, "spectral_radius");
    if (!(tol > 0.0)) throw UsageError("spectral_radius: tolerance must be positive");

    const std::size_t n = a.dim();
    const SquareMatrix shifted = a + SquareMatrix::identity(n);

    Rng rng(kDefaultSeed);
    std::uniform_real_distribution<double> start(0.5, 1.5);
    ModuleVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = start(rng);

    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double best_lo = 0.0;
    double checkpoint_width = std::numeric_limits<double>::infinity();
    bool bracket_closed = false;
    std::size_t it = 0;
    while (it < kPowerIterationBudget) {
        ++it;
        const ModuleVector w = shifted * v;
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ratio = w[i] / v[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        best_lo = std::max(best_lo, lo);
        if (hi - lo <= tol) {
            bracket_closed = true;
            break;
        }
        const double scale = w.norm_inf();
        v = (1.0 / scale) * w;
        if (std::any_of(v.values().begin(), v.values().end(), [](double x) { return x == 0.0; }))
            break; // lost positivity to underflow; only Gelfand is left
        if (it % 1000 == 0) {
            // Reducible matrices leave the bracket stuck at a gap between
            // Perron roots of diagonal blocks.
            if (hi - lo > 0.99 * checkpoint_width) break;
            checkpoint_width = hi - lo;
        }
    }

    const GelfandResult g = gelfand_sequence(a, tol);

    SpectralEstimate est;
    est.iterations = it;
    est.gelfand = g.value;
    est.gelfand_squarings = g.squarings;

    if (bracket_closed) {
        est.method = SpectralMethod::power_iteration;
        est.lower = std::max(lo - 1.0, 0.0);
        est.upper = std::max(hi - 1.0, 0.0);
        est.value = std::max(0.5 * (lo + hi) - 1.0, 0.0);
        return est;
    }
    if (g.converged) {
        est.method = SpectralMethod::gelfand;
        est.lower = std::min(std::max(best_lo - 1.0, 0.0), g.value);
        est.upper = g.value;
        est.value = g.value;
        return est;
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "spectral radius did not converge; last bracket [" << best_lo - 1.0 << ", "
        << std::min(hi - 1.0, g.value) << "]";
    throw NonConvergence(msg.str(), best_lo - 1.0, std::min(hi - 1.0, g.value));
}

double spectral_radius(const SquareMatrix& a, double tol)
{
    return estimate_spectral_radius(a, tol).value;
}

SquareMatrix neumann_sum(const SquareMatrix& a, double tol, std::size_t* terms_used)
{
    if (!(tol > 0.0)) throw UsageError("neumann_sum: tolerance must be positive");
    const std::size_t n = a.dim();
    const SquareMatrix id = SquareMatrix::identity(n);
    SquareMatrix sum = id;
    SquareMatrix term = a;
    std::size_t terms = 1;
    for (;;) {
        const double q = ring_norm(term);
        if (!std::isfinite(q)) throw NonConvergence("neumann_sum: series diverges", static_cast<double>(terms), q);
        // S - S_{m-1} = A^m S and N(S) <= N(S_{m-1}) / (1 - N(A^m)).
        if (q < 1.0 && q * ring_norm(sum) / (1.0 - q) <= tol) break;
        if (terms >= kNeumannBudget)
            throw NonConvergence("neumann_sum: term budget exhausted", static_cast<double>(terms), q);
        sum += term;
        term = term * a;
        ++terms;
    }
    const double residual = ring_norm((id - a) * sum - id);
    if (!(residual <= kCertificateResidual)) {
        throw NumericalError("neumann_sum: residual " + std::to_string(residual) +
                             " exceeds certificate tolerance");
    }
    if (terms_used) *terms_used = terms;
    return sum;
}

ContractionCertificate certify_in_K(const SquareMatrix& a, double tol)
{
    require_nonnegative(a, "certify");
    const SpectralEstimate est = estimate_spectral_radius(a, tol);
    if (!(est.value < 1.0 - tol)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "not certified, rho ~= " << est.value;
        throw NotCertified(msg.str(), est.value);
    }
    ContractionCertificate cert;
    cert.k = a;
    cert.rho = est.value;
    cert.rho_upper = est.upper;
    cert.S = neumann_sum(a, kDefaultNeumannTol, &cert.series_terms);
    const SquareMatrix id = SquareMatrix::identity(a.dim());
    cert.residual = ring_norm((id - a) * cert.S - id);
    return cert;
}

ModuleVector apriori_bound(const ContractionCertificate& cert, const ModuleVector& d0,
                           std::size_t n)
{
    if (!OrthantCone(d0.dim()).contains(d0))
        throw UsageError("apriori_bound: initial distance must lie in the cone");
    ModuleVector b = cert.S * d0;
    for (std::size_t i = 0; i < n; ++i) b = cert.k * b;
    return b;
}

// --- comparison functions ---------------------------------------------------

LinearComparison::LinearComparison(SquareMatrix lambda) : cert_(certify_in_K(lambda))
{
    const std::size_t n = cert_.k.dim();
    const SquareMatrix gap = SquareMatrix::identity(n) - cert_.k;
    identity_dominates_ = ring_leq(SquareMatrix::zero(n), gap) && gap != SquareMatrix::zero(n);
}

ModuleVector LinearComparison::operator()(const ModuleVector& t) const
{
    return comparison_apply(*this, t);
}

ComparisonFunction LinearComparison::as_function() const
{
    return [phi = *this](const ModuleVector& t) { return phi(t); };
}

ModuleVector comparison_apply(const LinearComparison& phi, const ModuleVector& t)
{
    if (!OrthantCone(phi.lambda().dim()).contains(t))
        throw UsageError("comparison function argument must lie in the cone");
    return phi.lambda() * t;
}

namespace {

struct ComparisonOutcome {
    std::optional<ComparisonWitness> zero_and_decrease;
    std::optional<ComparisonWitness> monotone;
    std::optional<ComparisonWitness> interior_gap;
    std::optional<ComparisonWitness> iterates_vanish;
};

bool is_zero(const ModuleVector& v)
{
    return std::all_of(v.values().begin(), v.values().end(), [](double x) { return x == 0.0; });
}

} // namespace

ComparisonAxiomReport check_comparison_axioms(const ComparisonFunction& phi,
                                              const PointSampler& cone_points,
                                              std::size_t count, std::uint64_t seed,
                                              Execution exec)
{
    if (count == 0) throw UsageError("check_comparison_axioms: count must be >= 1");

    auto outcomes = collect_samples<ComparisonOutcome>(
        count, seed, exec,
        [&](std::size_t index, Rng& rng) -> std::optional<ComparisonOutcome> {
            const ModuleVector t1 = cone_points(rng);
            const ModuleVector t2 = t1 + cone_points(rng);
            const std::size_t n = t1.dim();
            const OrthantCone cone(n);
            if (!cone.contains(t1)) throw UsageError("cone sampler produced a point outside P");

            ComparisonOutcome out;

            // (i): phi(0) = 0 once, then phi(t) in P and phi(t) <_P t.
            const ModuleVector zero(n);
            if (index == 0) {
                const ModuleVector p0 = phi(zero);
                if (p0 != zero) out.zero_and_decrease = ComparisonWitness{zero, zero, p0};
            }
            const ModuleVector p1 = phi(t1);
            if (!out.zero_and_decrease && !is_zero(t1) &&
                !(cone.contains(p1) && cone.lt(p1, t1)))
                out.zero_and_decrease = ComparisonWitness{t1, zero, p1};

            // (ii)
            const ModuleVector p2 = phi(t2);
            if (!cone.leq(p1, p2 + ModuleVector::constant(n, kOrderSlack)))
                out.monotone = ComparisonWitness{t1, t2, p2};

            // (iii): move t1 into the interior.
            std::uniform_real_distribution<double> lift(1e-3, 1.0);
            ModuleVector t3 = t1;
            for (std::size_t i = 0; i < n; ++i)
                if (t3[i] == 0.0) t3[i] = lift(rng);
            const ModuleVector p3 = phi(t3);
            if (!cone.ll(p3, t3)) out.interior_gap = ComparisonWitness{t3, t3 - p3, p3};

            // (iv): phi^n(t) << c for a small interior c, and staying there.
            if (!is_zero(t1)) {
                std::uniform_real_distribution<double> small(1e-6, 1e-3);
                ModuleVector c(n);
                for (std::size_t i = 0; i < n; ++i) c[i] = small(rng);
                ModuleVector u = t1;
                bool vanished = false;
                for (std::size_t k = 0; k < kComparisonIterateBudget; ++k) {
                    if (cone.ll(u, c)) {
                        vanished = true;
                        ModuleVector w = u;
                        for (int extra = 0; extra < 8 && vanished; ++extra) {
                            w = phi(w);
                            vanished = cone.ll(w, c);
                        }
                        break;
                    }
                    ModuleVector next = phi(u);
                    if (next == u || !next.all_finite()) break; // stuck away from zero
                    u = std::move(next);
                }
                if (!vanished) out.iterates_vanish = ComparisonWitness{t1, c, u};
            }

            if (!out.zero_and_decrease && !out.monotone && !out.interior_gap &&
                !out.iterates_vanish)
                return std::nullopt;
            return out;
        });

    ComparisonAxiomReport report;
    report.samples_tested = count;
    for (auto& o : outcomes) {
        if (o.zero_and_decrease) report.zero_and_decrease.push_back(std::move(*o.zero_and_decrease));
        if (o.monotone) report.monotone.push_back(std::move(*o.monotone));
        if (o.interior_gap) report.interior_gap.push_back(std::move(*o.interior_gap));
        if (o.iterates_vanish) report.iterates_vanish.push_back(std::move(*o.iterates_vanish));
    }
    return report;
}

} // namespace perov
