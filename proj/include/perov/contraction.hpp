#pragma once

#include "perov/ordered_algebra.hpp"
#include "perov/sampling.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace perov {

inline constexpr double kDefaultSpectralTol = 1e-12;
inline constexpr double kDefaultNeumannTol = 1e-13;
inline constexpr double kCertificateResidual = 1e-10;
inline constexpr std::size_t kPowerIterationBudget = 100'000;
inline constexpr std::size_t kNeumannBudget = 1'000'000;

enum class SpectralMethod {
    power_iteration, ///< Collatz-Wielandt bracket closed within tolerance
    gelfand,         ///< reducible or periodic case: Gelfand sequence alone
};

struct SpectralEstimate {
    double value = 0.0;
    /// Bracket around rho(A). For power iteration it is the Collatz-Wielandt
    /// bracket; for the Gelfand fallback the lower end is the best
    /// Collatz-Wielandt bound and the upper end the Gelfand value.
    double lower = 0.0;
    double upper = 0.0;
    SpectralMethod method = SpectralMethod::power_iteration;
    std::size_t iterations = 0;
    /// N(A^m)^(1/m) at the Gelfand stopping index m = 2^gelfand_squarings.
    double gelfand = 0.0;
    unsigned gelfand_squarings = 0;
};

/// Spectral radius of a nonnegative matrix.
///
/// Power iteration runs on A + I (same Perron vector, radius shifted by one,
/// and aperiodic even when A is not) and keeps the Collatz-Wielandt bracket
///   min_i (Bv)_i / v_i <= rho(B) <= max_i (Bv)_i / v_i,
/// which holds for every positive v. The Gelfand sequence N(A^(2^j))^(2^-j)
/// is computed by normalised repeated squaring alongside it; when the bracket
/// does not close within the budget (reducible or defective A) the Gelfand
/// value is returned alone.
///
/// Throws UsageError for negative entries or tol <= 0, NonConvergence when
/// neither route reaches tol.
SpectralEstimate estimate_spectral_radius(const SquareMatrix& a, double tol = kDefaultSpectralTol);

double spectral_radius(const SquareMatrix& a, double tol = kDefaultSpectralTol);

/// Witness that k belongs to the set of ring elements whose Neumann series
/// converges: rho(k) < 1 together with the series limit S = (I - k)^-1.
struct ContractionCertificate {
    SquareMatrix k;
    double rho = 0.0;
    double rho_upper = 0.0;
    SquareMatrix S;
    std::size_t series_terms = 0;
    /// N((I - k) S - I)
    double residual = 0.0;
};

/// Partial sums I + A + ... + A^n until the certified tail bound
/// N(A^(n+1)) N(S_n) / (1 - N(A^(n+1))) drops to tol. Throws NonConvergence
/// when the term budget runs out and NumericalError when the final residual
/// exceeds kCertificateResidual.
SquareMatrix neumann_sum(const SquareMatrix& a, double tol = kDefaultNeumannTol,
                         std::size_t* terms_used = nullptr);

/// Throws NotCertified when rho(A) >= 1 - tol, UsageError for negative entries.
ContractionCertificate certify_in_K(const SquareMatrix& a, double tol = kDefaultSpectralTol);

/// k^n S d0: the tail of the telescoped distance bound after n steps.
ModuleVector apriori_bound(const ContractionCertificate& cert, const ModuleVector& d0,
                           std::size_t n);

/// A comparison function on the orthant: phi(t) must lie in P for t in P.
using ComparisonFunction = std::function<ModuleVector(const ModuleVector&)>;

/// phi(t) = lambda t with lambda certified.
class LinearComparison {
public:
    /// Throws UsageError if lambda has a negative entry and NotCertified if
    /// rho(lambda) is not below one.
    explicit LinearComparison(SquareMatrix lambda);

    const SquareMatrix& lambda() const noexcept { return cert_.k; }
    const ContractionCertificate& certificate() const noexcept { return cert_; }
    /// (I - lambda)^-1, witnessed by the Neumann sum.
    const SquareMatrix& deficiency_inverse() const noexcept { return cert_.S; }
    /// 0 < I - lambda in the entrywise ring order. When false, phi(t) <_P t
    /// fails for some cone vector t.
    bool identity_dominates() const noexcept { return identity_dominates_; }

    ModuleVector operator()(const ModuleVector& t) const;
    ComparisonFunction as_function() const;

private:
    ContractionCertificate cert_;
    bool identity_dominates_ = false;
};

/// lambda . t. Throws UsageError when t is outside the cone.
ModuleVector comparison_apply(const LinearComparison& phi, const ModuleVector& t);

struct ComparisonWitness {
    ModuleVector t;
    ModuleVector other; ///< t2 for monotonicity, c for the iterate check
    ModuleVector value; ///< the offending phi value
};

inline constexpr std::size_t kComparisonIterateBudget = 10'000;

struct ComparisonAxiomReport {
    std::size_t samples_tested = 0;
    std::vector<ComparisonWitness> zero_and_decrease; ///< phi(0) = 0, phi(t) <_P t
    std::vector<ComparisonWitness> monotone;          ///< t1 <=_P t2 => phi(t1) <=_P phi(t2)
    std::vector<ComparisonWitness> interior_gap;      ///< t in int P => t - phi(t) in int P
    std::vector<ComparisonWitness> iterates_vanish;   ///< phi^n(t) << c eventually

    bool passed() const noexcept
    {
        return zero_and_decrease.empty() && monotone.empty() && interior_gap.empty() &&
               iterates_vanish.empty();
    }
};

/// Sampled check of the four comparison-function axioms. Sampling can only
/// falsify: a passing report is evidence, not proof. The iterate axiom is
/// checked with kComparisonIterateBudget applications per sample.
ComparisonAxiomReport check_comparison_axioms(const ComparisonFunction& phi,
                                              const PointSampler& cone_points,
                                              std::size_t count,
                                              std::uint64_t seed = kDefaultSeed,
                                              Execution exec = Execution::serial);

std::string to_string(SpectralMethod m);

} // namespace perov
