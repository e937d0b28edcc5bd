#pragma once

#include <stdexcept>
#include <string>

namespace perov {

/// Precondition violated by the caller: dimension mismatch, bad tolerance,
/// vector outside the cone where one is required.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A map evaluation produced NaN or overflowed.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative routine ran out of budget before meeting its tolerance.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double lower, double upper)
        : std::runtime_error(what), lower_(lower), upper_(upper) {}

    /// Last bracket held when the budget ran out.
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

private:
    double lower_;
    double upper_;
};

/// Spectral radius could not be shown to lie below one.
class NotCertified : public std::runtime_error {
public:
    NotCertified(const std::string& what, double rho)
        : std::runtime_error(what), rho_(rho) {}

    double rho() const noexcept { return rho_; }

private:
    double rho_;
};

/// A user-supplied hypothesis was found false at a concrete point, e.g. the
/// preimage oracle for g returned a point whose image misses the target.
class HypothesisBreach : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace perov
