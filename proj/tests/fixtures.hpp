#pragma once
// Random problem generators shared by the unit tests and the acceptance run.

#include "perov/contraction.hpp"
#include "perov/errors.hpp"
#include "perov/map_spec.hpp"
#include "perov/rmetric.hpp"
#include "perov/solver.hpp"

#include "oracles.hpp"
#include "properties.hpp"

#include <Eigen/Eigenvalues>

namespace fixtures {

using namespace perov;

inline oracle::Mat to_oracle(const SquareMatrix& m)
{
    oracle::Mat out(m.dim(), oracle::Vec(m.dim()));
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) out[i][j] = m(i, j);
    return out;
}

/// Largest eigenvalue modulus from a dense eigensolver.
inline double eigen_radius(const SquareMatrix& a)
{
    Eigen::MatrixXd m(a.dim(), a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    return m.eigenvalues().cwiseAbs().maxCoeff();
}

/// Nonnegative matrix rescaled to the given spectral radius.
inline SquareMatrix with_radius(Rng& rng, std::size_t n, double rho)
{
    SquareMatrix a = props::nonnegative_matrix(rng, n);
    a(0, 0) += 0.1; // never nilpotent
    return (rho / eigen_radius(a)) * a;
}

/// x* = (I - M)^-1 b by Cramer's rule.
inline ModuleVector affine_fixed_point(const SquareMatrix& M, const ModuleVector& b)
{
    oracle::Mat a = to_oracle(M);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (auto& v : a[i]) v = -v;
        a[i][i] += 1.0;
    }
    return ModuleVector(oracle::cramer_solve(a, {b.values().begin(), b.values().end()}));
}

struct AffineProblem {
    MapSpec f;
    WeightedMatrixMetric metric;
    ContractionCertificate cert;
    ModuleVector fixed_point;
};

/// Signed random M shrunk until its Lipschitz matrix under a random positive
/// W is certified with some room to spare.
inline AffineProblem random_affine_problem(Rng& rng, std::size_t n)
{
    std::uniform_real_distribution<double> w(0.1, 2.0);
    SquareMatrix W(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) W(i, j) = w(rng);
    WeightedMatrixMetric metric(W);

    SquareMatrix M(n);
    std::uniform_real_distribution<double> e(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) = e(rng);
    const ModuleVector b = props::uniform_vec(rng, n, -5, 5);
    for (;;) {
        try {
            ContractionCertificate cert = certify_in_K(affine_lipschitz_matrix(M, metric));
            if (cert.rho < 0.95)
                return {MapSpec::affine(M, b), metric, cert, affine_fixed_point(M, b)};
        } catch (const NotCertified&) {
        }
        M *= 0.7;
    }
}

} // namespace fixtures
