#pragma once

// The concrete ordered algebra everything else lives in: the ring of n x n
// real matrices with the entrywise order and the max-row-sum norm, the module
// R^n it acts on, and the nonnegative orthant as the order cone.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace perov {

class ModuleVector {
public:
    ModuleVector() = default;
    /// Zero vector of dimension n.
    explicit ModuleVector(std::size_t n);
    ModuleVector(std::initializer_list<double> values);
    explicit ModuleVector(std::vector<double> values);

    static ModuleVector constant(std::size_t n, double value);

    std::size_t dim() const noexcept { return data_.size(); }
    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }
    std::span<const double> values() const noexcept { return data_; }

    bool all_finite() const noexcept;
    /// max_i |v_i|
    double norm_inf() const noexcept;
    /// Componentwise absolute value.
    ModuleVector abs() const;

    ModuleVector& operator+=(const ModuleVector& other);
    ModuleVector& operator-=(const ModuleVector& other);
    ModuleVector& operator*=(double s);

    friend bool operator==(const ModuleVector&, const ModuleVector&) = default;

private:
    std::vector<double> data_;
};

ModuleVector operator+(ModuleVector a, const ModuleVector& b);
ModuleVector operator-(ModuleVector a, const ModuleVector& b);
ModuleVector operator-(ModuleVector a);
ModuleVector operator*(double s, ModuleVector v);

class SquareMatrix {
public:
    SquareMatrix() = default;
    /// Zero matrix of dimension n.
    explicit SquareMatrix(std::size_t n);
    /// Row-major rows; throws UsageError unless square, nonempty and finite.
    SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);
    static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);

    static SquareMatrix identity(std::size_t n);
    static SquareMatrix zero(std::size_t n) { return SquareMatrix(n); }
    static SquareMatrix diagonal(const ModuleVector& d);
    static SquareMatrix constant(std::size_t n, double value);

    std::size_t dim() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

    bool all_finite() const noexcept;
    bool nonnegative() const noexcept;
    SquareMatrix abs() const;

    SquareMatrix& operator+=(const SquareMatrix& other);
    SquareMatrix& operator-=(const SquareMatrix& other);
    SquareMatrix& operator*=(double s);

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b);
SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b);
SquareMatrix operator*(double s, SquareMatrix a);
SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);
ModuleVector operator*(const SquareMatrix& a, const ModuleVector& v);

/// Integer power by repeated squaring; power(A, 0) is the identity.
SquareMatrix power(const SquareMatrix& a, unsigned exponent);

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws UsageError when A is numerically singular.
ModuleVector solve(const SquareMatrix& a, const ModuleVector& b);
SquareMatrix inverse(const SquareMatrix& a);

/// N(A) = max_i sum_j |a_ij|.
double ring_norm(const SquareMatrix& a);

/// Entrywise order on the ring: a_ij <= b_ij for all i, j.
bool ring_leq(const SquareMatrix& a, const SquareMatrix& b);

/// The module action A . v.
ModuleVector mat_apply(const SquareMatrix& a, const ModuleVector& v);

/// The orthant P = { x : x_i >= 0 } in R^n. All predicates are exact sign
/// tests.
class OrthantCone {
public:
    explicit OrthantCone(std::size_t n);

    std::size_t dim() const noexcept { return n_; }

    bool contains(const ModuleVector& v) const;
    /// int P = { x : x_i > 0 }.
    bool interior(const ModuleVector& v) const;

    /// x <=_P y  iff  y - x in P.
    bool leq(const ModuleVector& x, const ModuleVector& y) const;
    /// x <_P y  iff  x <=_P y and x != y.
    bool lt(const ModuleVector& x, const ModuleVector& y) const;
    /// x << y  iff  y - x in int P.
    bool ll(const ModuleVector& x, const ModuleVector& y) const;

private:
    void check(const ModuleVector& v) const;
    std::size_t n_;
};

bool cone_contains(const OrthantCone& p, const ModuleVector& v);
bool order_leq(const OrthantCone& p, const ModuleVector& x, const ModuleVector& y);
bool order_lt(const OrthantCone& p, const ModuleVector& x, const ModuleVector& y);
bool order_ll(const OrthantCone& p, const ModuleVector& x, const ModuleVector& y);

/// Dimension-inferring shorthands for the orthant of x's dimension.
bool leq(const ModuleVector& x, const ModuleVector& y);
bool ll(const ModuleVector& x, const ModuleVector& y);

/// alpha_n = 2^-n . I, the fixed sequence of positive invertible ring
/// elements converging to zero.
SquareMatrix vanishing_sequence_element(std::size_t dim, unsigned n);

} // namespace perov
