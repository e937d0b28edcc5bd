#include "perov/ordered_algebra.hpp"

#include "perov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace perov {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw UsageError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
    }
}

} // namespace

// --- ModuleVector -----------------------------------------------------------

ModuleVector::ModuleVector(std::size_t n) : data_(n, 0.0) {}

ModuleVector::ModuleVector(std::initializer_list<double> values) : data_(values) {}

ModuleVector::ModuleVector(std::vector<double> values) : data_(std::move(values)) {}

ModuleVector ModuleVector::constant(std::size_t n, double value)
{
    return ModuleVector(std::vector<double>(n, value));
}

bool ModuleVector::all_finite() const noexcept
{
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double ModuleVector::norm_inf() const noexcept
{
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

ModuleVector ModuleVector::abs() const
{
    ModuleVector r = *this;
    for (double& x : r.data_) x = std::abs(x);
    return r;
}

ModuleVector& ModuleVector::operator+=(const ModuleVector& other)
{
    require_same_dim(dim(), other.dim(), "vector add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& other)
{
    require_same_dim(dim(), other.dim(), "vector subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ModuleVector& ModuleVector::operator*=(double s)
{
    for (double& x : data_) x *= s;
    return *this;
}

ModuleVector operator+(ModuleVector a, const ModuleVector& b) { return a += b; }
ModuleVector operator-(ModuleVector a, const ModuleVector& b) { return a -= b; }
ModuleVector operator-(ModuleVector a) { return a *= -1.0; }
ModuleVector operator*(double s, ModuleVector v) { return v *= s; }

// --- SquareMatrix -----------------------------------------------------------

SquareMatrix::SquareMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
{
    std::vector<std::vector<double>> r;
    for (const auto& row : rows) r.emplace_back(row);
    *this = from_rows(r);
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    const std::size_t n = rows.size();
    if (n == 0) throw UsageError("matrix must have at least one row");
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            throw UsageError("matrix is not square: row " + std::to_string(i + 1) + " has " +
                             std::to_string(rows[i].size()) + " entries, expected " +
                             std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    if (!m.all_finite()) throw UsageError("matrix entries must be finite");
    return m;
}

SquareMatrix SquareMatrix::identity(std::size_t n)
{
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::diagonal(const ModuleVector& d)
{
    SquareMatrix m(d.dim());
    for (std::size_t i = 0; i < d.dim(); ++i) m(i, i) = d[i];
    return m;
}

SquareMatrix SquareMatrix::constant(std::size_t n, double value)
{
    SquareMatrix m(n);
    std::fill(m.a_.begin(), m.a_.end(), value);
    return m;
}

bool SquareMatrix::all_finite() const noexcept
{
    return std::all_of(a_.begin(), a_.end(), [](double x) { return std::isfinite(x); });
}

bool SquareMatrix::nonnegative() const noexcept
{
    return std::all_of(a_.begin(), a_.end(), [](double x) { return x >= 0.0; });
}

SquareMatrix SquareMatrix::abs() const
{
    SquareMatrix r = *this;
    for (double& x : r.a_) x = std::abs(x);
    return r;
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& other)
{
    require_same_dim(n_, other.n_, "matrix add");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
    return *this;
}

SquareMatrix& SquareMatrix::operator-=(const SquareMatrix& other)
{
    require_same_dim(n_, other.n_, "matrix subtract");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= other.a_[i];
    return *this;
}

SquareMatrix& SquareMatrix::operator*=(double s)
{
    for (double& x : a_) x *= s;
    return *this;
}

SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
SquareMatrix operator*(double s, SquareMatrix a) { return a *= s; }

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b)
{
    require_same_dim(a.dim(), b.dim(), "matrix multiply");
    const std::size_t n = a.dim();
    SquareMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ModuleVector operator*(const SquareMatrix& a, const ModuleVector& v) { return mat_apply(a, v); }

SquareMatrix power(const SquareMatrix& a, unsigned exponent)
{
    SquareMatrix result = SquareMatrix::identity(a.dim());
    SquareMatrix base = a;
    while (exponent > 0) {
        if (exponent & 1U) result = result * base;
        exponent >>= 1U;
        if (exponent > 0) base = base * base;
    }
    return result;
}

ModuleVector solve(const SquareMatrix& a, const ModuleVector& b)
{
    require_same_dim(a.dim(), b.dim(), "solve");
    const std::size_t n = a.dim();
    SquareMatrix m = a;
    ModuleVector x = b;
    const double scale = std::max(ring_norm(a), std::numeric_limits<double>::min());
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        if (std::abs(m(piv, col)) <= 64 * std::numeric_limits<double>::epsilon() * scale) {
            throw UsageError("matrix is singular to working precision");
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(piv, j));
            std::swap(x[col], x[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = m(r, col) / m(col, col);
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) m(r, j) -= factor * m(col, j);
            x[r] -= factor * x[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
        x[i] = s / m(i, i);
    }
    return x;
}

SquareMatrix inverse(const SquareMatrix& a)
{
    const std::size_t n = a.dim();
    SquareMatrix inv(n);
    for (std::size_t j = 0; j < n; ++j) {
        ModuleVector e(n);
        e[j] = 1.0;
        const ModuleVector col = solve(a, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

double ring_norm(const SquareMatrix& a)
{
    double best = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < a.dim(); ++j) row += std::abs(a(i, j));
        best = std::max(best, row);
    }
    return best;
}

bool ring_leq(const SquareMatrix& a, const SquareMatrix& b)
{
    require_same_dim(a.dim(), b.dim(), "ring_leq");
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (!(a(i, j) <= b(i, j))) return false;
    return true;
}

ModuleVector mat_apply(const SquareMatrix& a, const ModuleVector& v)
{
    require_same_dim(a.dim(), v.dim(), "mat_apply");
    const std::size_t n = a.dim();
    ModuleVector r(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

// --- OrthantCone ------------------------------------------------------------

OrthantCone::OrthantCone(std::size_t n) : n_(n)
{
    if (n == 0) throw UsageError("cone dimension must be positive");
}

void OrthantCone::check(const ModuleVector& v) const { require_same_dim(n_, v.dim(), "cone"); }

bool OrthantCone::contains(const ModuleVector& v) const
{
    check(v);
    for (std::size_t i = 0; i < n_; ++i)
        if (!(v[i] >= 0.0)) return false;
    return true;
}

bool OrthantCone::interior(const ModuleVector& v) const
{
    check(v);
    for (std::size_t i = 0; i < n_; ++i)
        if (!(v[i] > 0.0)) return false;
    return true;
}

// The comparisons below are done per component rather than by forming y - x,
// so that y_i - x_i >= 0 is decided without a rounding step.
bool OrthantCone::leq(const ModuleVector& x, const ModuleVector& y) const
{
    check(x);
    check(y);
    for (std::size_t i = 0; i < n_; ++i)
        if (!(x[i] <= y[i])) return false;
    return true;
}

bool OrthantCone::lt(const ModuleVector& x, const ModuleVector& y) const
{
    return leq(x, y) && x != y;
}

bool OrthantCone::ll(const ModuleVector& x, const ModuleVector& y) const
{
    check(x);
    check(y);
    for (std::size_t i = 0; i < n_; ++i)
        if (!(x[i] < y[i])) return false;
    return true;
}

bool cone_contains(const OrthantCone& p, const ModuleVector& v) { return p.contains(v); }

bool order_leq(const OrthantCone& p, const ModuleVector& x, const ModuleVector& y)
{
    return p.leq(x, y);
}

bool order_lt(const OrthantCone& p, const ModuleVector& x, const ModuleVector& y)
{
    return p.lt(x, y);
}

bool order_ll(const OrthantCone& p, const ModuleVector& x, const ModuleVector& y)
{
    return p.ll(x, y);
}

bool leq(const ModuleVector& x, const ModuleVector& y) { return OrthantCone(x.dim()).leq(x, y); }

bool ll(const ModuleVector& x, const ModuleVector& y) { return OrthantCone(x.dim()).ll(x, y); }

SquareMatrix vanishing_sequence_element(std::size_t dim, unsigned n)
{
    return std::ldexp(1.0, -static_cast<int>(n)) * SquareMatrix::identity(dim);
}

} // namespace perov
