#pragma once

// Exact integer matrices: products, powers, characteristic polynomials,
// Smith normal form and rational linear solves. No floating point in here.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "bigint.hpp"

namespace endogrow {

class IntMatrix {
public:
    IntMatrix() = default;

    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, BigInt(0))
    {
    }

    IntMatrix(std::size_t rows, std::size_t cols, std::vector<BigInt> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries))
    {
        if (entries_.size() != rows_ * cols_) {
            throw InvalidArgument("matrix entry count does not match its shape");
        }
    }

    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        entries_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) {
                throw InvalidArgument("ragged matrix literal");
            }
            for (long long x : row) {
                entries_.emplace_back(x);
            }
        }
    }

    static IntMatrix from_rows(const std::vector<IntVector>& rows)
    {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.front().size();
        std::vector<BigInt> entries;
        entries.reserve(r * c);
        for (const auto& row : rows) {
            if (row.size() != c) {
                throw InvalidArgument("ragged matrix rows");
            }
            entries.insert(entries.end(), row.begin(), row.end());
        }
        return IntMatrix(r, c, std::move(entries));
    }

    static IntMatrix from_columns(const std::vector<IntVector>& columns, std::size_t rows)
    {
        IntMatrix m(rows, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != rows) {
                throw InvalidArgument("column has wrong length");
            }
            for (std::size_t i = 0; i < rows; ++i) {
                m(i, j) = columns[j][i];
            }
        }
        return m;
    }

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1;
        }
        return m;
    }

    static IntMatrix diagonal(const IntVector& d)
    {
        IntMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            m(i, i) = d[i];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    const std::vector<BigInt>& entries() const { return entries_; }

    BigInt& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    IntVector row(std::size_t i) const
    {
        return IntVector(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                         entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    IntVector column(std::size_t j) const
    {
        IntVector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            c[i] = (*this)(i, j);
        }
        return c;
    }

    std::vector<IntVector> to_rows() const
    {
        std::vector<IntVector> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            out.push_back(row(i));
        }
        return out;
    }

    bool is_zero() const
    {
        return std::all_of(entries_.begin(), entries_.end(), [](const BigInt& x) { return x == 0; });
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> entries_;
};

inline std::ostream& operator<<(std::ostream& os, const IntMatrix& m)
{
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) {
            os << (j ? "," : "") << m(i, j);
        }
        os << ']';
    }
    return os << ']';
}

inline IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw InvalidArgument("mat_mul: dimension mismatch");
    }
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const BigInt& aik = a(i, k);
            if (aik == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) { return mat_mul(a, b); }

inline IntMatrix operator+(const IntMatrix& a, const IntMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("matrix sum: dimension mismatch");
    }
    IntMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c(i, j) += b(i, j);
        }
    }
    return c;
}

inline IntMatrix scale(const IntMatrix& a, const BigInt& s)
{
    IntMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c(i, j) *= s;
        }
    }
    return c;
}

inline IntVector mat_vec(const IntMatrix& a, const IntVector& v)
{
    if (a.cols() != v.size()) {
        throw InvalidArgument("mat_vec: dimension mismatch");
    }
    IntVector out(a.rows(), BigInt(0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (v[j] != 0) {
                out[i] += a(i, j) * v[j];
            }
        }
    }
    return out;
}

inline IntMatrix mat_pow(const IntMatrix& a, std::size_t n)
{
    if (!a.is_square()) {
        throw InvalidArgument("mat_pow: matrix is not square");
    }
    IntMatrix result = IntMatrix::identity(a.rows());
    IntMatrix base = a;
    while (n > 0) {
        if (n & 1u) {
            result = result * base;
        }
        n >>= 1u;
        if (n > 0) {
            base = base * base;
        }
    }
    return result;
}

inline IntMatrix transpose(const IntMatrix& a)
{
    IntMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            t(j, i) = a(i, j);
        }
    }
    return t;
}

inline IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b)
{
    IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            m(i, j) = a(i, j);
        }
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            m(a.rows() + i, a.cols() + j) = b(i, j);
        }
    }
    return m;
}

/// Sub-block with the given row and column index sets.
inline IntMatrix submatrix(const IntMatrix& a, const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& cols)
{
    IntMatrix m(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            m(i, j) = a(rows[i], cols[j]);
        }
    }
    return m;
}

inline BigInt trace(const IntMatrix& a)
{
    BigInt t = 0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) {
        t += a(i, i);
    }
    return t;
}

/// Induced L1 operator norm: the largest absolute column sum.
inline BigInt l1_operator_norm(const IntMatrix& a)
{
    BigInt best = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        best = std::max(best, l1_norm(a.column(j)));
    }
    return best;
}

/// Fraction-free (Bareiss) determinant.
inline BigInt determinant(const IntMatrix& a)
{
    if (!a.is_square()) {
        throw InvalidArgument("determinant: matrix is not square");
    }
    const std::size_t n = a.rows();
    if (n == 0) {
        return 1;
    }
    IntMatrix m = a;
    BigInt sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t swap = k + 1;
            while (swap < n && m(swap, k) == 0) {
                ++swap;
            }
            if (swap == n) {
                return 0;
            }
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(k, j), m(swap, j));
            }
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
            }
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

/// Monic characteristic polynomial det(xI - A), coefficients in ascending degree.
struct CharPoly {
    std::vector<BigInt> coefficients;

    std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }

    /// p(A), evaluated exactly by Horner's rule.
    IntMatrix evaluate(const IntMatrix& a) const
    {
        IntMatrix acc(a.rows(), a.cols());
        const IntMatrix id = IntMatrix::identity(a.rows());
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
            acc = acc * a + scale(id, *it);
        }
        return acc;
    }

    friend bool operator==(const CharPoly&, const CharPoly&) = default;
};

/// Faddeev-LeVerrier. Every division by k is exact over the integers.
inline CharPoly char_poly(const IntMatrix& a)
{
    if (!a.is_square()) {
        throw InvalidArgument("char_poly: matrix is not square");
    }
    const std::size_t n = a.rows();
    std::vector<BigInt> c(n + 1, BigInt(0));
    c[n] = 1;
    const IntMatrix id = IntMatrix::identity(n);
    IntMatrix m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m + scale(id, c[n - k + 1]);
        const BigInt t = trace(a * m);
        c[n - k] = -t / static_cast<long long>(k);
    }
    return CharPoly{std::move(c)};
}

/// U * A * V = D with U, V unimodular and D diagonal with d1 | d2 | ... , all >= 0.
struct SmithForm {
    IntMatrix D;
    IntMatrix U;
    IntMatrix V;

    std::vector<BigInt> invariant_factors() const
    {
        std::vector<BigInt> d;
        for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) {
            d.push_back(D(i, i));
        }
        return d;
    }
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b)
{
    for (std::size_t j = 0; j < m.cols(); ++j) {
        std::swap(m(a, j), m(b, j));
    }
}

inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::swap(m(i, a), m(i, b));
    }
}

// row[target] += factor * row[source]
inline void add_row(IntMatrix& m, std::size_t target, std::size_t source, const BigInt& factor)
{
    for (std::size_t j = 0; j < m.cols(); ++j) {
        m(target, j) += factor * m(source, j);
    }
}

inline void add_col(IntMatrix& m, std::size_t target, std::size_t source, const BigInt& factor)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        m(i, target) += factor * m(i, source);
    }
}

} // namespace detail

inline SmithForm smith_normal_form(const IntMatrix& a)
{
    using namespace detail;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    IntMatrix d = a;
    IntMatrix u = IntMatrix::identity(rows);
    IntMatrix v = IntMatrix::identity(cols);

    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            std::optional<std::pair<std::size_t, std::size_t>> pivot;
            for (std::size_t i = t; i < rows; ++i) {
                for (std::size_t j = t; j < cols; ++j) {
                    if (d(i, j) != 0 && (!pivot || abs(d(i, j)) < abs(d(pivot->first, pivot->second)))) {
                        pivot = {i, j};
                    }
                }
            }
            if (!pivot) {
                break;
            }
            if (pivot->first != t) {
                swap_rows(d, t, pivot->first);
                swap_rows(u, t, pivot->first);
            }
            if (pivot->second != t) {
                swap_cols(d, t, pivot->second);
                swap_cols(v, t, pivot->second);
            }

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (d(i, t) != 0) {
                    const BigInt q = d(i, t) / d(t, t);
                    add_row(d, i, t, -q);
                    add_row(u, i, t, -q);
                    clean = clean && d(i, t) == 0;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (d(t, j) != 0) {
                    const BigInt q = d(t, j) / d(t, t);
                    add_col(d, j, t, -q);
                    add_col(v, j, t, -q);
                    clean = clean && d(t, j) == 0;
                }
            }
            if (!clean) {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and retry.
            std::optional<std::size_t> offending;
            for (std::size_t i = t + 1; i < rows && !offending; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (d(i, j) % d(t, t) != 0) {
                        offending = i;
                        break;
                    }
                }
            }
            if (!offending) {
                break;
            }
            add_row(d, t, *offending, BigInt(1));
            add_row(u, t, *offending, BigInt(1));
        }
        if (d(t, t) < 0) {
            for (std::size_t j = 0; j < cols; ++j) {
                d(t, j) = -d(t, j);
            }
            for (std::size_t j = 0; j < rows; ++j) {
                u(t, j) = -u(t, j);
            }
        }
    }
    return SmithForm{std::move(d), std::move(u), std::move(v)};
}

namespace detail {

// Reduced row echelon form over Q; returns pivot columns.
inline std::vector<std::size_t> rref(std::vector<std::vector<BigRational>>& m, std::size_t ncols)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) {
            ++p;
        }
        if (p == m.size()) {
            continue;
        }
        std::swap(m[r], m[p]);
        const BigRational inv = 1 / m[r][c];
        for (auto& x : m[r]) {
            x *= inv;
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i != r && m[i][c] != 0) {
                const BigRational f = m[i][c];
                for (std::size_t j = 0; j < m[i].size(); ++j) {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::vector<std::vector<BigRational>> to_rational(const IntMatrix& a)
{
    std::vector<std::vector<BigRational>> m(a.rows(), std::vector<BigRational>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            m[i][j] = BigRational(a(i, j));
        }
    }
    return m;
}

} // namespace detail

inline std::size_t rank(const IntMatrix& a)
{
    auto m = detail::to_rational(a);
    return detail::rref(m, a.cols()).size();
}

/// The unique integer x with a*x = b, if one exists. Requires independent columns.
inline std::optional<IntVector> solve_exact(const IntMatrix& a, const IntVector& b)
{
    if (a.rows() != b.size()) {
        throw InvalidArgument("solve_exact: dimension mismatch");
    }
    auto m = detail::to_rational(a);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        m[i].push_back(BigRational(b[i]));
    }
    const auto pivots = detail::rref(m, a.cols());
    if (pivots.size() != a.cols()) {
        throw InvalidArgument("solve_exact: columns are dependent");
    }
    for (std::size_t i = pivots.size(); i < m.size(); ++i) {
        if (m[i][a.cols()] != 0) {
            return std::nullopt;
        }
    }
    IntVector x(a.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        const BigRational& q = m[i][a.cols()];
        if (boost::multiprecision::denominator(q) != 1) {
            return std::nullopt;
        }
        x[pivots[i]] = boost::multiprecision::numerator(q);
    }
    return x;
}

/// Integer inverse of a unimodular matrix; nullopt when |det| != 1.
inline std::optional<IntMatrix> inverse_exact(const IntMatrix& a)
{
    if (!a.is_square()) {
        throw InvalidArgument("inverse_exact: matrix is not square");
    }
    if (abs(determinant(a)) != 1) {
        return std::nullopt;
    }
    const std::size_t n = a.rows();
    auto m = detail::to_rational(a);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m[i].push_back(BigRational(i == j ? 1 : 0));
        }
    }
    detail::rref(m, n);
    IntMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            inv(i, j) = boost::multiprecision::numerator(m[i][n + j]);
        }
    }
    return inv;
}

inline bool is_unimodular(const IntMatrix& a)
{
    return a.is_square() && abs(determinant(a)) == 1;
}

} // namespace endogrow
