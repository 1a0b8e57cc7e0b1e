#pragma once

// Test-only helpers: seeded generators and brute-force oracles that share no
// code path with the library algorithms they check.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <endogrow/matrix.hpp>

namespace endogrow::testing {

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo, int hi)
{
    std::uniform_int_distribution<int> dist(lo, hi);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = dist(rng);
        }
    }
    return m;
}

inline IntVector random_vector(std::mt19937_64& rng, std::size_t n, int lo, int hi)
{
    std::uniform_int_distribution<int> dist(lo, hi);
    IntVector v(n);
    for (auto& x : v) {
        x = dist(rng);
    }
    return v;
}

/// Leibniz expansion over all permutations.
inline BigInt leibniz_det(const IntMatrix& a)
{
    const std::size_t n = a.rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    BigInt total = 0;
    do {
        std::size_t inversions = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                inversions += perm[i] > perm[j] ? 1 : 0;
            }
        }
        BigInt term = inversions % 2 ? -1 : 1;
        for (std::size_t i = 0; i < n; ++i) {
            term *= a(i, perm[i]);
        }
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

inline void for_each_subset(std::size_t n, std::size_t k, const auto& fn)
{
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask[i]) {
                subset.push_back(i);
            }
        }
        fn(subset);
    } while (std::prev_permutation(mask.begin(), mask.end()));
}

/// gcd of all k x k minors (the k-th determinantal divisor).
inline BigInt determinantal_divisor(const IntMatrix& a, std::size_t k)
{
    BigInt g = 0;
    for_each_subset(a.rows(), k, [&](const std::vector<std::size_t>& rows) {
        for_each_subset(a.cols(), k, [&](const std::vector<std::size_t>& cols) {
            g = boost::multiprecision::gcd(g, leibniz_det(submatrix(a, rows, cols)));
        });
    });
    return g;
}

/// Schoolbook triple loop, independent of mat_mul's loop order.
inline IntMatrix naive_product(const IntMatrix& a, const IntMatrix& b)
{
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            BigInt s = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                s += a(i, k) * b(k, j);
            }
            c(i, j) = s;
        }
    }
    return c;
}

} // namespace endogrow::testing
