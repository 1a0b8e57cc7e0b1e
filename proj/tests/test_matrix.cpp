#include <gtest/gtest.h>

#include <random>

#include <endogrow/matrix.hpp>

#include "support.hpp"

using namespace endogrow;
using endogrow::testing::naive_product;
using endogrow::testing::random_matrix;

TEST(MatMul, RotationExampleSquaresToTwiceIdentity)
{
    const IntMatrix a{{0, 2}, {1, 0}};
    EXPECT_EQ(a * a, (IntMatrix{{2, 0}, {0, 2}}));
}

TEST(MatMul, IdentityIsNeutral)
{
    const IntMatrix a{{4, -1, 7}, {0, 3, 2}};
    EXPECT_EQ(IntMatrix::identity(2) * a, a);
    EXPECT_EQ(a * IntMatrix::identity(3), a);
}

TEST(MatMul, MatchesSchoolbookOracle)
{
    const IntMatrix a{{2, 1}, {1, 1}};
    EXPECT_EQ(a * a, (IntMatrix{{5, 3}, {3, 2}}));
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_matrix(rng, 3, 4, -9, 9);
        const auto y = random_matrix(rng, 4, 2, -9, 9);
        EXPECT_EQ(x * y, naive_product(x, y));
    }
}

TEST(MatMul, DimensionMismatchThrows)
{
    EXPECT_THROW(mat_mul(IntMatrix(2, 3), IntMatrix(2, 3)), InvalidArgument);
}

TEST(MatPow, Examples)
{
    EXPECT_EQ(mat_pow(IntMatrix{{0, 2}, {1, 0}}, 4), (IntMatrix{{4, 0}, {0, 4}}));
    EXPECT_EQ(mat_pow(IntMatrix{{7, 3}, {-2, 5}}, 0), IntMatrix::identity(2));
    const IntMatrix fib{{2, 1}, {1, 1}};
    EXPECT_EQ(mat_pow(fib, 3), (IntMatrix{{13, 8}, {8, 5}}));
    EXPECT_EQ(mat_pow(fib, 3), naive_product(naive_product(fib, fib), fib));
}

TEST(MatPow, ExponentsAdd)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> exp(0, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_matrix(rng, 3, 3, -4, 4);
        const std::size_t m = exp(rng);
        const std::size_t n = exp(rng);
        EXPECT_EQ(mat_pow(a, m + n), mat_mul(mat_pow(a, m), mat_pow(a, n)));
    }
}

TEST(MatPow, LargeEntriesStayExact)
{
    // [[1,1],[1,0]]^n holds consecutive Fibonacci numbers.
    const auto f = mat_pow(IntMatrix{{1, 1}, {1, 0}}, 300);
    BigInt a = 0, b = 1;
    for (int i = 0; i < 300; ++i) {
        BigInt c = a + b;
        a = b;
        b = c;
    }
    EXPECT_EQ(f(0, 1), a);
    EXPECT_EQ(f(0, 0), b);
}

TEST(CharPoly, Examples)
{
    EXPECT_EQ(char_poly(IntMatrix{{0, 2}, {1, 0}}).coefficients, (std::vector<BigInt>{-2, 0, 1}));
    EXPECT_EQ(char_poly(IntMatrix::identity(2)).coefficients, (std::vector<BigInt>{1, -2, 1}));
    EXPECT_EQ(char_poly(IntMatrix{{2, 1}, {1, 1}}).coefficients, (std::vector<BigInt>{1, -3, 1}));
}

TEST(CharPoly, AgreesWithDeterminantExpansionAtIntegerPoints)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const auto a = random_matrix(rng, n, n, -5, 5);
        const auto p = char_poly(a);
        ASSERT_EQ(p.degree(), n);
        EXPECT_EQ(p.coefficients.back(), 1);
        for (int t = -3; t <= 3; ++t) {
            BigInt value = 0;
            for (std::size_t k = p.coefficients.size(); k-- > 0;) {
                value = value * t + p.coefficients[k];
            }
            const auto shifted = scale(IntMatrix::identity(n), BigInt(t)) + scale(a, BigInt(-1));
            EXPECT_EQ(value, endogrow::testing::leibniz_det(shifted));
        }
    }
}

TEST(CharPoly, CayleyHamiltonHoldsExactly)
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const auto a = random_matrix(rng, n, n, -6, 6);
        EXPECT_TRUE(char_poly(a).evaluate(a).is_zero()) << a;
    }
}

TEST(Determinant, MatchesLeibniz)
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const auto a = random_matrix(rng, n, n, -3, 3);
        EXPECT_EQ(determinant(a), endogrow::testing::leibniz_det(a));
    }
}

namespace {

void expect_smith_invariants(const IntMatrix& a, const SmithForm& s)
{
    EXPECT_EQ(s.U * a * s.V, s.D);
    EXPECT_EQ(abs(determinant(s.U)), 1);
    EXPECT_EQ(abs(determinant(s.V)), 1);
    const auto d = s.invariant_factors();
    for (std::size_t i = 0; i < s.D.rows(); ++i) {
        for (std::size_t j = 0; j < s.D.cols(); ++j) {
            if (i != j) {
                EXPECT_EQ(s.D(i, j), 0);
            }
        }
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_GE(d[i], 0);
        if (i + 1 < d.size() && d[i] != 0) {
            EXPECT_EQ(d[i + 1] % d[i], 0);
        }
        if (d[i] == 0 && i + 1 < d.size()) {
            EXPECT_EQ(d[i + 1], 0);
        }
    }
}

} // namespace

TEST(SmithNormalForm, Examples)
{
    const IntMatrix a{{2, 0}, {0, 3}};
    const auto s = smith_normal_form(a);
    EXPECT_EQ(s.D, (IntMatrix{{1, 0}, {0, 6}}));
    expect_smith_invariants(a, s);

    const auto id = smith_normal_form(IntMatrix::identity(3));
    EXPECT_EQ(id.D, IntMatrix::identity(3));

    const IntMatrix b{{2, 0}, {0, 0}};
    EXPECT_EQ(smith_normal_form(b).D, (IntMatrix{{2, 0}, {0, 0}}));
}

TEST(SmithNormalForm, InvariantFactorsMatchDeterminantalDivisors)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t rows = 1 + trial % 3;
        const std::size_t cols = 1 + (trial / 3) % 3;
        const auto a = random_matrix(rng, rows, cols, -6, 6);
        const auto s = smith_normal_form(a);
        expect_smith_invariants(a, s);
        const auto d = s.invariant_factors();
        BigInt product = 1;
        for (std::size_t k = 1; k <= d.size(); ++k) {
            product *= d[k - 1];
            EXPECT_EQ(product, endogrow::testing::determinantal_divisor(a, k)) << a;
        }
    }
}

TEST(SolveExact, RecoversCoordinates)
{
    const IntMatrix basis{{2, 0}, {0, 3}};
    EXPECT_EQ(solve_exact(basis, IntVector{2, 3}), (IntVector{1, 1}));
    EXPECT_FALSE(solve_exact(basis, IntVector{1, 0}).has_value());
    EXPECT_THROW(solve_exact(IntMatrix{{1, 2}, {2, 4}}, IntVector{1, 2}), InvalidArgument);

    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 30; ++trial) {
        const auto b = random_matrix(rng, 3, 2, -4, 4);
        if (rank(b) < 2) {
            continue;
        }
        const auto coords = endogrow::testing::random_vector(rng, 2, -9, 9);
        EXPECT_EQ(solve_exact(b, mat_vec(b, coords)), coords);
    }
}

TEST(InverseExact, UnimodularOnly)
{
    const IntMatrix a{{2, 1}, {1, 1}};
    const auto inv = inverse_exact(a);
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(*inv, (IntMatrix{{1, -1}, {-1, 2}}));
    EXPECT_FALSE(inverse_exact(IntMatrix{{2, 0}, {0, 1}}).has_value());
}
