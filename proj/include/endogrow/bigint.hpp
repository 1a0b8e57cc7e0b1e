#pragma once

// Arbitrary-precision integer helpers shared by every module.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace endogrow {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<BigInt>;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: dimension mismatch, malformed literal, unsupported kind.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to reach its tolerance.
class ComputationError : public Error {
public:
    using Error::Error;
};

inline BigInt abs(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

inline std::string to_string(const BigInt& x) { return x.str(); }

inline BigInt parse_bigint(std::string_view text)
{
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        ++i;
    }
    if (i == text.size()) {
        throw InvalidArgument("empty integer literal");
    }
    for (std::size_t j = i; j < text.size(); ++j) {
        if (text[j] < '0' || text[j] > '9') {
            throw InvalidArgument("malformed integer literal '" + std::string(text) + "'");
        }
    }
    return BigInt(std::string(text));
}

/// Natural log of |x| for x != 0, accurate to double precision for any size.
inline double log_abs(const BigInt& x)
{
    BigInt a = abs(x);
    if (a == 0) {
        return -std::numeric_limits<double>::infinity();
    }
    const std::size_t bits = boost::multiprecision::msb(a) + 1;
    if (bits <= 60) {
        return std::log(a.convert_to<double>());
    }
    const std::size_t shift = bits - 60;
    BigInt top = a >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

/// x^(1/m) for x >= 0 as a double; 0^(1/m) is 0.
inline double nth_root(const BigInt& x, std::size_t m)
{
    if (x == 0) {
        return 0.0;
    }
    return std::exp(log_abs(x) / static_cast<double>(m));
}

inline BigInt ceil_sqrt(const BigInt& x)
{
    BigInt s = boost::multiprecision::sqrt(x);
    return s * s == x ? s : BigInt(s + 1);
}

inline BigInt l1_norm(const IntVector& v)
{
    BigInt total = 0;
    for (const auto& x : v) {
        total += abs(x);
    }
    return total;
}

/// Floor modulus into [0, d) for d > 0.
inline BigInt mod_floor(const BigInt& x, const BigInt& d)
{
    BigInt r = x % d;
    if (r < 0) {
        r += d;
    }
    return r;
}

} // namespace endogrow
