#pragma once

// Spectral radius of an integer matrix from its exact characteristic
// polynomial. Repeated roots are removed exactly (square-free part over Q)
// before the Aberth-Ehrlich simultaneous iteration, so the iteration only
// ever sees simple roots and converges quadratically.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "matrix.hpp"

namespace endogrow {

struct RootSolverOptions {
    double tolerance = 1e-12;
    std::size_t max_iterations = 10000;
};

enum class SolverStatus { Converged, NotConverged };

/// Roots of a polynomial with the solver's own diagnostics.
struct RootSet {
    std::vector<std::complex<long double>> roots;
    SolverStatus status = SolverStatus::Converged;
    std::size_t iterations = 0;
    long double max_residual = 0; ///< normwise backward error of the worst root
};

struct SpectralRadius {
    double value = 0.0;
    SolverStatus status = SolverStatus::Converged;
    std::size_t iterations = 0;

    bool converged() const { return status == SolverStatus::Converged; }

    /// The value, or a ComputationError when the solver gave up.
    double checked() const
    {
        if (!converged()) {
            throw ComputationError("spectral radius: root solver did not converge");
        }
        return value;
    }
};

namespace poly {

using RationalPoly = std::vector<BigRational>; // ascending degree, no trailing zeros

inline void trim(RationalPoly& p)
{
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

inline RationalPoly derivative(const RationalPoly& p)
{
    RationalPoly d;
    for (std::size_t k = 1; k < p.size(); ++k) {
        d.push_back(p[k] * static_cast<long long>(k));
    }
    trim(d);
    return d;
}

/// Polynomial long division a = q*b + r.
inline std::pair<RationalPoly, RationalPoly> divide(RationalPoly a, const RationalPoly& b)
{
    trim(a);
    if (b.empty()) {
        throw InvalidArgument("polynomial division by zero");
    }
    if (a.size() < b.size()) {
        return {RationalPoly{}, a};
    }
    RationalPoly q(a.size() - b.size() + 1, BigRational(0));
    while (!a.empty() && a.size() >= b.size()) {
        const std::size_t shift = a.size() - b.size();
        const BigRational f = a.back() / b.back();
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) {
            a[shift + i] -= f * b[i];
        }
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

inline RationalPoly gcd(RationalPoly a, RationalPoly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divide(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const BigRational lead = a.back();
        for (auto& x : a) {
            x /= lead;
        }
    }
    return a;
}

/// Square-free part of an integer polynomial, returned monic over Q.
inline RationalPoly square_free(const std::vector<BigInt>& coefficients)
{
    RationalPoly p;
    for (const auto& c : coefficients) {
        p.emplace_back(c);
    }
    trim(p);
    if (p.size() <= 1) {
        return p;
    }
    const RationalPoly g = gcd(p, derivative(p));
    RationalPoly s = divide(p, g).first;
    const BigRational lead = s.back();
    for (auto& x : s) {
        x /= lead;
    }
    return s;
}

} // namespace poly

/// Aberth-Ehrlich iteration on a polynomial with (assumed) simple roots.
/// Coefficients ascending; leading coefficient nonzero.
inline RootSet aberth_roots(const std::vector<long double>& coeffs, const RootSolverOptions& options = {})
{
    using cplx = std::complex<long double>;
    RootSet out;
    const std::size_t n = coeffs.size() - 1;
    if (coeffs.size() < 2) {
        return out;
    }

    auto eval = [&](const cplx& z, cplx& value, cplx& deriv, long double& scale) {
        value = 0;
        deriv = 0;
        scale = 0;
        const long double az = std::abs(z);
        for (std::size_t k = coeffs.size(); k-- > 0;) {
            deriv = deriv * z + value;
            value = value * z + coeffs[k];
            scale = scale * az + std::abs(coeffs[k]);
        }
    };

    // Cauchy bound on root moduli; start on a circle of that size, angles offset
    // so that no initial guess sits on a symmetry axis.
    long double bound = 0;
    for (std::size_t k = 0; k < n; ++k) {
        bound = std::max(bound, std::abs(coeffs[k] / coeffs[n]));
    }
    bound += 1;
    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const long double angle = 2 * std::numbers::pi_v<long double> * static_cast<long double>(k) /
                                      static_cast<long double>(n) +
                                  0.4L;
        z[k] = std::polar(bound * 0.5L, angle);
    }

    std::vector<bool> done(n, false);
    for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
        bool all_done = true;
        for (std::size_t i = 0; i < n; ++i) {
            cplx value, deriv;
            long double scale;
            eval(z[i], value, deriv, scale);
            if (std::abs(value) <= static_cast<long double>(options.tolerance) * 1e-3L * scale) {
                done[i] = true;
                continue;
            }
            all_done = false;
            const cplx ratio = value / deriv;
            cplx repulsion = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    repulsion += 1.0L / (z[i] - z[j]);
                }
            }
            const cplx step = ratio / (1.0L - ratio * repulsion);
            if (std::isfinite(step.real()) && std::isfinite(step.imag())) {
                z[i] -= step;
            }
            else {
                z[i] += cplx(1e-3L * bound, 1e-3L * bound);
            }
        }
        if (all_done) {
            break;
        }
    }

    out.max_residual = 0;
    for (const auto& r : z) {
        cplx value, deriv;
        long double scale;
        eval(r, value, deriv, scale);
        out.max_residual = std::max(out.max_residual, scale > 0 ? std::abs(value) / scale : 0.0L);
    }
    out.roots = std::move(z);
    out.status = out.max_residual <= static_cast<long double>(options.tolerance) ? SolverStatus::Converged
                                                                                 : SolverStatus::NotConverged;
    return out;
}

/// Roots of an integer polynomial (ascending coefficients), multiplicities dropped.
inline RootSet distinct_roots(const std::vector<BigInt>& coefficients, const RootSolverOptions& options = {})
{
    auto s = poly::square_free(coefficients);
    RootSet out;
    // Zero root handled exactly.
    bool has_zero = false;
    if (!s.empty() && s.front() == 0) {
        has_zero = true;
        s.erase(s.begin());
    }
    if (s.size() >= 2) {
        std::vector<long double> c;
        c.reserve(s.size());
        for (const auto& x : s) {
            c.push_back(x.convert_to<long double>());
        }
        out = aberth_roots(c, options);
    }
    if (has_zero) {
        out.roots.emplace_back(0.0L, 0.0L);
    }
    return out;
}

/// Largest eigenvalue modulus of a square integer matrix. Nilpotent matrices give 0.
inline SpectralRadius spectral_radius(const IntMatrix& a, double tol = 1e-12)
{
    if (!a.is_square()) {
        throw InvalidArgument("spectral_radius: matrix is not square");
    }
    if (!(tol > 0)) {
        throw InvalidArgument("spectral_radius: tolerance must be positive");
    }
    SpectralRadius out;
    if (a.rows() == 0) {
        return out;
    }
    const RootSet roots = distinct_roots(char_poly(a).coefficients, RootSolverOptions{tol, 10000});
    out.status = roots.status;
    out.iterations = roots.iterations;
    for (const auto& r : roots.roots) {
        out.value = std::max(out.value, static_cast<double>(std::abs(r)));
    }
    return out;
}

} // namespace endogrow
