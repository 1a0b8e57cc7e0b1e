#pragma once

// Growth rates: K_m tables with their m-th roots, exact values on abelian
// groups, the Heisenberg layer formula, H_r membership probes and the
// distortion rate of a semidirect product.
//
// Estimators. K_m is submultiplicative, so inf_m K_m^(1/m) equals the limit;
// over a finite prefix the infimum can only overshoot it (inf_bound is an
// upper bound on the limit). ratio_estimate is the geometric mean of the
// consecutive ratios over the last half of the table,
//     (K_M / K_{M-w})^(1/w),  w = floor(M/2) rounded down to even (if > 1),
// which converges much faster and is exact for sequences that are
// geometric up to a periodic factor whose period divides w. An even window
// absorbs the sign alternation of eigenvalue pairs +-lambda.

#include <cmath>
#include <cstdio>
#include <optional>

#include "endomorphism.hpp"
#include "length.hpp"
#include "roots.hpp"

namespace endogrow {

enum class GrowthMethod { ExactSpectral, KmSequence };
enum class GrowthStatus { Converged, Truncated, Trivial };

inline std::string to_string(GrowthStatus s)
{
    switch (s) {
    case GrowthStatus::Converged:
        return "converged";
    case GrowthStatus::Truncated:
        return "truncated";
    case GrowthStatus::Trivial:
        return "trivial";
    }
    return "?";
}

/// Nine significant digits, as used in every table.
inline std::string format_real(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

struct GrowthEstimate {
    std::vector<BigInt> K;       ///< K[m-1] = K_m
    std::vector<double> roots;   ///< K_m^(1/m)
    double inf_bound = 0;
    double ratio_estimate = 0;
    double spread = 0;           ///< max - min of consecutive ratios in the window
    GrowthMethod method = GrowthMethod::KmSequence;
    LengthMode metric = LengthMode::Exact;
    GrowthStatus status = GrowthStatus::Converged;
    std::size_t requested_m = 0;

    std::size_t size() const { return K.size(); }
};

namespace detail {

/// Window length for a table of M terms.
inline std::size_t window(std::size_t M)
{
    const std::size_t w = M / 2;
    return w > 1 && w % 2 == 1 ? w - 1 : w;
}

/// Geometric mean of K_{m+1}/K_m over the last window(M) steps of K_1..K_M.
inline double window_ratio(const std::vector<BigInt>& K, std::size_t M)
{
    if (M == 0) {
        return 0;
    }
    if (K[M - 1] == 0) {
        return 0;
    }
    const std::size_t w = window(M);
    if (w == 0) {
        return K[0].convert_to<double>();
    }
    const double logs = log_abs(K[M - 1]) - log_abs(K[M - 1 - w]);
    return std::exp(logs / static_cast<double>(w));
}

inline double window_spread(const std::vector<BigInt>& K)
{
    const std::size_t M = K.size();
    const std::size_t w = window(M);
    if (w == 0 || K.back() == 0) {
        return 0;
    }
    double lo = 1e300, hi = -1e300;
    for (std::size_t m = M - w; m < M; ++m) {
        const double r = std::exp(log_abs(K[m]) - log_abs(K[m - 1]));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return hi - lo;
}

} // namespace detail

/// Fills roots, inf_bound, ratio_estimate and spread from K.
inline void summarize(GrowthEstimate& e)
{
    e.roots.clear();
    e.inf_bound = 0;
    for (std::size_t m = 1; m <= e.K.size(); ++m) {
        const double r = nth_root(e.K[m - 1], m);
        e.roots.push_back(r);
        e.inf_bound = m == 1 ? r : std::min(e.inf_bound, r);
    }
    e.ratio_estimate = detail::window_ratio(e.K, e.K.size());
    e.spread = detail::window_spread(e.K);
}

/// K_m = max_i |alpha^m s_i| for m = 1..M, with exact integer lengths.
/// In BfsOracle mode the table stops (status Truncated) at the first m whose
/// orbit leaves the enumerated ball.
inline GrowthEstimate km_table(const Endomorphism& alpha, std::size_t M, const LengthFunction& length)
{
    if (M == 0) {
        throw InvalidArgument("km_table: need M >= 1");
    }
    GrowthEstimate e;
    e.requested_m = M;
    e.metric = alpha.group().length_mode();
    std::vector<Element> orbit = alpha.group().generators();
    for (std::size_t m = 1; m <= M; ++m) {
        if (e.status == GrowthStatus::Trivial) {
            e.K.push_back(0);
            continue;
        }
        BigInt km = 0;
        try {
            for (auto& x : orbit) {
                x = alpha(x);
                km = std::max(km, length(x).value);
            }
        }
        catch (const OutOfRange&) {
            e.status = GrowthStatus::Truncated;
            break;
        }
        e.K.push_back(km);
        if (km == 0) {
            e.status = GrowthStatus::Trivial;
        }
    }
    summarize(e);
    return e;
}

inline GrowthEstimate km_table(const Endomorphism& alpha, std::size_t M)
{
    return km_table(alpha, M, LengthFunction(alpha.group()));
}

/// Table as TSV: m, K_m, root, and the inf_bound / ratio_estimate of the
/// prefix ending at m (so the last line carries the final values).
inline std::string estimate_tsv(const GrowthEstimate& e)
{
    std::string out = "m\tK_m\troot\tinf_bound\tratio_estimate\n";
    double inf = 0;
    for (std::size_t m = 1; m <= e.K.size(); ++m) {
        inf = m == 1 ? e.roots[0] : std::min(inf, e.roots[m - 1]);
        out += std::to_string(m) + "\t" + e.K[m - 1].str() + "\t" + format_real(e.roots[m - 1]) + "\t" +
               format_real(inf) + "\t" + format_real(detail::window_ratio(e.K, m)) + "\n";
    }
    return out;
}

// --------------------------------------------------------------- exact paths

/// Largest eigenvalue modulus, throwing when the solver does not converge.
inline double checked_spectral_radius(const IntMatrix& a)
{
    return spectral_radius(a).checked();
}

/// Growth rate of a matrix endomorphism of a finitely generated abelian group.
/// Free abelian and sublattice: the spectral radius. Quotients Z^f + T: the
/// spectral radius of the free block when it is not nilpotent (then >= 1);
/// otherwise 1 if alpha^m never vanishes (torsion orbits stay bounded and
/// nonzero) and 0 if it does.
inline double gr_exact_abelian(const Endomorphism& alpha)
{
    const auto* m = alpha.as<MatrixEndo>();
    if (m == nullptr) {
        throw InvalidArgument("gr_exact_abelian: needs a matrix endomorphism");
    }
    const auto* q = alpha.group().as<AbelianQuotientKind>();
    if (q == nullptr) {
        return checked_spectral_radius(m->matrix);
    }
    const std::size_t f = q->free_rank();
    std::vector<std::size_t> free_idx(f);
    for (std::size_t i = 0; i < f; ++i) {
        free_idx[i] = i;
    }
    const double rho = f > 0 ? checked_spectral_radius(submatrix(m->matrix, free_idx, free_idx)) : 0.0;
    if (rho > 0) {
        return rho;
    }
    // Free part dies within f steps; each further step either shrinks the
    // torsion image (at least halving it) or has reached its stable part.
    const BigInt t = torsion_order(*q);
    std::size_t steps = f + 1;
    for (BigInt x = 1; x < t; x *= 2) {
        ++steps;
    }
    for (auto g : alpha.group().generators()) {
        for (std::size_t i = 0; i < steps; ++i) {
            g = alpha(g);
        }
        if (!(g == alpha.group().identity())) {
            return 1.0;
        }
    }
    return 0.0;
}

struct PowerCheck {
    double power_gr = 0;      ///< GR(alpha^n)
    double gr_to_the_n = 0;   ///< GR(alpha)^n
    bool exact = false;       ///< both from the spectral path
};

/// GR(alpha^n) against GR(alpha)^n. Matrix endomorphisms use the spectral
/// path; everything else compares ratio estimates from tables of alpha at M
/// and alpha^n at M / n.
inline PowerCheck gr_power_check(const Endomorphism& alpha, std::size_t n, std::size_t M = 24)
{
    if (n == 0) {
        throw InvalidArgument("gr_power_check: need n >= 1");
    }
    const Endomorphism alpha_n = power(alpha, n);
    if (alpha.as<MatrixEndo>() != nullptr) {
        return {gr_exact_abelian(alpha_n), std::pow(gr_exact_abelian(alpha), static_cast<double>(n)), true};
    }
    const LengthFunction length(alpha.group());
    const double base = km_table(alpha, M, length).ratio_estimate;
    const double powered = km_table(alpha_n, std::max<std::size_t>(1, M / n), length).ratio_estimate;
    return {powered, std::pow(base, static_cast<double>(n)), false};
}

struct NilpotentGrowth {
    std::vector<double> layers;   ///< GR on Gamma_k / Gamma_{k+1}, k = 1, 2
    double combined = 0;          ///< max_k layers[k]^(1/k)
    double without_exponents = 0; ///< max_k layers[k]
};

/// Layer formula for the Heisenberg group (class 2).
inline NilpotentGrowth gr_nilpotent(const Endomorphism& phi)
{
    if (phi.as<HeisenbergEndo>() == nullptr) {
        throw InvalidArgument("gr_nilpotent: needs a heisenberg endomorphism");
    }
    NilpotentGrowth out;
    for (std::size_t k = 1; k <= 2; ++k) {
        const double layer = gr_exact_abelian(induce_on_layer_quotient(phi, k));
        out.layers.push_back(layer);
        out.combined = std::max(out.combined, std::pow(layer, 1.0 / static_cast<double>(k)));
        out.without_exponents = std::max(out.without_exponents, layer);
    }
    return out;
}

// ---------------------------------------------------------------- H_r probe

enum class HrMembership { In, Out, BoundaryUnknown };

inline std::string to_string(HrMembership v)
{
    switch (v) {
    case HrMembership::In:
        return "in";
    case HrMembership::Out:
        return "out";
    case HrMembership::BoundaryUnknown:
        return "boundary-unknown";
    }
    return "?";
}

struct HrVerdict {
    Element element;
    double r = 0;
    HrMembership verdict = HrMembership::BoundaryUnknown;
    double margin = 0.05;
    double estimate = 0;          ///< sampled growth of |alpha^m g|
    std::vector<double> roots;    ///< |alpha^m g|^(1/m), m = 1..samples
};

/// Is g in H_r? Samples the orbit lengths for m <= M and compares their
/// window ratio with r, leaving a margin on either side undecided.
inline HrVerdict hr_probe(const Endomorphism& alpha, const Element& g, double r, std::size_t M = 40,
                          double margin = 0.05)
{
    if (!(r > 1)) {
        throw InvalidArgument("hr_probe: r must exceed 1");
    }
    if (M < 4) {
        throw InvalidArgument("hr_probe: need M >= 4");
    }
    check_member(g, alpha.group());
    const LengthFunction length(alpha.group());
    HrVerdict v{g, r, HrMembership::BoundaryUnknown, margin, 0, {}};
    std::vector<BigInt> lengths;
    Element x = g;
    for (std::size_t m = 1; m <= M; ++m) {
        x = alpha(x);
        try {
            lengths.push_back(length(x).value);
        }
        catch (const OutOfRange&) {
            break;
        }
        v.roots.push_back(nth_root(lengths.back(), m));
    }
    if (lengths.size() < 4) {
        return v;
    }
    v.estimate = detail::window_ratio(lengths, lengths.size());
    if (v.estimate <= r - margin) {
        v.verdict = HrMembership::In;
    }
    else if (v.estimate >= r + margin) {
        v.verdict = HrMembership::Out;
    }
    return v;
}

// ------------------------------------------------------------ extensions

struct ExtensionReport {
    double full = 0;
    double sub = 0;
    double quotient = 0;
    double tolerance = 0;
    bool quotient_below_full = false;   ///< GR on G/H <= GR
    bool full_below_max = false;        ///< GR <= max(GR on H, GR on G/H)
};

inline ExtensionReport make_extension_report(double full, double sub, double quotient, double tol)
{
    return {full, sub, quotient, tol, quotient <= full + tol, full <= std::max(sub, quotient) + tol};
}

/// Abelian case, all three values exact. H is spanned by the columns of basis.
inline ExtensionReport extension_bound_check(const Endomorphism& alpha, const IntMatrix& basis, double tol = 1e-6)
{
    const Endomorphism on_h = restrict(alpha, basis);
    const Endomorphism on_quotient = induce_on_quotient(alpha, basis);
    return make_extension_report(gr_exact_abelian(alpha), gr_exact_abelian(on_h), gr_exact_abelian(on_quotient), tol);
}

/// Heisenberg with H = Gamma_j: the full value comes from the K_m table in the
/// group's own metric, the layers are exact.
inline ExtensionReport extension_bound_check_layer(const Endomorphism& phi, std::size_t j, std::size_t M = 16,
                                                   double tol = 0.1)
{
    if (phi.as<HeisenbergEndo>() == nullptr || j < 1 || j > 3) {
        throw InvalidArgument("extension_bound_check_layer: needs a heisenberg endomorphism and 1 <= j <= 3");
    }
    const double full = km_table(phi, M).ratio_estimate;
    const Endomorphism on_h = restrict_to_layer(phi, j);
    double sub = full;
    if (j > 1) {
        // Gamma_2 = Z (centre) for j = 2, trivial for j = 3.
        sub = on_h.as<MatrixEndo>()->matrix.rows() == 0 ? 0.0 : gr_exact_abelian(on_h);
    }
    // G / Gamma_2 = Z^2 (abelianization); G / Gamma_1 trivial; G / Gamma_3 = G.
    double quotient = 0;
    if (j == 2) {
        quotient = gr_exact_abelian(abelianization(phi));
    }
    else if (j == 3) {
        quotient = full;
    }
    return make_extension_report(full, sub, quotient, tol);
}

// --------------------------------------------------------------- distortion

struct DistortionRate {
    GrowthEstimate table;   ///< K_m over action words of length m
    double K = 1;           ///< max over +-generators q of rho(phi(q))
    double sqrt_K = 1;
};

namespace detail {

/// Every q in Z^s with |q|_1 <= m and |q|_1 = m mod 2 (sums of m signed generators).
inline void for_each_action_word_sum(std::size_t s, std::size_t m, const std::function<void(const IntVector&)>& fn)
{
    IntVector q(s, BigInt(0));
    std::function<void(std::size_t, long long)> rec = [&](std::size_t i, long long budget) {
        if (i == s) {
            if (budget % 2 == 0) {
                fn(q);
            }
            return;
        }
        for (long long x = -budget; x <= budget; ++x) {
            q[i] = x;
            rec(i + 1, budget - (x < 0 ? -x : x));
        }
        q[i] = 0;
    };
    rec(0, static_cast<long long>(m));
}

} // namespace detail

/// K_m = max over length-m words q_1...q_m in the +-generators of Q and
/// base generators h of |phi(q_1)...phi(q_m) h|_1. Q is abelian, so the
/// product is phi(q_1 + ... + q_m) and K_m = max ||phi(q)||_1 over those sums.
inline DistortionRate distortion_rate(const Group& G, std::size_t M)
{
    const auto* k = G.as<SemidirectKind>();
    if (k == nullptr) {
        throw InvalidArgument("distortion_rate: needs a semidirect group");
    }
    if (M == 0) {
        throw InvalidArgument("distortion_rate: need M >= 1");
    }
    DistortionRate out;
    out.table.requested_m = M;
    out.table.metric = LengthMode::Exact;
    for (std::size_t m = 1; m <= M; ++m) {
        BigInt km = k->quotient_rank == 0 ? BigInt(1) : BigInt(0);
        detail::for_each_action_word_sum(k->quotient_rank, m, [&](const IntVector& q) {
            km = std::max(km, l1_operator_norm(k->phi(q)));
        });
        out.table.K.push_back(km);
    }
    summarize(out.table);
    for (std::size_t j = 0; j < k->quotient_rank; ++j) {
        out.K = std::max({out.K, checked_spectral_radius(k->action[j]),
                          checked_spectral_radius(k->action_inverse[j])});
    }
    out.sqrt_K = std::sqrt(out.K);
    return out;
}

} // namespace endogrow
