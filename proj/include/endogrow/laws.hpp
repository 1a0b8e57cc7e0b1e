#pragma once

// Runnable checks of the growth-rate results: each law measures the relevant
// quantities on an instance and compares them within a tolerance. Instances
// that do not meet a law's hypotheses are reported Inapplicable, never Fail.

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <random>

#include "growth.hpp"

namespace endogrow {

/// Canonical law ids, in report order.
inline const std::vector<std::string>& law_ids()
{
    static const std::vector<std::string> ids{
        "thm2.2.3-power",    "thm3.1-finite-index", "lemma3.2-quotient", "thm3.3-extension",
        "cor3.4-complement", "thm4.1-abelian",      "lemma4.3-lcs",      "thm4.4-nilpotent",
        "thm4.4-counterexample", "lemma5.1-direct", "lemma5.2-free",     "thm5.4-semidirect",
        "lemma5.6-polycyclic",   "lemma5.8-distortion"};
    return ids;
}

class UnknownLaw : public InvalidArgument {
public:
    explicit UnknownLaw(const std::string& id) : InvalidArgument("unknown law id '" + id + "'") {}
};

inline std::size_t law_index(const std::string& id)
{
    const auto& ids = law_ids();
    const auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) {
        throw UnknownLaw(id);
    }
    return static_cast<std::size_t>(it - ids.begin());
}

enum class Verdict { Pass, Fail, Inapplicable };

inline std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass:
        return "PASS";
    case Verdict::Fail:
        return "FAIL";
    case Verdict::Inapplicable:
        return "INAPPLICABLE";
    }
    return "?";
}

struct LawOptions {
    std::size_t max_m = 30;
    std::size_t radius = 12;   ///< BFS radius for the distortion law
    double tolerance = 0;      ///< 0: the law's default
};

struct Instance {
    std::string name;
    Endomorphism alpha;
    std::optional<IntMatrix> subgroup;  ///< columns span H (abelian kinds)
    std::size_t layer = 0;              ///< H = Gamma_layer (Heisenberg)
    std::size_t power = 2;
    LawOptions options;
};

struct CatalogEntry {
    std::string law;
    Instance instance;
};

struct Catalog {
    std::uint64_t seed = 0;
    std::vector<CatalogEntry> entries;
};

struct LawCheck {
    std::string id;
    std::string instance;
    std::vector<std::pair<std::string, double>> values;
    double tolerance = 0;
    Verdict verdict = Verdict::Inapplicable;
    std::string note;
};

namespace detail {

inline bool abelian_matrix_instance(const Endomorphism& alpha)
{
    return alpha.as<MatrixEndo>() != nullptr && alpha.group().is_abelian();
}

/// Exact value on abelian matrix endomorphisms, ratio estimate otherwise.
inline double measured_gr(const Endomorphism& alpha, std::size_t M, std::string* note = nullptr)
{
    if (abelian_matrix_instance(alpha)) {
        return gr_exact_abelian(alpha);
    }
    const auto e = km_table(alpha, M);
    if (e.status == GrowthStatus::Truncated && note != nullptr) {
        *note += "table truncated at m = " + std::to_string(e.K.size()) + "; ";
    }
    return e.ratio_estimate;
}

inline double tol_or(const Instance& inst, double fallback)
{
    return inst.options.tolerance > 0 ? inst.options.tolerance : fallback;
}

inline LawCheck inapplicable(LawCheck c, const std::string& why)
{
    c.verdict = Verdict::Inapplicable;
    c.note = why;
    return c;
}

inline Verdict verdict_of(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

/// H spanned by distinct standard generators.
inline bool complemented(const IntMatrix& basis)
{
    std::vector<bool> used(basis.rows(), false);
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        std::optional<std::size_t> hit;
        for (std::size_t i = 0; i < basis.rows(); ++i) {
            if (basis(i, j) == 0) {
                continue;
            }
            if (basis(i, j) != 1 || hit) {
                return false;
            }
            hit = i;
        }
        if (!hit || used[*hit]) {
            return false;
        }
        used[*hit] = true;
    }
    return true;
}

/// Subgroup hypothesis shared by the subgroup/quotient laws; returns a reason
/// when the instance does not qualify.
inline std::optional<std::string> subgroup_gate(const Instance& inst)
{
    if (inst.subgroup) {
        if (inst.alpha.as<MatrixEndo>() == nullptr || inst.alpha.group().as<FreeAbelianKind>() == nullptr) {
            return "subgroup checks need a matrix endomorphism of a free abelian group";
        }
        if (inst.subgroup->rows() != inst.alpha.group().as<FreeAbelianKind>()->rank) {
            return "subgroup basis has the wrong number of rows";
        }
        if (rank(*inst.subgroup) != inst.subgroup->cols()) {
            return "subgroup basis is not independent";
        }
        if (auto g = invariance_violation(inst.alpha, *inst.subgroup)) {
            return "H is not invariant: generator " + std::to_string(*g) + " leaves it";
        }
        return std::nullopt;
    }
    if (inst.layer > 0) {
        if (inst.alpha.as<HeisenbergEndo>() == nullptr) {
            return "layer subgroups are supported for heisenberg endomorphisms";
        }
        if (inst.layer > 3) {
            return "layer index must be 1, 2 or 3";
        }
        return std::nullopt;
    }
    return "instance has no subgroup";
}

inline ExtensionReport extension_report(const Instance& inst, double tol)
{
    if (inst.subgroup) {
        return extension_bound_check(inst.alpha, *inst.subgroup, tol);
    }
    return extension_bound_check_layer(inst.alpha, inst.layer, std::max<std::size_t>(inst.options.max_m, 12), tol);
}

// ----------------------------------------------------------------- the laws

inline LawCheck law_power(LawCheck c, const Instance& inst)
{
    if (inst.power == 0) {
        return inapplicable(c, "power must be at least 1");
    }
    const auto p = gr_power_check(inst.alpha, inst.power, inst.options.max_m);
    c.tolerance = tol_or(inst, p.exact ? 1e-6 : 0.1);
    c.values = {{"n", static_cast<double>(inst.power)}, {"gr_of_power", p.power_gr}, {"gr_to_the_n", p.gr_to_the_n}};
    const double scale = p.exact ? std::max(1.0, p.gr_to_the_n) : 1.0;
    c.verdict = verdict_of(std::abs(p.power_gr - p.gr_to_the_n) <= c.tolerance * scale);
    c.note = p.exact ? "spectral path, relative tolerance" : "ratio estimates";
    return c;
}

inline LawCheck law_finite_index(LawCheck c, const Instance& inst)
{
    if (!inst.subgroup) {
        return inapplicable(c, "instance has no subgroup");
    }
    if (auto why = subgroup_gate(inst)) {
        return inapplicable(c, *why);
    }
    const Group H = sublattice(inst.alpha.group(), *inst.subgroup);
    const auto index = sublattice_index(*H.as<SublatticeKind>());
    if (!index) {
        return inapplicable(c, "H has infinite index");
    }
    c.tolerance = tol_or(inst, 1e-9);
    const double full = gr_exact_abelian(inst.alpha);
    const double sub = gr_exact_abelian(restrict(inst.alpha, *inst.subgroup));
    c.values = {{"index", index->convert_to<double>()}, {"gr", full}, {"gr_on_h", sub}};
    c.verdict = verdict_of(std::abs(full - sub) <= c.tolerance);
    return c;
}

inline LawCheck law_quotient(LawCheck c, const Instance& inst)
{
    if (auto why = subgroup_gate(inst)) {
        return inapplicable(c, *why);
    }
    c.tolerance = tol_or(inst, inst.subgroup ? 1e-6 : 0.1);
    const auto r = extension_report(inst, c.tolerance);
    c.values = {{"gr", r.full}, {"gr_on_quotient", r.quotient}};
    c.verdict = verdict_of(r.quotient_below_full);
    return c;
}

inline LawCheck law_extension(LawCheck c, const Instance& inst)
{
    if (auto why = subgroup_gate(inst)) {
        return inapplicable(c, *why);
    }
    c.tolerance = tol_or(inst, inst.subgroup ? 1e-6 : 0.1);
    const auto r = extension_report(inst, c.tolerance);
    c.values = {{"gr", r.full}, {"gr_on_h", r.sub}, {"gr_on_quotient", r.quotient}};
    c.verdict = verdict_of(r.full_below_max);
    if (r.full < std::max(r.sub, r.quotient) - c.tolerance) {
        c.note = "strict inequality";
    }
    return c;
}

inline LawCheck law_complement(LawCheck c, const Instance& inst)
{
    if (auto why = subgroup_gate(inst)) {
        return inapplicable(c, *why);
    }
    if (!inst.subgroup) {
        return inapplicable(c, "lower central subgroups of the heisenberg group are distorted");
    }
    if (!complemented(*inst.subgroup)) {
        return inapplicable(c, "H is not generated by a subset of the generators");
    }
    c.tolerance = tol_or(inst, 1e-6);
    const auto r = extension_report(inst, c.tolerance);
    c.values = {{"gr", r.full}, {"gr_on_h", r.sub}, {"gr_on_quotient", r.quotient}};
    c.verdict = verdict_of(std::abs(r.full - std::max(r.sub, r.quotient)) <= c.tolerance);
    return c;
}

inline LawCheck law_abelian(LawCheck c, const Instance& inst)
{
    if (!abelian_matrix_instance(inst.alpha)) {
        return inapplicable(c, "needs a matrix endomorphism of an abelian group");
    }
    c.tolerance = tol_or(inst, 0.05);
    const double exact = gr_exact_abelian(inst.alpha);
    const auto e = km_table(inst.alpha, inst.options.max_m);
    c.values = {{"exact", exact}, {"ratio_estimate", e.ratio_estimate}, {"inf_bound", e.inf_bound}};
    c.verdict = verdict_of(std::abs(exact - e.ratio_estimate) <= c.tolerance && e.inf_bound >= exact - 1e-9);
    return c;
}

inline std::vector<double> lcs_layers(const Endomorphism& alpha)
{
    std::vector<double> layers;
    const std::size_t depth = alpha.as<HeisenbergEndo>() != nullptr ? 2 : 1;
    for (std::size_t j = 1; j <= depth; ++j) {
        layers.push_back(gr_exact_abelian(induce_on_layer_quotient(alpha, j)));
    }
    return layers;
}

inline LawCheck law_lcs(LawCheck c, const Instance& inst)
{
    const bool heis = inst.alpha.as<HeisenbergEndo>() != nullptr;
    if (!heis && !abelian_matrix_instance(inst.alpha)) {
        return inapplicable(c, "lower central layers are available for heisenberg and abelian groups");
    }
    if (!heis && inst.alpha.group().as<FreeAbelianKind>() == nullptr) {
        return inapplicable(c, "abelian layers need a free abelian group");
    }
    c.tolerance = tol_or(inst, heis ? 0.1 : 1e-9);
    const double gr = measured_gr(inst.alpha, inst.options.max_m, &c.note);
    c.values = {{"gr", gr}};
    bool ok = true;
    const auto layers = lcs_layers(inst.alpha);
    for (std::size_t j = 1; j <= layers.size(); ++j) {
        const double bound = std::pow(layers[j - 1], 1.0 / static_cast<double>(j));
        c.values.emplace_back("layer" + std::to_string(j) + "_root", bound);
        ok = ok && gr >= bound - c.tolerance;
    }
    c.verdict = verdict_of(ok);
    return c;
}

inline LawCheck law_nilpotent(LawCheck c, const Instance& inst)
{
    if (inst.alpha.as<HeisenbergEndo>() == nullptr) {
        return inapplicable(c, "needs a heisenberg endomorphism");
    }
    c.tolerance = tol_or(inst, 0.1);
    const auto n = gr_nilpotent(inst.alpha);
    const double gr = measured_gr(inst.alpha, inst.options.max_m, &c.note);
    c.values = {{"gr", gr}, {"layer1", n.layers[0]}, {"layer2", n.layers[1]}, {"combined", n.combined}};
    c.verdict = verdict_of(std::abs(gr - n.combined) <= c.tolerance);
    return c;
}

inline LawCheck law_counterexample(LawCheck c, const Instance& inst)
{
    if (inst.alpha.as<HeisenbergEndo>() == nullptr) {
        return inapplicable(c, "needs a heisenberg endomorphism");
    }
    c.tolerance = tol_or(inst, 0.1);
    const auto n = gr_nilpotent(inst.alpha);
    if (n.without_exponents - n.combined <= c.tolerance) {
        return inapplicable(c, "the centre layer does not dominate, so both formulas agree");
    }
    const double gr = measured_gr(inst.alpha, inst.options.max_m, &c.note);
    c.values = {{"gr", gr}, {"with_exponents", n.combined}, {"without_exponents", n.without_exponents}};
    c.verdict = verdict_of(std::abs(gr - n.combined) <= c.tolerance &&
                           std::abs(gr - n.without_exponents) > c.tolerance);
    return c;
}

template <class Kind>
inline LawCheck law_product(LawCheck c, const Instance& inst, double default_tol, const char* what)
{
    const auto* p = inst.alpha.as<ProductEndo>();
    if (inst.alpha.group().as<Kind>() == nullptr || p == nullptr) {
        return inapplicable(c, std::string("needs a factorwise endomorphism of a ") + what);
    }
    c.tolerance = tol_or(inst, default_tol);
    const double full = km_table(inst.alpha, inst.options.max_m).ratio_estimate;
    const double left = measured_gr(p->parts[0], inst.options.max_m, &c.note);
    const double right = measured_gr(p->parts[1], inst.options.max_m, &c.note);
    c.values = {{"gr", full}, {"gr_left", left}, {"gr_right", right}};
    c.verdict = verdict_of(std::abs(full - std::max(left, right)) <= c.tolerance);
    return c;
}

inline LawCheck law_semidirect(LawCheck c, const Instance& inst)
{
    const auto* s = inst.alpha.as<SemidirectEndo>();
    const auto* k = inst.alpha.group().as<SemidirectKind>();
    if (s == nullptr || k == nullptr) {
        return inapplicable(c, "needs an endomorphism of an abelian-by-abelian semidirect product");
    }
    if (!has_finite_order_action(*k)) {
        return inapplicable(c, "the base is distorted (action of infinite order); the eigenvalue formula "
                               "needs an undistorted base");
    }
    c.tolerance = tol_or(inst, 0.1);
    const double base = checked_spectral_radius(s->base);
    const double quotient = checked_spectral_radius(s->quotient);
    const double gr = km_table(inst.alpha, inst.options.max_m).ratio_estimate;
    c.values = {{"gr", gr}, {"rho_base", base}, {"rho_quotient", quotient}};
    c.verdict = verdict_of(std::abs(gr - std::max(base, quotient)) <= c.tolerance);
    return c;
}

inline LawCheck law_polycyclic(LawCheck c, const Instance& inst)
{
    const auto* s = inst.alpha.as<SemidirectEndo>();
    const auto* k = inst.alpha.group().as<SemidirectKind>();
    if (s == nullptr || k == nullptr || k->base_rank != 1 || k->quotient_rank != 1) {
        return inapplicable(c, "needs a series-preserving endomorphism of a cyclic-by-cyclic group");
    }
    c.tolerance = tol_or(inst, 1e-6);
    const double gr = km_table(inst.alpha, inst.options.max_m).ratio_estimate;
    const double nearest = std::round(gr);
    c.values = {{"gr", gr}, {"nearest_integer", nearest}, {"gr_on_base", abs(s->base(0, 0)).convert_to<double>()},
                {"gr_on_quotient", abs(s->quotient(0, 0)).convert_to<double>()}};
    c.verdict = verdict_of(std::abs(gr - nearest) <= c.tolerance);
    return c;
}

/// The lower-bound construction: q_1...q_r h q_r^-1...q_1^-1 has length at most
/// 2r + 1 and base part phi(q_1 + ... + q_r) h. Returns the largest base L1
/// length over such elements whose exact length is confirmed by the census,
/// or nullopt if one of them was longer than 2r + 1.
inline std::optional<BigInt> conjugation_witness(const BallCensus& census, std::size_t r)
{
    const Group& G = census.group;
    const auto& k = *G.as<SemidirectKind>();
    const auto gens = symmetric_generators(G);
    std::vector<Element> base_gens, quotient_gens;
    for (const auto& s : gens) {
        const auto& p = s.as<ProductPair>();
        const bool in_base = std::all_of(p.parts[1].as<IntVector>().begin(), p.parts[1].as<IntVector>().end(),
                                         [](const BigInt& x) { return x == 0; });
        (in_base ? base_gens : quotient_gens).push_back(s);
    }
    BigInt best = 0;
    bool ok = true;
    detail::for_each_action_word_sum(k.quotient_rank, r, [&](const IntVector& q) {
        // Word in the quotient generators with exponent sum q.
        Element w = G.identity();
        for (std::size_t j = 0; j < q.size(); ++j) {
            const Element& t = quotient_gens[2 * j];
            w = multiply(w, power(t, q[j], G), G);
        }
        for (const auto& h : base_gens) {
            const Element g = multiply(multiply(w, h, G), invert(w, G), G);
            const auto len = census.length_of(g);
            if (!len || *len > 2 * r + 1) {
                ok = false;
                return;
            }
            best = std::max(best, l1_norm(g.as<ProductPair>().parts[0].as<IntVector>()));
        }
    });
    return ok ? std::optional<BigInt>(best) : std::nullopt;
}

inline LawCheck law_distortion(LawCheck c, const Instance& inst)
{
    const Group& G = inst.alpha.group();
    const auto* k = G.as<SemidirectKind>();
    if (k == nullptr) {
        return inapplicable(c, "needs a semidirect product with abelian quotient");
    }
    c.tolerance = tol_or(inst, 0.05);
    const std::size_t R = inst.options.radius;
    const std::size_t rmax = R >= 1 ? (R - 1) / 2 : 0;
    const auto rate = distortion_rate(G, std::max<std::size_t>(rmax, 1));
    const auto census = enumerate_ball(G, R);
    const auto profile = semidirect_base_distortion(census);
    c.values = {{"K", rate.K}, {"sqrt_K", rate.sqrt_K}, {"radius", static_cast<double>(census.radius)}};
    bool ok = true;
    for (std::size_t n = 1; n < profile.rho.size(); ++n) {
        ok = ok && profile.rho[n] >= profile.rho[n - 1];
    }
    double lo = 1e300, hi = 0;
    for (std::size_t n = 6; n < profile.rho.size(); ++n) {
        const double root = nth_root(profile.rho[n], n);
        lo = std::min(lo, root);
        hi = std::max(hi, root);
        ok = ok && root >= 1.0 && root <= rate.sqrt_K + c.tolerance;
    }
    if (hi > 0) {
        c.values.emplace_back("min_root_n>=6", lo);
        c.values.emplace_back("max_root_n>=6", hi);
    }
    std::size_t certified = 0;
    for (std::size_t r = 1; 2 * r + 1 <= census.radius; ++r) {
        const auto witness = conjugation_witness(census, r);
        const BigInt& kr = rate.table.K[r - 1];
        if (!witness || *witness < kr || profile.rho[2 * r + 1] < kr) {
            ok = false;
            c.note += "lower bound fails at r = " + std::to_string(r) + "; ";
            break;
        }
        certified = r;
    }
    c.values.emplace_back("certified_r", static_cast<double>(certified));
    if (!census.complete) {
        c.note += "ball truncated at radius " + std::to_string(census.radius) + "; ";
    }
    c.verdict = verdict_of(ok && certified >= 1);
    return c;
}

} // namespace detail

/// Runs one law on one instance. Throws UnknownLaw for an unknown id.
inline LawCheck run_law(const std::string& id, const Instance& inst)
{
    LawCheck c{id, inst.name.empty() ? describe(inst.alpha) : inst.name, {}, 0, Verdict::Inapplicable, ""};
    switch (law_index(id)) {
    case 0:
        return detail::law_power(c, inst);
    case 1:
        return detail::law_finite_index(c, inst);
    case 2:
        return detail::law_quotient(c, inst);
    case 3:
        return detail::law_extension(c, inst);
    case 4:
        return detail::law_complement(c, inst);
    case 5:
        return detail::law_abelian(c, inst);
    case 6:
        return detail::law_lcs(c, inst);
    case 7:
        return detail::law_nilpotent(c, inst);
    case 8:
        return detail::law_counterexample(c, inst);
    case 9:
        return detail::law_product<DirectProductKind>(c, inst, 1e-6, "direct product");
    case 10:
        return detail::law_product<FreeProductKind>(c, inst, 0.05, "free product");
    case 11:
        return detail::law_semidirect(c, inst);
    case 12:
        return detail::law_polycyclic(c, inst);
    default:
        return detail::law_distortion(c, inst);
    }
}

// ------------------------------------------------------------------ catalog

namespace detail {

inline IntMatrix random_entries(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo, int hi)
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

/// Product of a few elementary row operations.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n)
{
    IntMatrix u = IntMatrix::identity(n);
    if (n < 2) {
        return u;
    }
    for (int step = 0; step < 4; ++step) {
        const std::size_t i = rng() % n;
        const std::size_t j = (i + 1 + rng() % (n - 1)) % n;
        const int s = rng() % 2 ? 1 : -1;
        for (std::size_t c = 0; c < n; ++c) {
            u(i, c) += s * u(j, c);
        }
    }
    return u;
}

/// Random matrix whose estimator converges quickly: square-free characteristic
/// polynomial (diagonalizable), a unique top eigenvalue modulus with a 20% gap,
/// spectral radius at least 1.
inline IntMatrix random_separated_matrix(std::mt19937_64& rng, std::size_t n)
{
    for (;;) {
        const IntMatrix a = random_entries(rng, n, n, -3, 3);
        const auto cp = char_poly(a).coefficients;
        if (poly::square_free(cp).size() < cp.size()) {
            continue;
        }
        auto roots = distinct_roots(cp).roots;
        std::sort(roots.begin(), roots.end(), [](auto x, auto y) { return std::abs(x) > std::abs(y); });
        if (std::abs(roots[0]) < 1 || (roots.size() > 1 && std::abs(roots[1]) > 0.8L * std::abs(roots[0]))) {
            continue;
        }
        return a;
    }
}

/// Matrix endomorphism of Z^n with an invariant sublattice H of rank k: in
/// column form C0 = [[C11, C12], [0, C22]] keeps d * span(e_1..e_k); a random
/// unimodular U moves the picture to C = U C0 U^-1, H = U (d e_1 ... d e_k).
/// With U = I and d = 1, H is complemented.
inline std::pair<Endomorphism, IntMatrix> random_invariant(std::mt19937_64& rng, std::size_t n, std::size_t k,
                                                           bool complemented, int d = 1)
{
    IntMatrix c0 = random_entries(rng, n, n, -2, 2);
    for (std::size_t i = k; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            c0(i, j) = 0;
        }
    }
    IntMatrix basis(n, k);
    for (std::size_t j = 0; j < k; ++j) {
        basis(j, j) = d;
    }
    IntMatrix c = c0;
    if (!complemented) {
        const IntMatrix u = random_unimodular(rng, n);
        c = u * c0 * *inverse_exact(u);
        basis = u * basis;
    }
    return {matrix_endo(free_abelian(n), transpose(c)), basis};
}

} // namespace detail

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Built-in instances: the worked examples plus seeded random abelian ones.
inline Catalog default_catalog(std::uint64_t seed = kDefaultSeed)
{
    std::mt19937_64 rng(seed);
    Catalog cat{seed, {}};
    auto add = [&](const std::string& law, Instance inst) { cat.entries.push_back({law, std::move(inst)}); };

    const Group Z1 = free_abelian(1);
    const Group Z2 = free_abelian(2);
    const Group F2 = free_group(2);
    const Group H = heisenberg();
    const auto rotation = matrix_endo(Z2, IntMatrix{{0, 2}, {1, 0}});
    const auto fibonacci = word_endo(F2, std::vector<std::vector<int>>{{1, 2}, {1}});
    const auto diag23 = matrix_endo(Z2, IntMatrix{{2, 0}, {0, 3}});
    const auto phi22 = heisenberg_endo(H, 2, 2);

    // Powers.
    add("thm2.2.3-power", {"identity on Z^2, n = 3", identity_endo(Z2), {}, 0, 3, {}});
    add("thm2.2.3-power", {"[[0,2],[1,0]] on Z^2, n = 2", rotation, {}, 0, 2, {}});
    add("thm2.2.3-power", {"fibonacci a->ab, b->a on F2, n = 2", fibonacci, {}, 0, 2, {24, 12, 0}});
    for (int i = 0; i < 4; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(i % 2);
        const auto a = matrix_endo(free_abelian(n), detail::random_entries(rng, n, n, -3, 3));
        add("thm2.2.3-power", {"random " + describe(a) + ", n = " + std::to_string(2 + i % 2), a, {}, 0,
                               static_cast<std::size_t>(2 + i % 2), {}});
    }

    // Finite index.
    add("thm3.1-finite-index", {"diag(2,3) on Z^2, H = 2Z x Z", diag23, IntMatrix{{2, 0}, {0, 1}}, 0, 2, {}});
    for (int i = 0; i < 3; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(i % 2);
        auto [a, basis] = detail::random_invariant(rng, n, n, false, 2 + i % 2);
        add("thm3.1-finite-index", {"random " + describe(a) + ", H of full rank", a, basis, 0, 2, {}});
    }

    // Quotient, extension and complement on random invariant sublattices.
    for (int i = 0; i < 8; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(i % 2);
        const std::size_t k = 1 + rng() % (n - 1);
        const bool comp = i % 4 == 0;
        auto [a, basis] = detail::random_invariant(rng, n, k, comp, comp ? 1 : 1 + static_cast<int>(rng() % 3));
        Instance inst{"random " + describe(a) + " with invariant H", a, basis, 0, 2, {}};
        add("lemma3.2-quotient", inst);
        add("thm3.3-extension", inst);
    }
    add("lemma3.2-quotient", {"heisenberg phi(2,2), H = Gamma_2", phi22, {}, 2, 2, {}});
    add("thm3.3-extension", {"heisenberg phi(2,2), H = Gamma_2", phi22, {}, 2, 2, {}});
    add("thm3.3-extension", {"diag(2,3) on Z^2, H = 2Z x Z", diag23, IntMatrix{{2, 0}, {0, 1}}, 0, 2, {}});
    for (int i = 0; i < 4; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(i % 2);
        const std::size_t k = 1 + rng() % (n - 1);
        auto [a, basis] = detail::random_invariant(rng, n, k, true);
        add("cor3.4-complement", {"random " + describe(a) + ", H on the first " + std::to_string(k) + " generators",
                                  a, basis, 0, 2, {}});
    }

    // Abelian eigenvalue formula.
    add("thm4.1-abelian", {"[[0,2],[1,0]] on Z^2", rotation, {}, 0, 2, {}});
    add("thm4.1-abelian", {"g -> 3g on Z", matrix_endo(Z1, IntMatrix{{3}}), {}, 0, 2, {}});
    add("thm4.1-abelian", {"diag(2,3) on Z^2", diag23, {}, 0, 2, {}});
    add("thm4.1-abelian", {"diag(2,3) on Z + Z/4", matrix_endo(abelian_quotient(Z2, IntMatrix{{0}, {4}}),
                                                               IntMatrix{{2, 0}, {0, 3}}), {}, 0, 2, {}});
    for (int i = 0; i < 4; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(i % 2);
        const auto a = matrix_endo(free_abelian(n), detail::random_separated_matrix(rng, n));
        add("thm4.1-abelian", {"random " + describe(a), a, {}, 0, 2, {}});
    }

    // Heisenberg.
    for (auto [l, g] : {std::pair{2, 2}, {1, 1}, {1, 3}, {-2, 3}}) {
        const auto phi = heisenberg_endo(H, l, g);
        const std::string name = "heisenberg phi(" + std::to_string(l) + "," + std::to_string(g) + ")";
        add("lemma4.3-lcs", {name, phi, {}, 0, 2, {}});
        add("thm4.4-nilpotent", {name, phi, {}, 0, 2, {}});
    }
    add("lemma4.3-lcs", {"diag(2,3) on Z^2", diag23, {}, 0, 2, {}});
    add("thm4.4-counterexample", {"heisenberg phi(2,2)", phi22, {}, 0, 2, {}});

    // Products.
    add("lemma5.1-direct", {"Z x Z with g -> 2g and g -> 3g",
                            product_endo(direct_product(Z1, Z1), matrix_endo(Z1, IntMatrix{{2}}),
                                         matrix_endo(Z1, IntMatrix{{3}})),
                            {}, 0, 2, {30, 12, 1e-9}});
    add("lemma5.1-direct", {"heisenberg x Z with phi(2,2) and g -> 3g",
                            product_endo(direct_product(H, Z1), phi22, matrix_endo(Z1, IntMatrix{{3}})),
                            {}, 0, 2, {}});
    add("lemma5.1-direct", {"F2 x Z^2 with fibonacci and [[0,2],[1,0]]",
                            product_endo(direct_product(F2, Z2), fibonacci, rotation), {}, 0, 2, {20, 12, 0.05}});
    add("lemma5.2-free", {"Z * Z with g -> 2g and g -> 3g",
                          product_endo(free_product(Z1, Z1), matrix_endo(Z1, IntMatrix{{2}}),
                                       matrix_endo(Z1, IntMatrix{{3}})),
                          {}, 0, 2, {}});
    add("lemma5.2-free", {"F2 * Z with fibonacci and g -> 2g",
                          product_endo(free_product(F2, Z1), fibonacci, matrix_endo(Z1, IntMatrix{{2}})), {}, 0, 2,
                          {20, 12, 0}});

    // Semidirect and polycyclic.
    const Group klein = cyclic_by_cyclic(-1).group;
    add("thm5.4-semidirect", {"Z x|_{-1} Z, base 2, quotient 3",
                              semidirect_endo(klein, IntMatrix{{2}}, IntMatrix{{3}}), {}, 0, 2, {}});
    const Group flip2 = semidirect(2, {IntMatrix{{-1, 0}, {0, -1}}});
    add("thm5.4-semidirect", {"Z^2 x|_{-I} Z, base [[2,1],[1,1]], quotient 1",
                              semidirect_endo(flip2, IntMatrix{{2, 1}, {1, 1}}, IntMatrix{{1}}), {}, 0, 2, {}});
    add("thm5.4-semidirect", {"Z^2 x|_{-I} Z, base [[0,2],[1,0]], quotient 3",
                              semidirect_endo(flip2, IntMatrix{{0, 2}, {1, 0}}, IntMatrix{{3}}), {}, 0, 2, {}});
    add("lemma5.6-polycyclic", {"Z x|_{-1} Z, base 2, quotient 3",
                                semidirect_endo(klein, IntMatrix{{2}}, IntMatrix{{3}}), {}, 0, 2, {}});
    add("lemma5.6-polycyclic", {"Z x|_{-1} Z, base -5, quotient 1",
                                semidirect_endo(klein, IntMatrix{{-5}}, IntMatrix{{1}}), {}, 0, 2, {}});
    add("lemma5.6-polycyclic", {"Z x Z, base 2, quotient 4",
                                semidirect_endo(cyclic_by_cyclic(1).group, IntMatrix{{2}}, IntMatrix{{4}}), {}, 0, 2,
                                {}});
    const Group cat_map = semidirect(2, {IntMatrix{{2, 1}, {1, 1}}});
    add("lemma5.8-distortion", {"Z^2 x|_A Z, A = [[2,1],[1,1]]", identity_endo(cat_map), {}, 0, 2, {30, 12, 0}});
    return cat;
}

// ------------------------------------------------------------------- suite

struct SuiteReport {
    std::uint64_t seed = 0;
    std::vector<LawCheck> checks;

    std::size_t count(Verdict v) const
    {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [&](const LawCheck& c) { return c.verdict == v; }));
    }
    bool ok() const { return count(Verdict::Fail) == 0; }
};

/// Every catalog entry, reported in law-id order (catalog order within a law).
inline SuiteReport run_suite(const Catalog& catalog)
{
    std::vector<std::size_t> order(catalog.entries.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return law_index(catalog.entries[a].law) < law_index(catalog.entries[b].law);
    });
    SuiteReport r{catalog.seed, {}};
    for (std::size_t i : order) {
        r.checks.push_back(run_law(catalog.entries[i].law, catalog.entries[i].instance));
    }
    return r;
}

inline std::string report_text(const SuiteReport& r)
{
    std::string out;
    for (const auto& c : r.checks) {
        std::string line = to_string(c.verdict);
        line.resize(13, ' ');
        line += c.id + "  " + c.instance;
        for (const auto& [k, v] : c.values) {
            line += "  " + k + "=" + format_real(v);
        }
        if (c.tolerance > 0) {
            line += "  tol=" + format_real(c.tolerance);
        }
        if (!c.note.empty()) {
            line += "  (" + c.note + ")";
        }
        out += line + "\n";
    }
    out += std::to_string(r.checks.size()) + " checks: " + std::to_string(r.count(Verdict::Pass)) + " pass, " +
           std::to_string(r.count(Verdict::Fail)) + " fail, " + std::to_string(r.count(Verdict::Inapplicable)) +
           " inapplicable (seed " + std::to_string(r.seed) + ")\n";
    return out;
}

inline nlohmann::ordered_json report_json(const SuiteReport& r)
{
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json values = nlohmann::ordered_json::object();
        for (const auto& [k, v] : c.values) {
            values[k] = v;
        }
        checks.push_back({{"id", c.id},
                          {"instance", c.instance},
                          {"values", values},
                          {"tolerance", c.tolerance},
                          {"verdict", to_string(c.verdict)},
                          {"note", c.note}});
    }
    return {{"seed", r.seed},
            {"checks", checks},
            {"summary",
             {{"pass", r.count(Verdict::Pass)},
              {"fail", r.count(Verdict::Fail)},
              {"inapplicable", r.count(Verdict::Inapplicable)}}}};
}

} // namespace endogrow
