// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Expected values come from closed forms computed here, not from the code
// under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include <endogrow/cli.hpp>

using namespace endogrow;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

InstanceSpec spec_of(Endomorphism alpha)
{
    return {{"acceptance", std::move(alpha), {}, 0, 2, {}}, 0};
}

// 1. A = [[0,2],[1,0]] on Z^2: GR = sqrt 2, attained by K_m at even m.
Outcome rotation_example()
{
    Outcome o;
    const auto t0 = Clock::now();
    const auto alpha = matrix_endo(free_abelian(2), IntMatrix{{0, 2}, {1, 0}});
    const auto r = cmd_spectral(spec_of(alpha), "json");
    const double gr = Json::parse(r.out)["gr"].get<double>();
    const double sqrt2 = std::sqrt(2.0);
    o.require(std::abs(gr - sqrt2) <= 1e-9, "spectral " + fmt(gr));
    const auto e = km_table(alpha, 20);
    o.require(std::abs(e.inf_bound - sqrt2) <= 1e-9, "inf_bound " + fmt(e.inf_bound));
    for (std::size_t m = 2; m <= 20; m += 2) {
        o.require(e.K[m - 1] == BigInt(1) << (m / 2), "K_" + std::to_string(m) + " != 2^(m/2)");
        o.require(std::abs(e.roots[m - 1] - sqrt2) <= 1e-9, "root at m = " + std::to_string(m));
    }
    const double t = seconds_since(t0);
    o.require(t < 1.0, "runtime " + fmt(t) + " s");
    o.detail = o.ok ? "gr = " + fmt(gr) + ", inf_bound = " + fmt(e.inf_bound) + ", " + fmt(t) + " s" : o.detail;
    return o;
}

// 2. g -> 3g on Z.
Outcome rank_one()
{
    Outcome o;
    const auto alpha = matrix_endo(free_abelian(1), IntMatrix{{3}});
    const double gr = gr_exact_abelian(alpha);
    o.require(gr == 3.0, "spectral " + fmt(gr));
    const auto e = km_table(alpha, 40);
    BigInt p = 1;
    for (std::size_t m = 1; m <= 40; ++m) {
        p *= 3;
        o.require(e.K[m - 1] == p, "K_" + std::to_string(m) + " != 3^m");
    }
    o.detail = o.ok ? "gr = 3, K_m = 3^m for m <= 40" : o.detail;
    return o;
}

// 3. Generator bound K_m <= K_1^m for random endomorphisms of F2.
Outcome generator_bound()
{
    Outcome o;
    std::mt19937_64 rng(3);
    const Group F2 = free_group(2);
    std::size_t checked = 0;
    for (int i = 0; i < 50; ++i) {
        std::vector<std::vector<int>> images(2);
        for (auto& img : images) {
            const std::size_t len = 1 + rng() % 4;
            for (std::size_t j = 0; j < len; ++j) {
                const int letter = 1 + static_cast<int>(rng() % 2);
                img.push_back(rng() % 2 ? letter : -letter);
            }
        }
        const auto alpha = word_endo(F2, images);
        const auto e = km_table(alpha, 10);
        const BigInt k1 = e.K.empty() ? BigInt(0) : e.K[0];
        o.require(k1 <= 4, "image longer than 4");
        BigInt bound = 1;
        for (std::size_t m = 1; m <= e.size(); ++m) {
            bound *= k1;
            o.require(e.K[m - 1] <= bound, describe(alpha) + ": K_" + std::to_string(m) + " > K_1^m");
            ++checked;
        }
    }
    o.detail = o.ok ? std::to_string(checked) + " (instance, m) pairs, K_m <= K_1^m exactly" : o.detail;
    return o;
}

// 4. Power law on random integer matrices.
Outcome power_law()
{
    Outcome o;
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> entry(-3, 3);
    double worst_rel = 0, worst_est = 0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 2 + i % 2;
        IntMatrix a(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) = entry(rng);
            }
        }
        const double rho = checked_spectral_radius(a);
        for (std::size_t p : {2u, 3u}) {
            const double rho_p = checked_spectral_radius(mat_pow(a, p));
            const double want = std::pow(rho, static_cast<double>(p));
            const double rel = std::abs(rho_p - want) / std::max(1.0, want);
            worst_rel = std::max(worst_rel, rel);
            o.require(rel <= 1e-6, "rho(A^" + std::to_string(p) + ") for " + describe(matrix_endo(free_abelian(n), a)));
        }
        const auto alpha = matrix_endo(free_abelian(n), a);
        const double est = km_table(alpha, 40).ratio_estimate;
        const double est2 = km_table(power(alpha, 2), 20).ratio_estimate;
        const double gap = std::abs(est2 - est * est);
        worst_est = std::max(worst_est, gap);
        o.require(gap <= 0.1, "ratio estimates for " + describe(alpha) + ": " + fmt(est2) + " vs " + fmt(est * est));
    }
    o.detail = o.ok ? "worst relative spectral gap " + fmt(worst_rel) + ", worst estimate gap " + fmt(worst_est)
                    : o.detail;
    return o;
}

// 5. Heisenberg with lambda = gamma = 2.
Outcome heisenberg_counterexample()
{
    Outcome o;
    const auto t0 = Clock::now();
    const auto phi = heisenberg_endo(heisenberg(), 2, 2);
    const auto n = gr_nilpotent(phi);
    o.require(n.layers.size() == 2 && n.layers[0] == 2 && n.layers[1] == 4, "layers");
    o.require(n.combined == 2, "combined " + fmt(n.combined));
    o.require(n.without_exponents == 4, "without exponents " + fmt(n.without_exponents));
    const auto e = km_table(phi, 16);
    o.require(e.metric == LengthMode::Quasi, "metric is not the quasi-length");
    o.require(std::abs(e.ratio_estimate - 2) <= 0.1, "ratio_estimate " + fmt(e.ratio_estimate));
    o.require(std::abs(e.ratio_estimate - n.combined) <= 0.1 && std::abs(e.ratio_estimate - 4) > 0.1,
              "measured rate does not separate the two formulas");
    const double t = seconds_since(t0);
    o.require(t < 10, "runtime " + fmt(t) + " s");
    o.detail = o.ok ? "layers (2, 4), combined 2, without exponents 4, measured " + fmt(e.ratio_estimate) + ", " +
                          fmt(t) + " s"
                    : o.detail;
    return o;
}

// 6. Finite-index subgroup H = 2Z x Z under diag(2,3).
Outcome finite_index()
{
    Outcome o;
    const auto alpha = matrix_endo(free_abelian(2), IntMatrix{{2, 0}, {0, 3}});
    const IntMatrix basis{{2, 0}, {0, 1}};
    const double full = gr_exact_abelian(alpha);
    const double sub = gr_exact_abelian(restrict(alpha, basis));
    o.require(std::abs(full - 3) <= 1e-9 && std::abs(sub - 3) <= 1e-9, "gr " + fmt(full) + ", on H " + fmt(sub));
    o.detail = o.ok ? "gr = " + fmt(full) + ", gr on H = " + fmt(sub) : o.detail;
    return o;
}

// 7. Quotient / extension / complement on random invariant sublattices.
// C is block upper triangular in the adapted basis, so the eigenvalues of
// the blocks are exactly those of alpha on H and on Z^n / H.
Outcome extension_laws()
{
    Outcome o;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> entry(-2, 2);
    std::size_t complemented = 0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 2 + i % 2;
        const std::size_t k = 1 + rng() % (n - 1);
        IntMatrix c(n, n);  // column form: column j is the image of basis vector j
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t s = 0; s < n; ++s) {
                c(r, s) = (r >= k && s < k) ? 0 : entry(rng);
            }
        }
        IntMatrix c11(k, k), c22(n - k, n - k);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t s = 0; s < n; ++s) {
                if (r < k && s < k) {
                    c11(r, s) = c(r, s);
                }
                if (r >= k && s >= k) {
                    c22(r - k, s - k) = c(r, s);
                }
            }
        }
        // Even instances keep H on the first k generators; odd ones move to a
        // random unimodular basis (a product of elementary moves) and may scale H.
        IntMatrix u = IntMatrix::identity(n);
        const bool comp = i % 2 == 0;
        if (!comp) {
            for (int step = 0; step < 4; ++step) {
                const std::size_t a = rng() % n, b = (a + 1 + rng() % (n - 1)) % n;
                IntMatrix e = IntMatrix::identity(n);
                e(a, b) = entry(rng);
                u = u * e;
            }
        }
        const IntMatrix u_inv = *inverse_exact(u);
        IntMatrix basis(n, k);
        for (std::size_t j = 0; j < k; ++j) {
            basis(j, j) = comp ? 1 : 1 + static_cast<long long>(rng() % 2);
        }
        // alpha = U C U^-1 in column form; the scaled basis d e_j spans a C-invariant sublattice.
        const IntMatrix col = u * c * u_inv;
        const auto alpha = matrix_endo(free_abelian(n), transpose(col));
        const IntMatrix h = u * basis;
        const auto rep = extension_bound_check(alpha, h);
        const double full = checked_spectral_radius(c);
        const double sub = checked_spectral_radius(c11);
        const double quotient = checked_spectral_radius(c22);
        const std::string name = describe(alpha);
        o.require(std::abs(rep.full - full) <= 1e-6, name + ": full " + fmt(rep.full) + " vs " + fmt(full));
        o.require(std::abs(rep.sub - sub) <= 1e-6, name + ": sub " + fmt(rep.sub) + " vs " + fmt(sub));
        o.require(std::abs(rep.quotient - quotient) <= 1e-6,
                  name + ": quotient " + fmt(rep.quotient) + " vs " + fmt(quotient));
        o.require(rep.quotient <= rep.full + 1e-6, name + ": quotient above full");
        o.require(rep.full <= std::max(rep.sub, rep.quotient) + 1e-6, name + ": full above max");
        if (comp) {
            ++complemented;
            o.require(std::abs(rep.full - std::max(rep.sub, rep.quotient)) <= 1e-6, name + ": no equality");
        }
    }
    o.detail = o.ok ? "20 instances (" + std::to_string(complemented) + " complemented) within 1e-6" : o.detail;
    return o;
}

// 8. Direct and free products of g -> 2g and g -> 3g.
Outcome products()
{
    Outcome o;
    const Group Z = free_abelian(1);
    const auto two = matrix_endo(Z, IntMatrix{{2}});
    const auto three = matrix_endo(Z, IntMatrix{{3}});
    const auto direct = product_endo(direct_product(Z, Z), two, three);
    const double formula = std::max(gr_exact_abelian(two), gr_exact_abelian(three));
    const double measured = km_table(direct, 30).ratio_estimate;
    o.require(std::abs(formula - 3) <= 1e-9, "max formula " + fmt(formula));
    o.require(std::abs(measured - 3) <= 1e-9, "direct product estimate " + fmt(measured));
    const auto free = product_endo(free_product(Z, Z), two, three);
    const double free_est = km_table(free, 20).ratio_estimate;
    o.require(std::abs(free_est - 3) <= 0.05, "free product estimate " + fmt(free_est));
    o.detail = o.ok ? "direct " + fmt(measured) + ", free " + fmt(free_est) : o.detail;
    return o;
}

// 9. Integer growth rate on the cyclic-by-cyclic catalog instance.
Outcome polycyclic()
{
    Outcome o;
    const auto cat = default_catalog();
    const auto it = std::find_if(cat.entries.begin(), cat.entries.end(),
                                 [](const CatalogEntry& e) { return e.law == "lemma5.6-polycyclic"; });
    if (it == cat.entries.end()) {
        return {false, "no polycyclic catalog instance"};
    }
    const auto c = run_law(it->law, it->instance);
    double gr = NAN;
    for (const auto& [k, v] : c.values) {
        if (k == "gr") {
            gr = v;
        }
    }
    o.require(c.verdict == Verdict::Pass, "verdict " + to_string(c.verdict));
    o.require(std::abs(gr - std::round(gr)) <= 1e-6, "gr " + fmt(gr) + " is not an integer");
    o.detail = o.ok ? it->instance.name + ": gr = " + fmt(gr) : o.detail;
    return o;
}

// 10. Distortion of Z^2 in Z^2 x|_A Z, A = [[2,1],[1,1]].
Outcome distortion()
{
    Outcome o;
    const auto t0 = Clock::now();
    const IntMatrix A{{2, 1}, {1, 1}};
    const Group G = semidirect(2, {A});
    const double K = (3 + std::sqrt(5.0)) / 2;
    const auto rate = distortion_rate(G, 30);
    o.require(std::abs(rate.K - K) <= 1e-6, "K " + fmt(rate.K));

    const auto census = enumerate_ball(G, 12);
    o.require(census.complete, "ball truncated by the budget");
    const auto profile = semidirect_base_distortion(census);
    const auto& rho = profile.rho;
    double lo = INFINITY, hi = 0;
    for (std::size_t n = 1; n < rho.size(); ++n) {
        o.require(rho[n - 1] <= rho[n], "rho decreases at n = " + std::to_string(n));
        if (n >= 6) {
            const double root = std::pow(rho[n].convert_to<double>(), 1.0 / static_cast<double>(n));
            lo = std::min(lo, root);
            hi = std::max(hi, root);
            o.require(root >= 1.0 && root <= std::sqrt(K) + 0.05, "rho(n)^(1/n) = " + fmt(root) + " at n = " +
                                                                       std::to_string(n));
        }
    }

    // Lower bound: w = t^r, g = w h w^-1 has length <= 2r + 1 and lies in Z^2
    // with L1 norm |A^r h|_1. K_r (max column L1 norm of A^r) = F_{2r+2}.
    BigInt f_prev = 1, f = 1;  // F_1, F_2
    const Element t = G.generators()[2];
    for (std::size_t r = 1; r <= 5; ++r) {
        f_prev = f_prev + f;  // F_{2r+1}
        f = f + f_prev;       // F_{2r+2}
        const BigInt K_r = f;
        Element w = G.identity();
        for (std::size_t i = 0; i < r; ++i) {
            w = multiply(w, t, G);
        }
        BigInt best = 0;
        for (std::size_t j = 0; j < 2; ++j) {
            const Element g = multiply(multiply(w, G.generators()[j], G), invert(w, G), G);
            const auto len = census.length_of(g);
            o.require(len && *len <= 2 * r + 1, "witness length at r = " + std::to_string(r));
            const auto& p = g.as<ProductPair>();
            o.require(l1_norm(p.parts[1].as<IntVector>()) == 0, "witness outside the base");
            best = std::max(best, l1_norm(p.parts[0].as<IntVector>()));
        }
        o.require(best == K_r, "witness norm " + best.str() + " != F_{2r+2} = " + K_r.str());
        o.require(rho[2 * r + 1] >= K_r, "rho(" + std::to_string(2 * r + 1) + ") < K_" + std::to_string(r));
    }
    const double t_total = seconds_since(t0);
    o.require(t_total < 60, "runtime " + fmt(t_total) + " s");
    o.detail = o.ok ? "K = " + fmt(rate.K) + ", rho(n)^(1/n) in [" + fmt(lo) + ", " + fmt(hi) +
                          "] for 6 <= n <= 12, rho(2r+1) >= K_r for r <= 5, " + fmt(t_total) + " s"
                    : o.detail;
    return o;
}

// 11. Ball oracle against closed forms.
Outcome oracle_ground_truth()
{
    Outcome o;
    const Group Z2 = free_abelian(2);
    const auto z = enumerate_ball(Z2, 10);
    for (const auto& g : z.elements) {
        o.require(BigInt(z.lengths.at(g)) == l1_norm(g.as<IntVector>()), "Z^2 length of " + to_string(g));
    }
    for (std::size_t n = 0; n <= 10; ++n) {
        o.require(z.counts.at(n) == 2 * n * n + 2 * n + 1, "Z^2 count at n = " + std::to_string(n));
    }
    const Group F2 = free_group(2);
    const auto f = enumerate_ball(F2, 8);
    for (const auto& g : f.elements) {
        const auto& w = g.as<Word>();
        bool reduced = true;
        for (std::size_t i = 1; i < w.letters.size(); ++i) {
            reduced = reduced && w.letters[i] != -w.letters[i - 1];
        }
        o.require(reduced && f.lengths.at(g) == w.size(), "F2 length of " + to_string(g));
    }
    o.require(f.elements.size() == 1 + 2 * (6561 - 1), "F2 ball size");
    o.detail = o.ok ? std::to_string(z.elements.size()) + " Z^2 and " + std::to_string(f.elements.size()) +
                          " F2 elements exact"
                    : o.detail;
    return o;
}

// 12. Full law suite through the CLI entry point.
Outcome full_suite()
{
    Outcome o;
    const auto t0 = Clock::now();
    const auto r = cmd_verify({"default", kDefaultSeed, {}, "json"});
    const Json j = Json::parse(r.out);
    const double t = seconds_since(t0);
    o.require(r.exit_code == kExitOk, "exit code " + std::to_string(r.exit_code));
    o.require(j["summary"]["fail"] == 0, "failures");
    o.require(j["summary"]["inapplicable"] == 0, "inapplicable checks");
    o.require(t < 300, "runtime " + fmt(t) + " s");
    o.detail = o.ok ? std::to_string(j["summary"]["pass"].get<int>()) + " checks pass (seed " +
                          std::to_string(kDefaultSeed) + "), " + fmt(t) + " s"
                    : o.detail;
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"rotation example on Z^2", rotation_example},
        {"rank-one abelian", rank_one},
        {"generator bound on F2", generator_bound},
        {"power law", power_law},
        {"heisenberg counterexample", heisenberg_counterexample},
        {"finite-index subgroup", finite_index},
        {"quotient / extension / complement", extension_laws},
        {"direct and free products", products},
        {"polycyclic integer rate", polycyclic},
        {"distortion", distortion},
        {"ball oracle ground truth", oracle_ground_truth},
        {"full law suite", full_suite},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        }
        catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.ok ? 0 : 1;
        std::printf("%s %2zu  %-34s %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu criteria: %zu pass, %d fail\n", criteria.size(), criteria.size() - failures, failures);
    return failures == 0 ? 0 : 1;
}
