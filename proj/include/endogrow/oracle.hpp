#pragma once

// Exhaustive Cayley-ball enumeration: exact word lengths by breadth-first
// search over normal forms, sphere by sphere.

#include <cstdlib>
#include <optional>
#include <string>
#include <unordered_map>

#include "group.hpp"
#include "products.hpp"

namespace endogrow {

constexpr std::size_t kDefaultBallBudget = 5'000'000;

/// Element budget: ENDOGROW_BUDGET if set to a positive integer, else the default.
inline std::size_t default_ball_budget()
{
    if (const char* env = std::getenv("ENDOGROW_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return kDefaultBallBudget;
}

struct BallCensus {
    Group group;
    std::size_t requested_radius = 0;
    std::size_t radius = 0;             ///< largest completely enumerated radius
    bool complete = true;               ///< false when the budget cut enumeration short
    std::vector<std::size_t> counts;    ///< counts[n] = |B(n)|, n = 0..radius
    std::vector<Element> elements;      ///< discovery order; lengths nondecreasing
    std::unordered_map<Element, std::size_t, ElementHash> lengths;

    std::optional<std::size_t> length_of(const Element& g) const
    {
        const auto it = lengths.find(g);
        if (it == lengths.end()) {
            return std::nullopt;
        }
        return it->second;
    }
};

/// Symmetric generating set in the order s1, s1^-1, s2, s2^-1, ...
/// (inverses of involutions are not repeated).
inline std::vector<Element> symmetric_generators(const Group& G)
{
    std::vector<Element> out;
    for (const auto& s : G.generators()) {
        out.push_back(s);
        Element inv = invert(s, G);
        if (!(inv == s)) {
            out.push_back(std::move(inv));
        }
    }
    return out;
}

/// Ball of radius R around the identity. Neighbours are s * g, which yields
/// the same word metric as right multiplication and is cheap for semidirect
/// products. A sphere that would exceed the budget is discarded, so every
/// stored length is exact.
inline BallCensus enumerate_ball(const Group& G, std::size_t R, std::size_t budget = default_ball_budget())
{
    BallCensus c{G, R, 0, true, {}, {}, {}};
    const auto gens = symmetric_generators(G);
    c.elements.push_back(G.identity());
    c.lengths.emplace(G.identity(), 0);
    c.counts.push_back(1);
    std::size_t sphere_begin = 0;
    for (std::size_t n = 1; n <= R; ++n) {
        const std::size_t sphere_end = c.elements.size();
        bool over = false;
        for (std::size_t i = sphere_begin; i < sphere_end && !over; ++i) {
            for (const auto& s : gens) {
                Element next = multiply(s, c.elements[i], G);
                if (c.lengths.find(next) != c.lengths.end()) {
                    continue;
                }
                if (c.elements.size() >= budget) {
                    over = true;
                    break;
                }
                c.lengths.emplace(next, n);
                c.elements.push_back(std::move(next));
            }
        }
        if (over) {
            for (std::size_t i = sphere_end; i < c.elements.size(); ++i) {
                c.lengths.erase(c.elements[i]);
            }
            c.elements.resize(sphere_end);
            c.complete = false;
            break;
        }
        c.radius = n;
        c.counts.push_back(c.elements.size());
        sphere_begin = sphere_end;
    }
    return c;
}

/// Exact geodesic length; OutOfRange when g lies beyond the enumerated radius.
inline LengthValue exact_length(const BallCensus& c, const Element& g)
{
    if (auto n = c.length_of(g)) {
        return {BigInt(*n), Exactness::Exact};
    }
    throw OutOfRange("element " + to_string(g) + " lies outside the enumerated ball of radius " +
                     std::to_string(c.radius));
}

/// rho(n) for n = 0..radius, and whether the ball was truncated.
struct DistortionProfile {
    std::vector<BigInt> rho;
    bool truncated = false;
};

/// Distortion of a subgroup H: rho(n) = max intrinsic H-length over the
/// elements of B(n) that lie in H. intrinsic returns nullopt for non-members.
template <class Intrinsic>
DistortionProfile distortion_profile(const BallCensus& c, Intrinsic intrinsic)
{
    DistortionProfile p;
    p.truncated = !c.complete;
    p.rho.assign(c.radius + 1, BigInt(0));
    for (const auto& g : c.elements) {
        const std::size_t n = c.lengths.at(g);
        if (auto len = intrinsic(g)) {
            if (*len > p.rho[n]) {
                p.rho[n] = *len;
            }
        }
    }
    for (std::size_t n = 1; n < p.rho.size(); ++n) {
        p.rho[n] = std::max(p.rho[n], p.rho[n - 1]);
    }
    return p;
}

/// Base Z^r of a semidirect product, with its L1 length, from an existing census.
inline DistortionProfile semidirect_base_distortion(const BallCensus& census)
{
    if (census.group.as<SemidirectKind>() == nullptr) {
        throw InvalidArgument("semidirect_base_distortion: needs a semidirect group");
    }
    return distortion_profile(census, [](const Element& g) -> std::optional<BigInt> {
        const auto& p = g.as<ProductPair>();
        for (const auto& x : p.parts[1].as<IntVector>()) {
            if (x != 0) {
                return std::nullopt;
            }
        }
        return l1_norm(p.parts[0].as<IntVector>());
    });
}

inline DistortionProfile semidirect_base_distortion(const Group& G, std::size_t R,
                                                    std::size_t budget = default_ball_budget())
{
    if (G.as<SemidirectKind>() == nullptr) {
        throw InvalidArgument("semidirect_base_distortion: needs a semidirect group");
    }
    return semidirect_base_distortion(enumerate_ball(G, R, budget));
}

/// Sublattice H of a free abelian group, with the L1 length of its coordinates.
inline DistortionProfile sublattice_distortion(const Group& G, const IntMatrix& basis, std::size_t R,
                                               std::size_t budget = default_ball_budget())
{
    const Group H = sublattice(G, basis);
    const auto& k = *H.as<SublatticeKind>();
    const auto census = enumerate_ball(G, R, budget);
    return distortion_profile(census, [&](const Element& g) -> std::optional<BigInt> {
        if (auto coords = sublattice_coordinates(k, g.as<IntVector>())) {
            return l1_norm(*coords);
        }
        return std::nullopt;
    });
}

/// Census as TSV with columns radius, count.
inline std::string census_tsv(const BallCensus& c)
{
    std::string out = "radius\tcount\n";
    for (std::size_t n = 0; n < c.counts.size(); ++n) {
        out += std::to_string(n) + "\t" + std::to_string(c.counts[n]) + "\n";
    }
    return out;
}

} // namespace endogrow
