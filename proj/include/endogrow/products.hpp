#pragma once

// Group constructions: direct and free products, abelian-by-abelian
// semidirect products, sublattices of Z^n, quotients Z^n / L and
// cyclic-by-cyclic polycyclic towers.

#include <optional>

#include "group.hpp"

namespace endogrow {

inline Group direct_product(const Group& a, const Group& b)
{
    return Group(DirectProductKind{std::make_shared<const Group>(a), std::make_shared<const Group>(b)});
}

/// Factors must be free groups or Z = FreeAbelian(1); their syllables then
/// have exact closed-form normal forms.
inline Group free_product(const Group& a, const Group& b)
{
    auto supported = [](const Group& g) {
        if (g.is<FreeKind>()) {
            return true;
        }
        const auto* z = g.as<FreeAbelianKind>();
        return z != nullptr && z->rank == 1;
    };
    if (!supported(a) || !supported(b)) {
        throw Unsupported("free_product: factors must be free groups or Z");
    }
    return Group(FreeProductKind{std::make_shared<const Group>(a), std::make_shared<const Group>(b)});
}

/// Z^base_rank semidirect Z^action.size(). Each action matrix must be
/// unimodular and the matrices must commute (phi is then a homomorphism).
/// Finite-order actions default to the quasi length |h|_1 + |q|_1; otherwise
/// lengths come from the ball oracle at the given radius.
inline Group semidirect(std::size_t base_rank, const std::vector<IntMatrix>& action, std::size_t bfs_radius = 12)
{
    SemidirectKind k;
    k.base_rank = base_rank;
    k.quotient_rank = action.size();
    for (std::size_t j = 0; j < action.size(); ++j) {
        const auto& a = action[j];
        if (a.rows() != base_rank || a.cols() != base_rank) {
            throw InvalidArgument("semidirect: action matrix " + std::to_string(j) + " has wrong shape");
        }
        auto inverse = inverse_exact(a);
        if (!inverse) {
            throw InvalidArgument("semidirect: action matrix " + std::to_string(j) + " is not unimodular");
        }
        k.action.push_back(a);
        k.action_inverse.push_back(std::move(*inverse));
    }
    for (std::size_t i = 0; i < action.size(); ++i) {
        for (std::size_t j = i + 1; j < action.size(); ++j) {
            if (action[i] * action[j] != action[j] * action[i]) {
                throw InvalidArgument("semidirect: action matrices do not commute");
            }
        }
    }
    const bool finite = has_finite_order_action(k);
    return Group(std::move(k), finite ? LengthMode::Quasi : LengthMode::BfsOracle, finite ? 0 : bfs_radius);
}

// ---------------------------------------------------------------- sublattices

inline const FreeAbelianKind& require_free_abelian(const Group& G, const char* what)
{
    const auto* k = G.as<FreeAbelianKind>();
    if (k == nullptr) {
        throw InvalidArgument(std::string(what) + ": ambient group must be free abelian");
    }
    return *k;
}

/// Subgroup of Z^n spanned by the (independent) columns of basis.
inline Group sublattice(const Group& ambient, const IntMatrix& basis)
{
    const auto& a = require_free_abelian(ambient, "sublattice");
    if (basis.rows() != a.rank) {
        throw InvalidArgument("sublattice: basis rows must equal the ambient rank");
    }
    if (rank(basis) != basis.cols()) {
        throw InvalidArgument("sublattice: basis columns are dependent");
    }
    return Group(SublatticeKind{a.rank, basis});
}

/// Index in the ambient lattice; nullopt when infinite.
inline std::optional<BigInt> sublattice_index(const SublatticeKind& k)
{
    if (k.basis.cols() < k.ambient_rank) {
        return std::nullopt;
    }
    return abs(determinant(k.basis));
}

/// Coordinates of v in the sublattice basis, or nullopt when v is not a member.
inline std::optional<IntVector> sublattice_coordinates(const SublatticeKind& k, const IntVector& v)
{
    return solve_exact(k.basis, v);
}

inline IntVector sublattice_embed(const SublatticeKind& k, const IntVector& coordinates)
{
    return mat_vec(k.basis, coordinates);
}

// ------------------------------------------------------------------ quotients

/// Z^n / L where L is spanned by the columns of relations (any n x k matrix).
/// Realized through U * relations * V = D: coordinate i of U v survives
/// unless d_i = 1, and is reduced mod d_i when d_i > 1.
inline Group abelian_quotient(const Group& ambient, const IntMatrix& relations)
{
    const auto& a = require_free_abelian(ambient, "abelian_quotient");
    if (relations.rows() != a.rank) {
        throw InvalidArgument("abelian_quotient: relation rows must equal the ambient rank");
    }
    const SmithForm s = smith_normal_form(relations);
    const auto u_inverse = inverse_exact(s.U);
    if (!u_inverse) {
        throw ComputationError("abelian_quotient: Smith transform is not unimodular");
    }
    std::vector<BigInt> d(a.rank, BigInt(0));
    for (std::size_t i = 0; i < std::min(a.rank, relations.cols()); ++i) {
        d[i] = s.D(i, i);
    }
    std::vector<std::size_t> kept_free, kept_torsion;
    for (std::size_t i = 0; i < a.rank; ++i) {
        if (d[i] == 0) {
            kept_free.push_back(i);
        }
        else if (d[i] != 1) {
            kept_torsion.push_back(i);
        }
    }
    AbelianQuotientKind k;
    k.ambient_rank = a.rank;
    k.relations = relations;
    std::vector<std::size_t> order = kept_free;
    order.insert(order.end(), kept_torsion.begin(), kept_torsion.end());
    k.projection = IntMatrix(order.size(), a.rank);
    k.lift = IntMatrix(a.rank, order.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        k.moduli.push_back(d[order[r]]);
        for (std::size_t c = 0; c < a.rank; ++c) {
            k.projection(r, c) = s.U(order[r], c);
            k.lift(c, r) = (*u_inverse)(c, order[r]);
        }
    }
    return Group(std::move(k));
}

/// Image of an ambient vector in quotient normal form.
inline IntVector quotient_project(const AbelianQuotientKind& k, const IntVector& v)
{
    IntVector out = mat_vec(k.projection, v);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (k.moduli[i] != 0) {
            out[i] = mod_floor(out[i], k.moduli[i]);
        }
    }
    return out;
}

/// A representative in Z^n of a quotient element.
inline IntVector quotient_lift(const AbelianQuotientKind& k, const IntVector& x) { return mat_vec(k.lift, x); }

/// Order of the torsion subgroup (1 when torsion-free).
inline BigInt torsion_order(const AbelianQuotientKind& k)
{
    BigInt order = 1;
    for (const auto& d : k.moduli) {
        if (d != 0) {
            order *= d;
        }
    }
    return order;
}

// ----------------------------------------------------------------- polycyclic

/// Polycyclic series 1 = P_h < ... < P_1 = G given by the orders of its
/// cyclic factors P_{i-1}/P_i (0 for infinite cyclic), top factor first.
/// For a semidirect Z^r x| Z^s realization, the series runs through the base:
/// the top s factors come from the quotient generators, the rest from the base.
struct PolycyclicTower {
    Group group;
    std::vector<BigInt> factor_orders;
};

/// Z x|_phi Z with phi(t) = sign (the Klein-bottle group for sign = -1).
inline PolycyclicTower cyclic_by_cyclic(int sign)
{
    if (sign != 1 && sign != -1) {
        throw InvalidArgument("cyclic_by_cyclic: the action on Z must be +1 or -1");
    }
    return {semidirect(1, {IntMatrix{{sign}}}), {0, 0}};
}

} // namespace endogrow
