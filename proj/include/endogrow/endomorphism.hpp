#pragma once

// Endomorphisms of the supported groups, their action on normal forms,
// composition and powers, and the restricted/induced maps on invariant
// subgroups and quotients.

#include <optional>

#include "products.hpp"

namespace endogrow {

class Endomorphism;

/// Integer matrix on coordinates: FreeAbelian, Sublattice and AbelianQuotient
/// groups. Row i is the image of generator i, so g -> g * matrix (row vector).
struct MatrixEndo {
    IntMatrix matrix;
    friend bool operator==(const MatrixEndo&, const MatrixEndo&) = default;
};

/// Image of every generator, in generator order: Free and FreeProduct groups.
struct WordEndo {
    std::vector<Element> images;
    friend bool operator==(const WordEndo&, const WordEndo&) = default;
};

/// (a, b, c) -> (lambda a, lambda gamma b, gamma c).
struct HeisenbergEndo {
    BigInt lambda;
    BigInt gamma;
    friend bool operator==(const HeisenbergEndo&, const HeisenbergEndo&) = default;
};

/// Factorwise map on a direct or free product.
struct ProductEndo {
    std::vector<Endomorphism> parts; // left, right
    friend bool operator==(const ProductEndo& x, const ProductEndo& y);
};

/// (h, q) -> (h * base, q * quotient), rows being generator images as for
/// MatrixEndo. Valid when it intertwines the action (see semidirect_endo).
struct SemidirectEndo {
    IntMatrix base;
    IntMatrix quotient;
    friend bool operator==(const SemidirectEndo&, const SemidirectEndo&) = default;
};

/// Raised when a subgroup is not mapped into itself.
class InvariantViolation : public InvalidArgument {
public:
    InvariantViolation(const std::string& what, std::size_t generator)
        : InvalidArgument(what + " (generator " + std::to_string(generator) + ")"), generator_(generator)
    {
    }
    std::size_t generator() const { return generator_; }

private:
    std::size_t generator_;
};

class Endomorphism {
public:
    using Rep = std::variant<MatrixEndo, WordEndo, HeisenbergEndo, ProductEndo, SemidirectEndo>;

    /// Unchecked; use the factory functions below.
    Endomorphism(Group group, Rep rep) : group_(std::move(group)), rep_(std::move(rep)) {}

    const Group& group() const { return group_; }
    const Rep& rep() const { return rep_; }

    template <class R>
    const R* as() const
    {
        return std::get_if<R>(&rep_);
    }

    inline Element operator()(const Element& g) const;

    friend bool operator==(const Endomorphism& x, const Endomorphism& y)
    {
        return x.group_ == y.group_ && x.rep_ == y.rep_;
    }

private:
    Group group_;
    Rep rep_;
};

inline bool operator==(const ProductEndo& x, const ProductEndo& y) { return x.parts == y.parts; }

inline Element apply(const Endomorphism& alpha, const Element& g) { return alpha(g); }

// ------------------------------------------------------------------ builders

namespace detail {

inline std::size_t coordinate_count(const Group& G)
{
    if (const auto* k = G.as<FreeAbelianKind>()) {
        return k->rank;
    }
    if (const auto* k = G.as<SublatticeKind>()) {
        return k->basis.cols();
    }
    if (const auto* k = G.as<AbelianQuotientKind>()) {
        return k->moduli.size();
    }
    throw InvalidArgument("matrix endomorphisms need a free abelian, sublattice or abelian quotient group");
}

} // namespace detail

inline Endomorphism matrix_endo(const Group& G, const IntMatrix& m)
{
    const std::size_t n = detail::coordinate_count(G);
    if (m.rows() != n || m.cols() != n) {
        throw InvalidArgument("matrix endomorphism: matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (const auto* q = G.as<AbelianQuotientKind>()) {
        // Well defined iff every relation d_i e_i maps to 0.
        for (std::size_t i = 0; i < n; ++i) {
            if (q->moduli[i] == 0) {
                continue;
            }
            for (std::size_t r = 0; r < n; ++r) {
                const BigInt v = q->moduli[i] * m(i, r);
                if (q->moduli[r] == 0 ? v != 0 : mod_floor(v, q->moduli[r]) != 0) {
                    throw InvariantViolation("matrix endomorphism is not well defined on the quotient", i);
                }
            }
        }
    }
    return Endomorphism(G, MatrixEndo{m});
}

inline Endomorphism word_endo(const Group& G, std::vector<Element> images)
{
    if (!G.is<FreeKind>() && !G.is<FreeProductKind>()) {
        throw InvalidArgument("word endomorphisms need a free group or free product");
    }
    if (images.size() != G.generators().size()) {
        throw InvalidArgument("word endomorphism: need one image per generator");
    }
    for (const auto& img : images) {
        check_member(img, G);
    }
    return Endomorphism(G, WordEndo{std::move(images)});
}

/// Images given as raw letter sequences (reduced here).
inline Endomorphism word_endo(const Group& G, const std::vector<std::vector<int>>& images)
{
    std::vector<Element> out;
    for (const auto& letters : images) {
        out.emplace_back(reduce_word(letters));
    }
    return word_endo(G, std::move(out));
}

inline Endomorphism heisenberg_endo(const Group& G, const BigInt& lambda, const BigInt& gamma)
{
    if (!G.is<HeisenbergKind>()) {
        throw InvalidArgument("heisenberg endomorphism needs a heisenberg group");
    }
    return Endomorphism(G, HeisenbergEndo{lambda, gamma});
}

inline Endomorphism product_endo(const Group& G, const Endomorphism& left, const Endomorphism& right)
{
    GroupPtr l, r;
    if (const auto* k = G.as<DirectProductKind>()) {
        l = k->left;
        r = k->right;
    }
    else if (const auto* k = G.as<FreeProductKind>()) {
        l = k->left;
        r = k->right;
    }
    else {
        throw InvalidArgument("product endomorphism needs a direct or free product");
    }
    if (!(left.group() == *l) || !(right.group() == *r)) {
        throw InvalidArgument("product endomorphism: factor maps live on the wrong groups");
    }
    return Endomorphism(G, ProductEndo{{left, right}});
}

/// alpha(h, q) = (base h, quotient q). Compatibility with the action is checked
/// exactly on the quotient generators.
inline Endomorphism semidirect_endo(const Group& G, const IntMatrix& base, const IntMatrix& quotient)
{
    const auto* k = G.as<SemidirectKind>();
    if (k == nullptr) {
        throw InvalidArgument("semidirect endomorphism needs a semidirect group");
    }
    if (base.rows() != k->base_rank || base.cols() != k->base_rank || quotient.rows() != k->quotient_rank ||
        quotient.cols() != k->quotient_rank) {
        throw InvalidArgument("semidirect endomorphism: matrix shapes do not match the group");
    }
    // In column form B = base^T, N = quotient^T: B A_j = phi(N e_j) B.
    const IntMatrix b = transpose(base);
    for (std::size_t j = 0; j < k->quotient_rank; ++j) {
        if (b * k->action[j] != k->phi(quotient.row(j)) * b) {
            throw InvariantViolation("semidirect endomorphism does not intertwine the action", j);
        }
    }
    return Endomorphism(G, SemidirectEndo{base, quotient});
}

inline Endomorphism identity_endo(const Group& G)
{
    return std::visit(
        [&](const auto& k) -> Endomorphism {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FreeKind> || std::is_same_v<K, FreeProductKind>) {
                return Endomorphism(G, WordEndo{G.generators()});
            }
            else if constexpr (std::is_same_v<K, HeisenbergKind>) {
                return Endomorphism(G, HeisenbergEndo{1, 1});
            }
            else if constexpr (std::is_same_v<K, DirectProductKind>) {
                return Endomorphism(G, ProductEndo{{identity_endo(*k.left), identity_endo(*k.right)}});
            }
            else if constexpr (std::is_same_v<K, SemidirectKind>) {
                return Endomorphism(G, SemidirectEndo{IntMatrix::identity(k.base_rank),
                                                      IntMatrix::identity(k.quotient_rank)});
            }
            else {
                return Endomorphism(G, MatrixEndo{IntMatrix::identity(detail::coordinate_count(G))});
            }
        },
        G.kind());
}

// --------------------------------------------------------------- application

namespace detail {

/// Row vector times matrix.
inline IntVector row_times(const IntVector& v, const IntMatrix& m)
{
    if (v.size() != m.rows()) {
        throw InvalidArgument("vector length does not match matrix");
    }
    IntVector out(m.cols(), BigInt(0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (v[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[j] += v[i] * m(i, j);
        }
    }
    return out;
}

inline std::size_t generator_count(const Group& G) { return G.generators().size(); }

/// Image of a free-product element under generator images.
inline Element apply_free_product_words(const FreeProductKind& k, const Group& G, const std::vector<Element>& images,
                                        const SyllableWord& w)
{
    const std::size_t offset = generator_count(*k.left);
    Element out = G.identity();
    for (const auto& s : w.syllables) {
        const Group& factor = s.factor == 0 ? *k.left : *k.right;
        const std::size_t base = s.factor == 0 ? 0 : offset;
        if (const auto* word = std::get_if<Word>(&s.value.value)) {
            for (int x : word->letters) {
                const auto& img = images[base + static_cast<std::size_t>(x > 0 ? x : -x) - 1];
                out = multiply(out, x > 0 ? img : invert(img, G), G);
            }
        }
        else {
            (void)factor;
            out = multiply(out, power(images[base], s.value.as<IntVector>().at(0), G), G);
        }
    }
    return out;
}

} // namespace detail

inline Element Endomorphism::operator()(const Element& g) const
{
    return std::visit(
        [&](const auto& r) -> Element {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, MatrixEndo>) {
                IntVector v = detail::row_times(g.as<IntVector>(), r.matrix);
                if (const auto* q = group_.as<AbelianQuotientKind>()) {
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        if (q->moduli[i] != 0) {
                            v[i] = mod_floor(v[i], q->moduli[i]);
                        }
                    }
                }
                return v;
            }
            else if constexpr (std::is_same_v<R, WordEndo>) {
                if (const auto* k = group_.as<FreeProductKind>()) {
                    return detail::apply_free_product_words(*k, group_, r.images, g.as<SyllableWord>());
                }
                Word out;
                for (int x : g.as<Word>().letters) {
                    const Word& img = r.images[static_cast<std::size_t>(x > 0 ? x : -x) - 1].template as<Word>();
                    detail::append_reduced(out.letters, x > 0 ? img.letters : detail::inverse_word(img).letters);
                }
                return out;
            }
            else if constexpr (std::is_same_v<R, HeisenbergEndo>) {
                const auto& t = g.as<HeisenbergTriple>();
                return HeisenbergTriple{r.lambda * t.a, r.lambda * r.gamma * t.b, r.gamma * t.c};
            }
            else if constexpr (std::is_same_v<R, ProductEndo>) {
                if (group_.is<DirectProductKind>()) {
                    const auto& p = g.as<ProductPair>();
                    return make_pair_element(r.parts[0](p.parts[0]), r.parts[1](p.parts[1]));
                }
                Element out = group_.identity();
                for (const auto& s : g.as<SyllableWord>().syllables) {
                    SyllableWord single;
                    single.syllables.push_back(Syllable{s.factor, r.parts[s.factor](s.value)});
                    out = multiply(out, detail::normalize_syllables(std::move(single.syllables),
                                                                    *group_.as<FreeProductKind>()),
                                   group_);
                }
                return out;
            }
            else {
                const auto& p = g.as<ProductPair>();
                return make_pair_element(detail::row_times(p.parts[0].as<IntVector>(), r.base),
                                         detail::row_times(p.parts[1].as<IntVector>(), r.quotient));
            }
        },
        rep_);
}

// ------------------------------------------------------- composition, powers

/// alpha o beta (beta first).
inline Endomorphism compose(const Endomorphism& alpha, const Endomorphism& beta)
{
    if (!(alpha.group() == beta.group())) {
        throw InvalidArgument("compose: endomorphisms act on different groups");
    }
    if (alpha.rep().index() != beta.rep().index()) {
        throw InvalidArgument("compose: endomorphisms use different representations");
    }
    const Group& G = alpha.group();
    return std::visit(
        [&](const auto& a) -> Endomorphism {
            using R = std::decay_t<decltype(a)>;
            const R& b = std::get<R>(beta.rep());
            if constexpr (std::is_same_v<R, MatrixEndo>) {
                return Endomorphism(G, MatrixEndo{b.matrix * a.matrix});
            }
            else if constexpr (std::is_same_v<R, WordEndo>) {
                std::vector<Element> images;
                for (const auto& img : b.images) {
                    images.push_back(alpha(img));
                }
                return Endomorphism(G, WordEndo{std::move(images)});
            }
            else if constexpr (std::is_same_v<R, HeisenbergEndo>) {
                return Endomorphism(G, HeisenbergEndo{a.lambda * b.lambda, a.gamma * b.gamma});
            }
            else if constexpr (std::is_same_v<R, ProductEndo>) {
                return Endomorphism(G, ProductEndo{{compose(a.parts[0], b.parts[0]), compose(a.parts[1], b.parts[1])}});
            }
            else {
                return Endomorphism(G, SemidirectEndo{b.base * a.base, b.quotient * a.quotient});
            }
        },
        alpha.rep());
}

inline Endomorphism power(const Endomorphism& alpha, std::size_t n)
{
    Endomorphism result = identity_endo(alpha.group());
    if (n == 0) {
        return result;
    }
    Endomorphism base = alpha;
    bool first = true;
    while (n > 0) {
        if (n & 1U) {
            result = first ? base : compose(result, base);
            first = false;
        }
        n >>= 1U;
        if (n > 0) {
            base = compose(base, base);
        }
    }
    return result;
}

// ------------------------------------------------- subgroups and quotients

namespace detail {

/// The endomorphism as a matrix acting on column vectors.
inline IntMatrix column_matrix(const Endomorphism& alpha, const char* what)
{
    const auto* m = alpha.as<MatrixEndo>();
    if (m == nullptr || !alpha.group().is<FreeAbelianKind>()) {
        throw InvalidArgument(std::string(what) + ": needs a matrix endomorphism of a free abelian group");
    }
    return transpose(m->matrix);
}

} // namespace detail

/// Index of the first sublattice generator whose image leaves the sublattice.
inline std::optional<std::size_t> invariance_violation(const Endomorphism& alpha, const IntMatrix& basis)
{
    const IntMatrix a = detail::column_matrix(alpha, "invariance check");
    const IntMatrix image = a * basis;
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        if (!solve_exact(basis, image.column(j))) {
            return j;
        }
    }
    return std::nullopt;
}

/// alpha on the sublattice spanned by basis, in its intrinsic coordinates:
/// with A acting on columns, the B with A * basis = basis * B (stored as B^T).
inline Endomorphism restrict(const Endomorphism& alpha, const IntMatrix& basis)
{
    const IntMatrix a = detail::column_matrix(alpha, "restrict");
    const Group H = sublattice(alpha.group(), basis);
    const IntMatrix image = a * basis;
    IntMatrix b(basis.cols(), basis.cols());
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        const auto coords = solve_exact(basis, image.column(j));
        if (!coords) {
            throw InvariantViolation("restrict: sublattice is not invariant", j);
        }
        for (std::size_t i = 0; i < basis.cols(); ++i) {
            b(i, j) = (*coords)[i];
        }
    }
    return Endomorphism(H, MatrixEndo{transpose(b)});
}

/// Induced map on Z^n / L (L spanned by the columns of basis), through the
/// Smith change of basis: x -> P A lift(x).
inline Endomorphism induce_on_quotient(const Endomorphism& alpha, const IntMatrix& basis)
{
    const IntMatrix a = detail::column_matrix(alpha, "induce_on_quotient");
    if (basis.cols() > 0) {
        if (auto bad = invariance_violation(alpha, basis)) {
            throw InvariantViolation("induce_on_quotient: subgroup is not invariant", *bad);
        }
    }
    const Group Q = abelian_quotient(alpha.group(), basis);
    const auto& k = *Q.as<AbelianQuotientKind>();
    IntMatrix b = k.projection * a * k.lift;
    for (std::size_t r = 0; r < b.rows(); ++r) { // reduce row r of the column form
        if (k.moduli[r] != 0) {
            for (std::size_t c = 0; c < b.cols(); ++c) {
                b(r, c) = mod_floor(b(r, c), k.moduli[r]);
            }
        }
    }
    return Endomorphism(Q, MatrixEndo{transpose(b)});
}

/// alpha restricted to Gamma_j of the lower central series (Heisenberg j <= 3,
/// free abelian j <= 2), in the layer's own coordinates.
inline Endomorphism restrict_to_layer(const Endomorphism& alpha, std::size_t j)
{
    const auto layer = lower_central_layer(alpha.group(), j);
    if (j == 1) {
        return alpha;
    }
    if (const auto* h = alpha.as<HeisenbergEndo>(); h != nullptr && j == 2) {
        return Endomorphism(layer.layer, MatrixEndo{IntMatrix::diagonal({h->lambda * h->gamma})});
    }
    return Endomorphism(layer.layer, MatrixEndo{IntMatrix(0, 0)});
}

/// Induced map on Gamma_j / Gamma_{j+1}.
inline Endomorphism induce_on_layer_quotient(const Endomorphism& alpha, std::size_t j)
{
    const auto layer = lower_central_layer(alpha.group(), j);
    if (const auto* h = alpha.as<HeisenbergEndo>()) {
        switch (j) {
        case 1:
            return Endomorphism(layer.quotient, MatrixEndo{IntMatrix::diagonal({h->lambda, h->gamma})});
        case 2:
            return Endomorphism(layer.quotient, MatrixEndo{IntMatrix::diagonal({h->lambda * h->gamma})});
        default:
            return Endomorphism(layer.quotient, MatrixEndo{IntMatrix(0, 0)});
        }
    }
    if (j == 1) {
        return alpha;
    }
    return Endomorphism(layer.quotient, MatrixEndo{IntMatrix(0, 0)});
}

/// Heisenberg map on Gamma_1 / Gamma_2 = Z^2 (coordinates a, c): diag(lambda, gamma).
inline Endomorphism abelianization(const Endomorphism& alpha)
{
    if (alpha.as<HeisenbergEndo>() == nullptr) {
        throw InvalidArgument("abelianization: needs a heisenberg endomorphism");
    }
    return induce_on_layer_quotient(alpha, 1);
}

inline std::string describe(const Endomorphism& alpha)
{
    std::ostringstream os;
    std::visit(
        [&](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, MatrixEndo>) {
                os << "matrix " << r.matrix;
            }
            else if constexpr (std::is_same_v<R, WordEndo>) {
                const auto names = alpha.group().generator_names();
                os << "words";
                for (std::size_t i = 0; i < r.images.size(); ++i) {
                    os << (i ? ", " : " ") << names[i] << "->" << to_string(r.images[i]);
                }
            }
            else if constexpr (std::is_same_v<R, HeisenbergEndo>) {
                os << "heisenberg lambda=" << r.lambda << " gamma=" << r.gamma;
            }
            else if constexpr (std::is_same_v<R, ProductEndo>) {
                os << "product (" << describe(r.parts[0]) << ") x (" << describe(r.parts[1]) << ")";
            }
            else {
                os << "semidirect base " << r.base << " quotient " << r.quotient;
            }
        },
        alpha.rep());
    return os.str();
}

} // namespace endogrow
