#pragma once

// Concrete finitely generated groups with canonical normal forms.
//
// A Group is an immutable descriptor; elements are plain values whose shape
// depends on the group kind:
//
//   FreeAbelian(n), Sublattice     IntVector (coordinates)
//   AbelianQuotient                IntVector (free part, then torsion residues in [0, d))
//   Free(n)                        Word (freely reduced)
//   Heisenberg                     HeisenbergTriple (a, b, c)
//   DirectProduct, Semidirect      ProductPair
//   FreeProduct                    SyllableWord (alternating factors, no identity syllables)
//
// Equality of elements is equality of normal forms.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "matrix.hpp"

namespace endogrow {

// ---------------------------------------------------------------- elements

/// Reduced word. Letter k > 0 is generator k-1, letter -k its inverse.
struct Word {
    std::vector<int> letters;

    std::size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }
    friend bool operator==(const Word&, const Word&) = default;
};

struct HeisenbergTriple {
    BigInt a;
    BigInt b;
    BigInt c;

    friend bool operator==(const HeisenbergTriple&, const HeisenbergTriple&) = default;
};

struct Element;
struct Syllable;

struct ProductPair {
    std::vector<Element> parts; // always two: (first, second)

    friend bool operator==(const ProductPair& x, const ProductPair& y);
};

struct SyllableWord {
    std::vector<Syllable> syllables;

    friend bool operator==(const SyllableWord& x, const SyllableWord& y);
};

struct Element {
    using Value = std::variant<IntVector, Word, HeisenbergTriple, ProductPair, SyllableWord>;
    Value value;

    Element() = default;
    Element(IntVector v) : value(std::move(v)) {}
    Element(Word w) : value(std::move(w)) {}
    Element(HeisenbergTriple t) : value(std::move(t)) {}
    Element(ProductPair p) : value(std::move(p)) {}
    Element(SyllableWord s) : value(std::move(s)) {}

    template <class T>
    const T& as() const
    {
        const T* p = std::get_if<T>(&value);
        if (p == nullptr) {
            throw InvalidArgument("element has the wrong shape for this group");
        }
        return *p;
    }

    friend bool operator==(const Element& x, const Element& y) { return x.value == y.value; }
};

struct Syllable {
    std::size_t factor = 0;
    Element value;

    friend bool operator==(const Syllable&, const Syllable&) = default;
};

inline bool operator==(const ProductPair& x, const ProductPair& y) { return x.parts == y.parts; }
inline bool operator==(const SyllableWord& x, const SyllableWord& y) { return x.syllables == y.syllables; }

inline Element make_pair_element(Element first, Element second)
{
    ProductPair p;
    p.parts.reserve(2);
    p.parts.push_back(std::move(first));
    p.parts.push_back(std::move(second));
    return Element(std::move(p));
}

inline HeisenbergTriple heis(long long a, long long b, long long c) { return {a, b, c}; }

namespace detail {

inline void hash_mix(std::size_t& seed, std::size_t value)
{
    seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

} // namespace detail

struct ElementHash {
    std::size_t operator()(const Element& e) const
    {
        std::size_t seed = e.value.index();
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, IntVector>) {
                    for (const auto& x : v) {
                        detail::hash_mix(seed, std::hash<BigInt>{}(x));
                    }
                }
                else if constexpr (std::is_same_v<T, Word>) {
                    for (int x : v.letters) {
                        detail::hash_mix(seed, std::hash<int>{}(x));
                    }
                }
                else if constexpr (std::is_same_v<T, HeisenbergTriple>) {
                    detail::hash_mix(seed, std::hash<BigInt>{}(v.a));
                    detail::hash_mix(seed, std::hash<BigInt>{}(v.b));
                    detail::hash_mix(seed, std::hash<BigInt>{}(v.c));
                }
                else if constexpr (std::is_same_v<T, ProductPair>) {
                    for (const auto& part : v.parts) {
                        detail::hash_mix(seed, (*this)(part));
                    }
                }
                else {
                    for (const auto& s : v.syllables) {
                        detail::hash_mix(seed, s.factor);
                        detail::hash_mix(seed, (*this)(s.value));
                    }
                }
            },
            e.value);
        return seed;
    }
};

inline std::string letter_name(int letter)
{
    const int index = letter > 0 ? letter - 1 : -letter - 1;
    if (index < 26) {
        return std::string(1, static_cast<char>((letter > 0 ? 'a' : 'A') + index));
    }
    return (letter > 0 ? "s" : "S") + std::to_string(index + 1);
}

inline std::string to_string(const Word& w)
{
    if (w.empty()) {
        return "1";
    }
    std::string s;
    for (int x : w.letters) {
        s += letter_name(x);
    }
    return s;
}

inline std::string to_string(const Element& e)
{
    std::ostringstream os;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IntVector>) {
                os << '(';
                for (std::size_t i = 0; i < v.size(); ++i) {
                    os << (i ? "," : "") << v[i];
                }
                os << ')';
            }
            else if constexpr (std::is_same_v<T, Word>) {
                os << to_string(v);
            }
            else if constexpr (std::is_same_v<T, HeisenbergTriple>) {
                os << '(' << v.a << ',' << v.b << ',' << v.c << ')';
            }
            else if constexpr (std::is_same_v<T, ProductPair>) {
                os << '<' << to_string(v.parts.at(0)) << ", " << to_string(v.parts.at(1)) << '>';
            }
            else {
                if (v.syllables.empty()) {
                    os << '1';
                }
                for (const auto& s : v.syllables) {
                    os << '[' << s.factor << ':' << to_string(s.value) << ']';
                }
            }
        },
        e.value);
    return os.str();
}

// ------------------------------------------------------------------ groups

enum class LengthMode { Exact, Quasi, BfsOracle };
enum class HeisenbergScheme { Standard3, Minimal2 };

inline std::string to_string(LengthMode m)
{
    switch (m) {
    case LengthMode::Exact:
        return "exact";
    case LengthMode::Quasi:
        return "quasi";
    case LengthMode::BfsOracle:
        return "bfs";
    }
    return "?";
}

class Group;
using GroupPtr = std::shared_ptr<const Group>;

struct FreeAbelianKind {
    std::size_t rank = 0;
    friend bool operator==(const FreeAbelianKind&, const FreeAbelianKind&) = default;
};

struct FreeKind {
    std::size_t rank = 0;
    friend bool operator==(const FreeKind&, const FreeKind&) = default;
};

struct HeisenbergKind {
    HeisenbergScheme scheme = HeisenbergScheme::Standard3;
    friend bool operator==(const HeisenbergKind&, const HeisenbergKind&) = default;
};

struct DirectProductKind {
    GroupPtr left;
    GroupPtr right;
    friend bool operator==(const DirectProductKind& x, const DirectProductKind& y);
};

struct FreeProductKind {
    GroupPtr left;
    GroupPtr right;
    friend bool operator==(const FreeProductKind& x, const FreeProductKind& y);
};

/// Z^base_rank semidirect Z^quotient_rank; generator j of Z^quotient_rank acts by action[j].
struct SemidirectKind {
    std::size_t base_rank = 0;
    std::size_t quotient_rank = 0;
    std::vector<IntMatrix> action;
    std::vector<IntMatrix> action_inverse;

    /// phi(q) = prod_j action[j]^q_j (the action matrices commute).
    IntMatrix phi(const IntVector& q) const
    {
        IntMatrix m = IntMatrix::identity(base_rank);
        for (std::size_t j = 0; j < quotient_rank; ++j) {
            if (q[j] > 0) {
                m = m * mat_pow(action[j], q[j].convert_to<std::size_t>());
            }
            else if (q[j] < 0) {
                m = m * mat_pow(action_inverse[j], BigInt(-q[j]).convert_to<std::size_t>());
            }
        }
        return m;
    }

    friend bool operator==(const SemidirectKind& x, const SemidirectKind& y)
    {
        return x.base_rank == y.base_rank && x.quotient_rank == y.quotient_rank && x.action == y.action;
    }
};

/// Z^ambient_rank / L realized through the Smith form U * L * V = D.
/// Coordinates kept are those with invariant factor != 1; moduli[i] is 0
/// for a free coordinate and d > 1 for a torsion one.
struct AbelianQuotientKind {
    std::size_t ambient_rank = 0;
    IntMatrix relations;              ///< columns generate L
    std::vector<BigInt> moduli;       ///< free coordinates first, then torsion
    IntMatrix projection;             ///< kept rows of U, reordered like moduli
    IntMatrix lift;                   ///< matching columns of U^-1

    std::size_t free_rank() const
    {
        return static_cast<std::size_t>(std::count(moduli.begin(), moduli.end(), BigInt(0)));
    }

    friend bool operator==(const AbelianQuotientKind& x, const AbelianQuotientKind& y)
    {
        return x.ambient_rank == y.ambient_rank && x.relations == y.relations;
    }
};

/// Sublattice of Z^ambient_rank spanned by the columns of basis; elements are
/// coordinates with respect to that basis.
struct SublatticeKind {
    std::size_t ambient_rank = 0;
    IntMatrix basis;

    friend bool operator==(const SublatticeKind&, const SublatticeKind&) = default;
};

class Group {
public:
    using Kind = std::variant<FreeAbelianKind, FreeKind, HeisenbergKind, DirectProductKind, FreeProductKind,
                              SemidirectKind, AbelianQuotientKind, SublatticeKind>;

    explicit Group(Kind kind) : kind_(std::move(kind)), mode_(default_mode()) {}
    Group(Kind kind, LengthMode mode, std::size_t radius = 0) : kind_(std::move(kind)), mode_(mode), radius_(radius)
    {
    }

    const Kind& kind() const { return kind_; }
    LengthMode length_mode() const { return mode_; }
    std::size_t bfs_radius() const { return radius_; }

    template <class K>
    const K* as() const
    {
        return std::get_if<K>(&kind_);
    }

    template <class K>
    bool is() const
    {
        return std::holds_alternative<K>(kind_);
    }

    Group with_length_mode(LengthMode mode, std::size_t radius = 0) const { return Group(kind_, mode, radius); }

    std::string kind_name() const
    {
        static const char* names[] = {"free_abelian", "free",    "heisenberg",       "direct_product",
                                      "free_product", "semidirect", "abelian_quotient", "sublattice"};
        return names[kind_.index()];
    }

    bool is_abelian() const
    {
        if (is<FreeAbelianKind>() || is<AbelianQuotientKind>() || is<SublatticeKind>()) {
            return true;
        }
        if (const auto* f = as<FreeKind>()) {
            return f->rank <= 1;
        }
        if (const auto* d = as<DirectProductKind>()) {
            return d->left->is_abelian() && d->right->is_abelian();
        }
        return false;
    }

    inline Element identity() const;
    inline std::vector<Element> generators() const;
    inline std::vector<std::string> generator_names() const;

    friend bool operator==(const Group& x, const Group& y)
    {
        return x.kind_ == y.kind_ && x.mode_ == y.mode_ && x.radius_ == y.radius_;
    }

private:
    LengthMode default_mode() const
    {
        if (is<HeisenbergKind>() || is<SemidirectKind>()) {
            return LengthMode::Quasi;
        }
        return LengthMode::Exact;
    }

    Kind kind_;
    LengthMode mode_ = LengthMode::Exact;
    std::size_t radius_ = 0;
};

inline bool operator==(const DirectProductKind& x, const DirectProductKind& y)
{
    return *x.left == *y.left && *x.right == *y.right;
}

inline bool operator==(const FreeProductKind& x, const FreeProductKind& y)
{
    return *x.left == *y.left && *x.right == *y.right;
}

inline Group free_abelian(std::size_t rank) { return Group(FreeAbelianKind{rank}); }
inline Group free_group(std::size_t rank) { return Group(FreeKind{rank}); }
inline Group heisenberg(HeisenbergScheme scheme = HeisenbergScheme::Standard3)
{
    return Group(HeisenbergKind{scheme});
}

inline Element Group::identity() const
{
    return std::visit(
        [](const auto& k) -> Element {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FreeAbelianKind>) {
                return IntVector(k.rank, BigInt(0));
            }
            else if constexpr (std::is_same_v<K, FreeKind>) {
                return Word{};
            }
            else if constexpr (std::is_same_v<K, HeisenbergKind>) {
                return HeisenbergTriple{};
            }
            else if constexpr (std::is_same_v<K, DirectProductKind>) {
                return make_pair_element(k.left->identity(), k.right->identity());
            }
            else if constexpr (std::is_same_v<K, FreeProductKind>) {
                return SyllableWord{};
            }
            else if constexpr (std::is_same_v<K, SemidirectKind>) {
                return make_pair_element(IntVector(k.base_rank, BigInt(0)), IntVector(k.quotient_rank, BigInt(0)));
            }
            else if constexpr (std::is_same_v<K, AbelianQuotientKind>) {
                return IntVector(k.moduli.size(), BigInt(0));
            }
            else {
                return IntVector(k.basis.cols(), BigInt(0));
            }
        },
        kind_);
}

namespace detail {

inline std::vector<Element> unit_vectors(std::size_t n)
{
    std::vector<Element> out;
    for (std::size_t i = 0; i < n; ++i) {
        IntVector v(n, BigInt(0));
        v[i] = 1;
        out.emplace_back(std::move(v));
    }
    return out;
}

} // namespace detail

inline std::vector<Element> Group::generators() const
{
    return std::visit(
        [](const auto& k) -> std::vector<Element> {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FreeAbelianKind>) {
                return detail::unit_vectors(k.rank);
            }
            else if constexpr (std::is_same_v<K, FreeKind>) {
                std::vector<Element> out;
                for (std::size_t i = 0; i < k.rank; ++i) {
                    out.emplace_back(Word{{static_cast<int>(i) + 1}});
                }
                return out;
            }
            else if constexpr (std::is_same_v<K, HeisenbergKind>) {
                if (k.scheme == HeisenbergScheme::Standard3) {
                    return {Element(heis(1, 0, 0)), Element(heis(0, 1, 0)), Element(heis(0, 0, 1))};
                }
                return {Element(heis(1, 0, 0)), Element(heis(0, 0, 1))};
            }
            else if constexpr (std::is_same_v<K, DirectProductKind>) {
                std::vector<Element> out;
                for (auto& g : k.left->generators()) {
                    out.push_back(make_pair_element(g, k.right->identity()));
                }
                for (auto& g : k.right->generators()) {
                    out.push_back(make_pair_element(k.left->identity(), g));
                }
                return out;
            }
            else if constexpr (std::is_same_v<K, FreeProductKind>) {
                std::vector<Element> out;
                std::size_t factor = 0;
                for (const auto& side : {k.left, k.right}) {
                    for (auto& g : side->generators()) {
                        SyllableWord w;
                        w.syllables.push_back(Syllable{factor, g});
                        out.emplace_back(std::move(w));
                    }
                    ++factor;
                }
                return out;
            }
            else if constexpr (std::is_same_v<K, SemidirectKind>) {
                std::vector<Element> out;
                for (auto& h : detail::unit_vectors(k.base_rank)) {
                    out.push_back(make_pair_element(h, IntVector(k.quotient_rank, BigInt(0))));
                }
                for (auto& q : detail::unit_vectors(k.quotient_rank)) {
                    out.push_back(make_pair_element(IntVector(k.base_rank, BigInt(0)), q));
                }
                return out;
            }
            else if constexpr (std::is_same_v<K, AbelianQuotientKind>) {
                return detail::unit_vectors(k.moduli.size());
            }
            else {
                return detail::unit_vectors(k.basis.cols());
            }
        },
        kind_);
}

inline std::vector<std::string> Group::generator_names() const
{
    return std::visit(
        [this](const auto& k) -> std::vector<std::string> {
            using K = std::decay_t<decltype(k)>;
            std::vector<std::string> out;
            if constexpr (std::is_same_v<K, FreeKind>) {
                for (std::size_t i = 0; i < k.rank; ++i) {
                    out.push_back(letter_name(static_cast<int>(i) + 1));
                }
            }
            else if constexpr (std::is_same_v<K, HeisenbergKind>) {
                out = k.scheme == HeisenbergScheme::Standard3 ? std::vector<std::string>{"x", "y", "z"}
                                                              : std::vector<std::string>{"x", "z"};
            }
            else if constexpr (std::is_same_v<K, DirectProductKind> || std::is_same_v<K, FreeProductKind>) {
                for (auto& n : k.left->generator_names()) {
                    out.push_back("L." + n);
                }
                for (auto& n : k.right->generator_names()) {
                    out.push_back("R." + n);
                }
            }
            else if constexpr (std::is_same_v<K, SemidirectKind>) {
                for (std::size_t i = 0; i < k.base_rank; ++i) {
                    out.push_back("h" + std::to_string(i + 1));
                }
                for (std::size_t i = 0; i < k.quotient_rank; ++i) {
                    out.push_back("t" + std::to_string(i + 1));
                }
            }
            else {
                for (std::size_t i = 0; i < generators().size(); ++i) {
                    out.push_back("e" + std::to_string(i + 1));
                }
            }
            return out;
        },
        kind_);
}

// -------------------------------------------------------------- operations

namespace detail {

/// Append letters to a reduced word, cancelling at the junction.
inline void append_reduced(std::vector<int>& out, const std::vector<int>& tail)
{
    for (int x : tail) {
        if (!out.empty() && out.back() == -x) {
            out.pop_back();
        }
        else {
            out.push_back(x);
        }
    }
}

inline Word inverse_word(const Word& w)
{
    Word r;
    r.letters.reserve(w.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        r.letters.push_back(-*it);
    }
    return r;
}

inline IntVector reduce_quotient(IntVector v, const AbelianQuotientKind& k)
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (k.moduli[i] != 0) {
            v[i] = mod_floor(v[i], k.moduli[i]);
        }
    }
    return v;
}

inline IntVector add(const IntVector& x, const IntVector& y)
{
    if (x.size() != y.size()) {
        throw InvalidArgument("vector length mismatch");
    }
    IntVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] + y[i];
    }
    return out;
}

inline IntVector negate(const IntVector& x)
{
    IntVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = -x[i];
    }
    return out;
}

} // namespace detail

/// Freely reduce an arbitrary letter sequence.
inline Word reduce_word(const std::vector<int>& letters)
{
    Word w;
    detail::append_reduced(w.letters, letters);
    return w;
}

inline bool is_reduced(const Word& w)
{
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (w.letters[i] == -w.letters[i - 1]) {
            return false;
        }
    }
    return std::none_of(w.letters.begin(), w.letters.end(), [](int x) { return x == 0; });
}

/// Throws InvalidArgument unless g has the normal-form shape G expects.
inline void check_member(const Element& g, const Group& G);

inline Element multiply(const Element& g, const Element& h, const Group& G);
inline Element invert(const Element& g, const Group& G);

namespace detail {

inline SyllableWord normalize_syllables(std::vector<Syllable> input, const FreeProductKind& k)
{
    SyllableWord out;
    for (auto& s : input) {
        const Group& factor = s.factor == 0 ? *k.left : *k.right;
        if (s.value == factor.identity()) {
            continue;
        }
        if (!out.syllables.empty() && out.syllables.back().factor == s.factor) {
            Element merged = multiply(out.syllables.back().value, s.value, factor);
            out.syllables.pop_back();
            if (!(merged == factor.identity())) {
                out.syllables.push_back(Syllable{s.factor, std::move(merged)});
            }
        }
        else {
            out.syllables.push_back(std::move(s));
        }
    }
    return out;
}

} // namespace detail

inline void check_member(const Element& g, const Group& G)
{
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FreeAbelianKind>) {
                if (g.as<IntVector>().size() != k.rank) {
                    throw InvalidArgument("vector length does not match group rank");
                }
            }
            else if constexpr (std::is_same_v<K, FreeKind>) {
                const Word& w = g.as<Word>();
                for (int x : w.letters) {
                    if (x == 0 || static_cast<std::size_t>(x > 0 ? x : -x) > k.rank) {
                        throw InvalidArgument("letter outside the free basis");
                    }
                }
                if (!is_reduced(w)) {
                    throw InvalidArgument("word is not freely reduced");
                }
            }
            else if constexpr (std::is_same_v<K, HeisenbergKind>) {
                (void)g.as<HeisenbergTriple>();
            }
            else if constexpr (std::is_same_v<K, DirectProductKind>) {
                const auto& p = g.as<ProductPair>();
                if (p.parts.size() != 2) {
                    throw InvalidArgument("product element needs two components");
                }
                check_member(p.parts[0], *k.left);
                check_member(p.parts[1], *k.right);
            }
            else if constexpr (std::is_same_v<K, FreeProductKind>) {
                const auto& w = g.as<SyllableWord>();
                for (std::size_t i = 0; i < w.syllables.size(); ++i) {
                    const auto& s = w.syllables[i];
                    if (s.factor > 1) {
                        throw InvalidArgument("syllable factor index out of range");
                    }
                    const Group& f = s.factor == 0 ? *k.left : *k.right;
                    check_member(s.value, f);
                    if (s.value == f.identity() || (i > 0 && w.syllables[i - 1].factor == s.factor)) {
                        throw InvalidArgument("syllable word is not in normal form");
                    }
                }
            }
            else if constexpr (std::is_same_v<K, SemidirectKind>) {
                const auto& p = g.as<ProductPair>();
                if (p.parts.size() != 2 || p.parts[0].as<IntVector>().size() != k.base_rank ||
                    p.parts[1].as<IntVector>().size() != k.quotient_rank) {
                    throw InvalidArgument("semidirect element has wrong shape");
                }
            }
            else if constexpr (std::is_same_v<K, AbelianQuotientKind>) {
                const auto& v = g.as<IntVector>();
                if (v.size() != k.moduli.size()) {
                    throw InvalidArgument("quotient element has wrong length");
                }
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (k.moduli[i] != 0 && (v[i] < 0 || v[i] >= k.moduli[i])) {
                        throw InvalidArgument("torsion residue not reduced");
                    }
                }
            }
            else {
                if (g.as<IntVector>().size() != k.basis.cols()) {
                    throw InvalidArgument("sublattice coordinates have wrong length");
                }
            }
        },
        G.kind());
}

inline Element multiply(const Element& g, const Element& h, const Group& G)
{
    return std::visit(
        [&](const auto& k) -> Element {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FreeAbelianKind> || std::is_same_v<K, SublatticeKind>) {
                return detail::add(g.as<IntVector>(), h.as<IntVector>());
            }
            else if constexpr (std::is_same_v<K, AbelianQuotientKind>) {
                return detail::reduce_quotient(detail::add(g.as<IntVector>(), h.as<IntVector>()), k);
            }
            else if constexpr (std::is_same_v<K, FreeKind>) {
                Word w = g.as<Word>();
                detail::append_reduced(w.letters, h.as<Word>().letters);
                return w;
            }
            else if constexpr (std::is_same_v<K, HeisenbergKind>) {
                const auto& x = g.as<HeisenbergTriple>();
                const auto& y = h.as<HeisenbergTriple>();
                return HeisenbergTriple{x.a + y.a, x.b + y.b + x.a * y.c, x.c + y.c};
            }
            else if constexpr (std::is_same_v<K, DirectProductKind>) {
                const auto& x = g.as<ProductPair>();
                const auto& y = h.as<ProductPair>();
                return make_pair_element(multiply(x.parts[0], y.parts[0], *k.left),
                                         multiply(x.parts[1], y.parts[1], *k.right));
            }
            else if constexpr (std::is_same_v<K, FreeProductKind>) {
                std::vector<Syllable> joined = g.as<SyllableWord>().syllables;
                const auto& tail = h.as<SyllableWord>().syllables;
                joined.insert(joined.end(), tail.begin(), tail.end());
                return detail::normalize_syllables(std::move(joined), k);
            }
            else {
                // (h, q)(h', q') = (h + phi(q) h', q + q')
                const auto& x = g.as<ProductPair>();
                const auto& y = h.as<ProductPair>();
                const IntVector& q = x.parts[1].as<IntVector>();
                IntVector moved = mat_vec(k.phi(q), y.parts[0].as<IntVector>());
                return make_pair_element(detail::add(x.parts[0].as<IntVector>(), moved),
                                         detail::add(q, y.parts[1].as<IntVector>()));
            }
        },
        G.kind());
}

inline Element invert(const Element& g, const Group& G)
{
    return std::visit(
        [&](const auto& k) -> Element {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FreeAbelianKind> || std::is_same_v<K, SublatticeKind>) {
                return detail::negate(g.as<IntVector>());
            }
            else if constexpr (std::is_same_v<K, AbelianQuotientKind>) {
                return detail::reduce_quotient(detail::negate(g.as<IntVector>()), k);
            }
            else if constexpr (std::is_same_v<K, FreeKind>) {
                return detail::inverse_word(g.as<Word>());
            }
            else if constexpr (std::is_same_v<K, HeisenbergKind>) {
                const auto& x = g.as<HeisenbergTriple>();
                return HeisenbergTriple{-x.a, x.a * x.c - x.b, -x.c};
            }
            else if constexpr (std::is_same_v<K, DirectProductKind>) {
                const auto& x = g.as<ProductPair>();
                return make_pair_element(invert(x.parts[0], *k.left), invert(x.parts[1], *k.right));
            }
            else if constexpr (std::is_same_v<K, FreeProductKind>) {
                SyllableWord out;
                const auto& s = g.as<SyllableWord>().syllables;
                for (auto it = s.rbegin(); it != s.rend(); ++it) {
                    const Group& f = it->factor == 0 ? *k.left : *k.right;
                    out.syllables.push_back(Syllable{it->factor, invert(it->value, f)});
                }
                return out;
            }
            else {
                // (h, q)^-1 = (-phi(-q) h, -q)
                const auto& x = g.as<ProductPair>();
                const IntVector minus_q = detail::negate(x.parts[1].as<IntVector>());
                return make_pair_element(detail::negate(mat_vec(k.phi(minus_q), x.parts[0].as<IntVector>())),
                                         minus_q);
            }
        },
        G.kind());
}

/// g h g^-1 h^-1
inline Element commutator(const Element& g, const Element& h, const Group& G)
{
    return multiply(multiply(g, h, G), multiply(invert(g, G), invert(h, G), G), G);
}

/// g^n for any integer n by repeated squaring.
inline Element power(const Element& g, const BigInt& n, const Group& G)
{
    Element base = n < 0 ? invert(g, G) : g;
    BigInt e = abs(n);
    Element result = G.identity();
    while (e > 0) {
        if ((e & 1) != 0) {
            result = multiply(result, base, G);
        }
        e >>= 1;
        if (e > 0) {
            base = multiply(base, base, G);
        }
    }
    return result;
}

// ------------------------------------------------------------------ lengths

enum class Exactness { Exact, QuasiEquivalent };

struct LengthValue {
    BigInt value = 0;
    Exactness exactness = Exactness::Exact;

    friend bool operator==(const LengthValue&, const LengthValue&) = default;
};

/// Raised when a length oracle is asked about an element beyond its radius.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Raised for a kind/operation combination the library does not implement.
class Unsupported : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// max(|a|, |c|, ceil(sqrt|b|)), symmetrized over g and g^-1 (the inverse has
/// centre coordinate ac - b, so the raw formula is not symmetric).
/// Multiplicatively equivalent to the word metric, not itself a word metric.
inline BigInt heisenberg_quasi_length(const HeisenbergTriple& t)
{
    const BigInt centre = std::max(abs(t.b), abs(BigInt(t.a * t.c - t.b)));
    return std::max({abs(t.a), abs(t.c), ceil_sqrt(centre)});
}

/// True when every action matrix has finite order (the base is then undistorted
/// and |h|_1 + |q|_1 is equivalent to the word length).
inline bool has_finite_order_action(const SemidirectKind& k)
{
    for (const auto& a : k.action) {
        IntMatrix p = a;
        bool finite = false;
        for (int order = 1; order <= 60; ++order) {
            if (p == IntMatrix::identity(k.base_rank)) {
                finite = true;
                break;
            }
            p = p * a;
        }
        if (!finite) {
            return false;
        }
    }
    return true;
}

/// Closed-form length for the Exact and Quasi modes. BfsOracle mode lives in
/// length.hpp because it needs the ball oracle.
inline LengthValue closed_form_length(const Element& g, const Group& G)
{
    const bool quasi = G.length_mode() == LengthMode::Quasi;
    return std::visit(
        [&](const auto& k) -> LengthValue {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FreeAbelianKind> || std::is_same_v<K, SublatticeKind>) {
                return {l1_norm(g.as<IntVector>()), Exactness::Exact};
            }
            else if constexpr (std::is_same_v<K, AbelianQuotientKind>) {
                const auto& v = g.as<IntVector>();
                BigInt total = 0;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (k.moduli[i] == 0) {
                        total += abs(v[i]);
                    }
                    else {
                        const BigInt r = mod_floor(v[i], k.moduli[i]);
                        total += std::min(r, BigInt(k.moduli[i] - r));
                    }
                }
                return {total, Exactness::Exact};
            }
            else if constexpr (std::is_same_v<K, FreeKind>) {
                return {BigInt(g.as<Word>().size()), Exactness::Exact};
            }
            else if constexpr (std::is_same_v<K, HeisenbergKind>) {
                if (!quasi) {
                    throw Unsupported("heisenberg: no closed-form exact length; use quasi or bfs mode");
                }
                return {heisenberg_quasi_length(g.as<HeisenbergTriple>()), Exactness::QuasiEquivalent};
            }
            else if constexpr (std::is_same_v<K, DirectProductKind>) {
                const auto& p = g.as<ProductPair>();
                const auto a = closed_form_length(p.parts[0], *k.left);
                const auto b = closed_form_length(p.parts[1], *k.right);
                const bool exact = a.exactness == Exactness::Exact && b.exactness == Exactness::Exact;
                return {a.value + b.value, exact ? Exactness::Exact : Exactness::QuasiEquivalent};
            }
            else if constexpr (std::is_same_v<K, FreeProductKind>) {
                LengthValue total;
                for (const auto& s : g.as<SyllableWord>().syllables) {
                    const auto part = closed_form_length(s.value, s.factor == 0 ? *k.left : *k.right);
                    total.value += part.value;
                    if (part.exactness != Exactness::Exact) {
                        total.exactness = Exactness::QuasiEquivalent;
                    }
                }
                return total;
            }
            else {
                if (!quasi) {
                    throw Unsupported("semidirect: no closed-form exact length; use quasi or bfs mode");
                }
                if (!has_finite_order_action(k)) {
                    throw Unsupported("semidirect: quasi length needs a finite-order action; use bfs mode");
                }
                const auto& p = g.as<ProductPair>();
                return {l1_norm(p.parts[0].as<IntVector>()) + l1_norm(p.parts[1].as<IntVector>()),
                        Exactness::QuasiEquivalent};
            }
        },
        G.kind());
}

// ------------------------------------------------------ lower central series

/// Gamma_j and Gamma_j / Gamma_{j+1}, each with its own descriptor.
struct LowerCentralLayer {
    std::size_t j = 1;
    Group ambient;
    Group layer;
    Group quotient;
};

/// Implemented for the Heisenberg group (j = 1, 2, 3) and free abelian groups (j = 1, 2).
inline LowerCentralLayer lower_central_layer(const Group& G, std::size_t j)
{
    if (j == 0) {
        throw InvalidArgument("lower central series is indexed from 1");
    }
    if (G.is<HeisenbergKind>()) {
        switch (j) {
        case 1:
            return {1, G, G, free_abelian(2)};
        case 2:
            return {2, G, free_abelian(1), free_abelian(1)};
        case 3:
            return {3, G, free_abelian(0), free_abelian(0)};
        default:
            break;
        }
    }
    else if (G.is<FreeAbelianKind>()) {
        if (j == 1) {
            return {1, G, G, G};
        }
        if (j == 2) {
            return {2, G, free_abelian(0), free_abelian(0)};
        }
    }
    throw Unsupported("lower_central_layer: only heisenberg (j <= 3) and free abelian (j <= 2) are supported");
}

/// Image of a Heisenberg element in Gamma_1 / Gamma_2 = Z^2, coordinates (a, c).
inline IntVector heisenberg_abelianize(const HeisenbergTriple& t) { return {t.a, t.c}; }

/// Gamma_2 = {(0, n, 0)}: the central element with the given coordinate.
inline HeisenbergTriple heisenberg_center(const BigInt& n) { return {0, n, 0}; }

} // namespace endogrow
