#pragma once

// JSON instance specs. Every group and endomorphism object carries a "kind"
// discriminator; the full grammar is documented in README.md. Parse errors
// name the offending location as a JSON pointer (or line/column for syntax
// errors).

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "laws.hpp"

namespace endogrow {

using Json = nlohmann::ordered_json;

class SpecError : public InvalidArgument {
public:
    SpecError(const std::string& where, const std::string& what)
        : InvalidArgument(where + ": " + what), where_(where)
    {
    }
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

/// A parsed instance document: the law-harness instance plus its seed.
struct InstanceSpec {
    Instance instance;
    std::uint64_t seed = 0;
};

namespace detail {

/// A JSON value together with its pointer, for error messages.
struct Node {
    const Json& j;
    std::string path;

    std::string where() const { return path.empty() ? "/" : path; }

    [[noreturn]] void fail(const std::string& what) const { throw SpecError(where(), what); }

    bool has(const char* key) const { return j.is_object() && j.contains(key); }

    Node at(const char* key) const
    {
        if (!has(key)) {
            fail(std::string("missing \"") + key + "\"");
        }
        return {j.at(key), path + "/" + key};
    }

    Node item(std::size_t i) const { return {j.at(i), path + "/" + std::to_string(i)}; }

    const Json& object(std::initializer_list<const char*> allowed) const
    {
        if (!j.is_object()) {
            fail("expected an object");
        }
        for (const auto& [key, value] : j.items()) {
            bool ok = false;
            for (const char* a : allowed) {
                ok = ok || key == a;
            }
            if (!ok) {
                throw SpecError(path + "/" + key, "unknown key");
            }
        }
        return j;
    }

    std::size_t array_size() const
    {
        if (!j.is_array()) {
            fail("expected an array");
        }
        return j.size();
    }

    std::string str() const
    {
        if (!j.is_string()) {
            fail("expected a string");
        }
        return j.get<std::string>();
    }

    BigInt integer() const
    {
        if (j.is_number_integer()) {
            return j.is_number_unsigned() ? BigInt(j.get<std::uint64_t>()) : BigInt(j.get<std::int64_t>());
        }
        if (j.is_string()) {
            try {
                return parse_bigint(j.get<std::string>());
            }
            catch (const InvalidArgument&) {
                fail("malformed integer string");
            }
        }
        fail("expected an integer");
    }

    std::size_t count() const
    {
        const BigInt v = integer();
        if (v < 0 || v > BigInt(1'000'000'000)) {
            fail("expected a non-negative count");
        }
        return v.convert_to<std::size_t>();
    }

    double real() const
    {
        if (!j.is_number()) {
            fail("expected a number");
        }
        return j.get<double>();
    }

    IntVector vector(std::optional<std::size_t> size = std::nullopt) const
    {
        const std::size_t n = array_size();
        if (size && n != *size) {
            fail("expected " + std::to_string(*size) + " entries, got " + std::to_string(n));
        }
        IntVector v;
        for (std::size_t i = 0; i < n; ++i) {
            v.push_back(item(i).integer());
        }
        return v;
    }

    /// Row-wise matrix.
    IntMatrix rows(std::size_t r, std::size_t c) const
    {
        if (array_size() != r) {
            fail("expected " + std::to_string(r) + " rows, got " + std::to_string(j.size()));
        }
        std::vector<IntVector> out;
        for (std::size_t i = 0; i < r; ++i) {
            out.push_back(item(i).vector(c));
        }
        return r == 0 ? IntMatrix(0, c) : IntMatrix::from_rows(out);
    }

    /// List of vectors of length n, taken as the columns of an n x k matrix.
    IntMatrix columns(std::size_t n) const
    {
        const std::size_t k = array_size();
        IntMatrix m(n, k);
        for (std::size_t c = 0; c < k; ++c) {
            const IntVector v = item(c).vector(n);
            for (std::size_t r = 0; r < n; ++r) {
                m(r, c) = v[r];
            }
        }
        return m;
    }
};

inline Json integer_json(const BigInt& x)
{
    if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max()) {
        return x.convert_to<std::int64_t>();
    }
    return x.str();
}

inline Json vector_json(const IntVector& v)
{
    Json out = Json::array();
    for (const auto& x : v) {
        out.push_back(integer_json(x));
    }
    return out;
}

inline Json rows_json(const IntMatrix& m)
{
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out.push_back(vector_json(m.row(i)));
    }
    return out;
}

inline Json columns_json(const IntMatrix& m) { return rows_json(transpose(m)); }

inline LengthMode parse_length_mode(const Node& n)
{
    const std::string s = n.str();
    for (LengthMode m : {LengthMode::Exact, LengthMode::Quasi, LengthMode::BfsOracle}) {
        if (s == to_string(m)) {
            return m;
        }
    }
    n.fail("length mode must be exact, quasi or bfs");
}

inline std::size_t ambient_rank(const Group& G, const Node& n)
{
    if (const auto* k = G.as<FreeAbelianKind>()) {
        return k->rank;
    }
    n.fail("ambient group must be free_abelian");
}

} // namespace detail

inline Group parse_group(const detail::Node& n)
{
    n.object({"kind", "rank", "generators", "left", "right", "base_rank", "action", "ambient", "relations", "basis",
              "length_mode", "bfs_radius"});
    const std::string kind = n.at("kind").str();
    const auto reject = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys) {
            if (n.has(k)) {
                throw SpecError(n.path + "/" + k, "not allowed for kind " + kind);
            }
        }
    };
    Group G = free_abelian(0);
    try {
        if (kind == "free_abelian" || kind == "free") {
            reject({"generators", "left", "right", "base_rank", "action", "ambient", "relations", "basis"});
            const std::size_t rank = n.at("rank").count();
            G = kind == "free" ? free_group(rank) : free_abelian(rank);
        }
        else if (kind == "heisenberg") {
            reject({"rank", "left", "right", "base_rank", "action", "ambient", "relations", "basis"});
            HeisenbergScheme scheme = HeisenbergScheme::Standard3;
            if (n.has("generators")) {
                const auto g = n.at("generators");
                const std::string s = g.str();
                if (s == "minimal2") {
                    scheme = HeisenbergScheme::Minimal2;
                }
                else if (s != "standard3") {
                    g.fail("generators must be standard3 or minimal2");
                }
            }
            G = heisenberg(scheme);
        }
        else if (kind == "direct_product" || kind == "free_product") {
            reject({"rank", "generators", "base_rank", "action", "ambient", "relations", "basis"});
            const Group l = parse_group(n.at("left"));
            const Group r = parse_group(n.at("right"));
            G = kind == "direct_product" ? direct_product(l, r) : free_product(l, r);
        }
        else if (kind == "semidirect") {
            reject({"rank", "generators", "left", "right", "ambient", "relations", "basis"});
            const auto action = n.at("action");
            const std::size_t count = action.array_size();
            std::size_t base_rank = 0;
            if (n.has("base_rank")) {
                base_rank = n.at("base_rank").count();
            }
            else if (count > 0) {
                base_rank = action.item(0).array_size();
            }
            else {
                n.fail("semidirect with no action matrices needs \"base_rank\"");
            }
            std::vector<IntMatrix> mats;
            for (std::size_t i = 0; i < count; ++i) {
                mats.push_back(action.item(i).rows(base_rank, base_rank));
            }
            G = semidirect(base_rank, mats);
        }
        else if (kind == "abelian_quotient" || kind == "sublattice") {
            reject({"rank", "generators", "left", "right", "base_rank", "action",
                    kind == "sublattice" ? "relations" : "basis"});
            const auto amb = n.at("ambient");
            const Group ambient = parse_group(amb);
            const std::size_t rank = detail::ambient_rank(ambient, amb);
            const IntMatrix cols = n.at(kind == "sublattice" ? "basis" : "relations").columns(rank);
            G = kind == "sublattice" ? sublattice(ambient, cols) : abelian_quotient(ambient, cols);
        }
        else {
            n.at("kind").fail("unknown group kind \"" + kind + "\"");
        }
    }
    catch (const SpecError&) {
        throw;
    }
    catch (const InvalidArgument& e) {
        n.fail(e.what());
    }
    if (n.has("length_mode") || n.has("bfs_radius")) {
        const LengthMode mode = n.has("length_mode") ? detail::parse_length_mode(n.at("length_mode")) : G.length_mode();
        const std::size_t radius = n.has("bfs_radius") ? n.at("bfs_radius").count() : G.bfs_radius();
        G = G.with_length_mode(mode, radius);
    }
    return G;
}

inline Json group_json(const Group& G)
{
    Json out;
    out["kind"] = G.kind_name();
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FreeAbelianKind> || std::is_same_v<K, FreeKind>) {
                out["rank"] = k.rank;
            }
            else if constexpr (std::is_same_v<K, HeisenbergKind>) {
                out["generators"] = k.scheme == HeisenbergScheme::Standard3 ? "standard3" : "minimal2";
            }
            else if constexpr (std::is_same_v<K, DirectProductKind> || std::is_same_v<K, FreeProductKind>) {
                out["left"] = group_json(*k.left);
                out["right"] = group_json(*k.right);
            }
            else if constexpr (std::is_same_v<K, SemidirectKind>) {
                out["base_rank"] = k.base_rank;
                Json action = Json::array();
                for (const auto& a : k.action) {
                    action.push_back(detail::rows_json(a));
                }
                out["action"] = std::move(action);
            }
            else if constexpr (std::is_same_v<K, AbelianQuotientKind>) {
                out["ambient"] = group_json(free_abelian(k.ambient_rank));
                out["relations"] = detail::columns_json(k.relations);
            }
            else {
                out["ambient"] = group_json(free_abelian(k.ambient_rank));
                out["basis"] = detail::columns_json(k.basis);
            }
        },
        G.kind());
    // Spell out the metric only where it differs from the constructor's choice.
    const Group plain = parse_group({out, ""});
    if (plain.length_mode() != G.length_mode() || plain.bfs_radius() != G.bfs_radius()) {
        out["length_mode"] = to_string(G.length_mode());
        out["bfs_radius"] = G.bfs_radius();
    }
    return out;
}

// ---------------------------------------------------------------- elements

namespace detail {

inline Word parse_word(const Node& n, std::size_t rank)
{
    std::vector<int> letters;
    if (n.j.is_string()) {
        const std::string s = n.str();
        if (s != "1") {
            for (char ch : s) {
                int letter = 0;
                if (ch >= 'a' && ch <= 'z') {
                    letter = ch - 'a' + 1;
                }
                else if (ch >= 'A' && ch <= 'Z') {
                    letter = -(ch - 'A' + 1);
                }
                else {
                    n.fail(std::string("bad letter '") + ch + "'");
                }
                letters.push_back(letter);
            }
        }
    }
    else {
        for (const auto& x : n.vector()) {
            if (x == 0 || abs(x) > 1'000'000) {
                n.fail("letters are nonzero generator numbers");
            }
            letters.push_back(x.convert_to<int>());
        }
    }
    for (int x : letters) {
        if (static_cast<std::size_t>(x > 0 ? x : -x) > rank) {
            n.fail("letter " + letter_name(x) + " exceeds rank " + std::to_string(rank));
        }
    }
    return reduce_word(letters);
}

inline Element parse_element_raw(const Node& n, const Group& G)
{
    return std::visit(
        [&](const auto& k) -> Element {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FreeAbelianKind>) {
                return n.vector(k.rank);
            }
            else if constexpr (std::is_same_v<K, SublatticeKind>) {
                return n.vector(k.basis.cols());
            }
            else if constexpr (std::is_same_v<K, AbelianQuotientKind>) {
                IntVector v = n.vector(k.moduli.size());
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (k.moduli[i] != 0) {
                        v[i] = mod_floor(v[i], k.moduli[i]);
                    }
                }
                return v;
            }
            else if constexpr (std::is_same_v<K, FreeKind>) {
                return parse_word(n, k.rank);
            }
            else if constexpr (std::is_same_v<K, HeisenbergKind>) {
                const IntVector v = n.vector(3);
                return HeisenbergTriple{v[0], v[1], v[2]};
            }
            else if constexpr (std::is_same_v<K, DirectProductKind>) {
                if (n.array_size() != 2) {
                    n.fail("expected a pair [left, right]");
                }
                return make_pair_element(parse_element_raw(n.item(0), *k.left), parse_element_raw(n.item(1), *k.right));
            }
            else if constexpr (std::is_same_v<K, SemidirectKind>) {
                if (n.array_size() != 2) {
                    n.fail("expected a pair [base, quotient]");
                }
                return make_pair_element(n.item(0).vector(k.base_rank), n.item(1).vector(k.quotient_rank));
            }
            else {
                // Product of syllables [factor, element], normalized by multiplication.
                Element out = SyllableWord{};
                for (std::size_t i = 0; i < n.array_size(); ++i) {
                    const Node s = n.item(i);
                    if (s.array_size() != 2) {
                        s.fail("expected a syllable [factor, element]");
                    }
                    const std::size_t f = s.item(0).count();
                    if (f > 1) {
                        s.item(0).fail("factor must be 0 or 1");
                    }
                    const Group& factor = f == 0 ? *k.left : *k.right;
                    Element value = parse_element_raw(s.item(1), factor);
                    if (value == factor.identity()) {
                        continue;
                    }
                    out = multiply(out, Element(SyllableWord{{Syllable{f, std::move(value)}}}), G);
                }
                return out;
            }
        },
        G.kind());
}

} // namespace detail

inline Element parse_element(const detail::Node& n, const Group& G)
{
    Element g = detail::parse_element_raw(n, G);
    try {
        check_member(g, G);
    }
    catch (const InvalidArgument& e) {
        n.fail(e.what());
    }
    return g;
}

inline Json element_json(const Element& g, const Group& G)
{
    return std::visit(
        [&](const auto& k) -> Json {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FreeKind>) {
                const auto& w = g.as<Word>();
                if (k.rank <= 26) {
                    return to_string(w);
                }
                return w.letters;
            }
            else if constexpr (std::is_same_v<K, HeisenbergKind>) {
                const auto& t = g.as<HeisenbergTriple>();
                return detail::vector_json({t.a, t.b, t.c});
            }
            else if constexpr (std::is_same_v<K, DirectProductKind>) {
                const auto& p = g.as<ProductPair>();
                return Json::array({element_json(p.parts[0], *k.left), element_json(p.parts[1], *k.right)});
            }
            else if constexpr (std::is_same_v<K, SemidirectKind>) {
                const auto& p = g.as<ProductPair>();
                return Json::array({detail::vector_json(p.parts[0].template as<IntVector>()),
                                    detail::vector_json(p.parts[1].template as<IntVector>())});
            }
            else if constexpr (std::is_same_v<K, FreeProductKind>) {
                Json out = Json::array();
                for (const auto& s : g.as<SyllableWord>().syllables) {
                    out.push_back(Json::array({s.factor, element_json(s.value, s.factor == 0 ? *k.left : *k.right)}));
                }
                return out;
            }
            else {
                return detail::vector_json(g.as<IntVector>());
            }
        },
        G.kind());
}

// ----------------------------------------------------------- endomorphisms

inline Endomorphism parse_endo(const detail::Node& n, const Group& G)
{
    n.object({"kind", "rows", "images", "lambda", "gamma", "left", "right", "base", "quotient"});
    const std::string kind = n.at("kind").str();
    try {
        if (kind == "identity") {
            return identity_endo(G);
        }
        if (kind == "matrix") {
            const std::size_t c = detail::coordinate_count(G);
            return matrix_endo(G, n.at("rows").rows(c, c));
        }
        if (kind == "words") {
            const auto images = n.at("images");
            std::vector<Element> out;
            if (G.is<FreeKind>() || G.is<FreeProductKind>()) {
                for (std::size_t i = 0; i < images.array_size(); ++i) {
                    out.push_back(parse_element(images.item(i), G));
                }
            }
            return word_endo(G, std::move(out));
        }
        if (kind == "heisenberg") {
            return heisenberg_endo(G, n.at("lambda").integer(), n.at("gamma").integer());
        }
        if (kind == "product") {
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
                n.fail("product endomorphism needs a direct or free product");
            }
            return product_endo(G, parse_endo(n.at("left"), *l), parse_endo(n.at("right"), *r));
        }
        if (kind == "semidirect") {
            const auto* k = G.as<SemidirectKind>();
            if (k == nullptr) {
                n.fail("semidirect endomorphism needs a semidirect group");
            }
            return semidirect_endo(G, n.at("base").rows(k->base_rank, k->base_rank),
                                   n.at("quotient").rows(k->quotient_rank, k->quotient_rank));
        }
    }
    catch (const SpecError&) {
        throw;
    }
    catch (const InvalidArgument& e) {
        n.fail(e.what());
    }
    n.at("kind").fail("unknown endomorphism kind \"" + kind + "\"");
}

inline Json endo_json(const Endomorphism& alpha)
{
    const Group& G = alpha.group();
    Json out;
    std::visit(
        [&](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, MatrixEndo>) {
                out["kind"] = "matrix";
                out["rows"] = detail::rows_json(r.matrix);
            }
            else if constexpr (std::is_same_v<R, WordEndo>) {
                out["kind"] = "words";
                Json images = Json::array();
                for (const auto& img : r.images) {
                    images.push_back(element_json(img, G));
                }
                out["images"] = std::move(images);
            }
            else if constexpr (std::is_same_v<R, HeisenbergEndo>) {
                out["kind"] = "heisenberg";
                out["lambda"] = detail::integer_json(r.lambda);
                out["gamma"] = detail::integer_json(r.gamma);
            }
            else if constexpr (std::is_same_v<R, ProductEndo>) {
                out["kind"] = "product";
                out["left"] = endo_json(r.parts[0]);
                out["right"] = endo_json(r.parts[1]);
            }
            else {
                out["kind"] = "semidirect";
                out["base"] = detail::rows_json(r.base);
                out["quotient"] = detail::rows_json(r.quotient);
            }
        },
        alpha.rep());
    return out;
}

// ---------------------------------------------------------------- instances

inline InstanceSpec parse_instance(const detail::Node& n)
{
    n.object({"kind", "name", "group", "endo", "subgroup", "layer", "power", "options"});
    if (n.has("kind") && n.at("kind").str() != "instance") {
        n.at("kind").fail("expected kind \"instance\"");
    }
    Group G = parse_group(n.at("group"));
    InstanceSpec spec{{"", identity_endo(free_abelian(0)), {}, 0, 2, {}}, 0};
    Instance& inst = spec.instance;
    std::optional<LengthMode> mode;
    if (n.has("options")) {
        const auto o = n.at("options");
        o.object({"max_m", "radius", "tolerance", "length_mode", "seed"});
        if (o.has("max_m")) {
            inst.options.max_m = o.at("max_m").count();
        }
        if (o.has("radius")) {
            inst.options.radius = o.at("radius").count();
        }
        if (o.has("tolerance")) {
            inst.options.tolerance = o.at("tolerance").real();
            if (inst.options.tolerance < 0) {
                o.at("tolerance").fail("tolerance must be non-negative");
            }
        }
        if (o.has("length_mode")) {
            mode = detail::parse_length_mode(o.at("length_mode"));
        }
        if (o.has("seed")) {
            spec.seed = o.at("seed").integer().convert_to<std::uint64_t>();
        }
    }
    if (mode) {
        G = G.with_length_mode(*mode, *mode == LengthMode::BfsOracle ? inst.options.radius : 0);
    }
    inst.alpha = parse_endo(n.at("endo"), G);
    if (n.has("name")) {
        inst.name = n.at("name").str();
    }
    if (n.has("subgroup")) {
        const auto s = n.at("subgroup");
        inst.subgroup = s.columns(detail::coordinate_count(G));
    }
    if (n.has("layer")) {
        inst.layer = n.at("layer").count();
    }
    if (n.has("power")) {
        inst.power = n.at("power").count();
        if (inst.power == 0) {
            n.at("power").fail("power must be positive");
        }
    }
    return spec;
}

inline Json instance_json(const Instance& inst, std::uint64_t seed = 0)
{
    Json out;
    out["kind"] = "instance";
    out["name"] = inst.name;
    out["group"] = group_json(inst.alpha.group());
    out["endo"] = endo_json(inst.alpha);
    if (inst.subgroup) {
        out["subgroup"] = detail::columns_json(*inst.subgroup);
    }
    out["layer"] = inst.layer;
    out["power"] = inst.power;
    out["options"] = {{"max_m", inst.options.max_m},
                      {"radius", inst.options.radius},
                      {"tolerance", inst.options.tolerance},
                      {"seed", seed}};
    return out;
}

/// Suite document: {"kind": "suite", "seed": s, "entries": [{"law": id, "instance": {...}}]}.
inline Catalog parse_suite(const detail::Node& n)
{
    n.object({"kind", "seed", "entries"});
    if (n.at("kind").str() != "suite") {
        n.at("kind").fail("expected kind \"suite\"");
    }
    Catalog cat;
    if (n.has("seed")) {
        cat.seed = n.at("seed").integer().convert_to<std::uint64_t>();
    }
    const auto entries = n.at("entries");
    for (std::size_t i = 0; i < entries.array_size(); ++i) {
        const auto e = entries.item(i);
        e.object({"law", "instance"});
        const auto law = e.at("law");
        const std::string id = law.str();
        try {
            law_index(id);
        }
        catch (const UnknownLaw&) {
            law.fail("unknown law id \"" + id + "\"");
        }
        cat.entries.push_back({id, parse_instance(e.at("instance")).instance});
    }
    return cat;
}

inline Json suite_json(const Catalog& cat)
{
    Json entries = Json::array();
    for (const auto& e : cat.entries) {
        entries.push_back({{"law", e.law}, {"instance", instance_json(e.instance)}});
    }
    return {{"kind", "suite"}, {"seed", cat.seed}, {"entries", std::move(entries)}};
}

// --------------------------------------------------------------- documents

/// Parses JSON text; syntax errors report line and column.
inline Json parse_json_text(const std::string& text, const std::string& source = "spec")
{
    try {
        return Json::parse(text);
    }
    catch (const Json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            }
            else {
                ++column;
            }
        }
        std::string what = e.what();
        const auto colon = what.rfind(": ");
        throw SpecError(source + ":" + std::to_string(line) + ":" + std::to_string(column),
                        colon == std::string::npos ? what : what.substr(colon + 2));
    }
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SpecError(path, "cannot open file");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline InstanceSpec instance_from_text(const std::string& text, const std::string& source = "spec")
{
    const Json j = parse_json_text(text, source);
    return parse_instance({j, ""});
}

inline Catalog suite_from_text(const std::string& text, const std::string& source = "suite")
{
    const Json j = parse_json_text(text, source);
    return parse_suite({j, ""});
}

} // namespace endogrow
