#include <gtest/gtest.h>

#include <endogrow/spec_io.hpp>

using namespace endogrow;

namespace {

void expect_same(const Instance& a, const Instance& b)
{
    EXPECT_EQ(a.name, b.name);
    EXPECT_EQ(a.alpha, b.alpha) << a.name;
    EXPECT_EQ(a.subgroup, b.subgroup) << a.name;
    EXPECT_EQ(a.layer, b.layer);
    EXPECT_EQ(a.power, b.power);
    EXPECT_EQ(a.options.max_m, b.options.max_m);
    EXPECT_EQ(a.options.radius, b.options.radius);
    EXPECT_EQ(a.options.tolerance, b.options.tolerance);
}

std::string spec_error(const std::string& text)
{
    try {
        instance_from_text(text);
    }
    catch (const SpecError& e) {
        return e.what();
    }
    return "no error";
}

} // namespace

TEST(SpecRoundTrip, EveryCatalogInstance)
{
    for (std::uint64_t seed : {kDefaultSeed, std::uint64_t{1}}) {
        for (const auto& e : default_catalog(seed).entries) {
            const std::string text = instance_json(e.instance).dump(2);
            expect_same(instance_from_text(text).instance, e.instance);
        }
    }
}

TEST(SpecRoundTrip, SuiteDocument)
{
    const Catalog cat = default_catalog(3);
    const Catalog back = suite_from_text(suite_json(cat).dump());
    EXPECT_EQ(back.seed, 3u);
    ASSERT_EQ(back.entries.size(), cat.entries.size());
    for (std::size_t i = 0; i < cat.entries.size(); ++i) {
        EXPECT_EQ(back.entries[i].law, cat.entries[i].law);
        expect_same(back.entries[i].instance, cat.entries[i].instance);
    }
    // Serialization is a function of the descriptor alone.
    EXPECT_EQ(suite_json(back).dump(), suite_json(cat).dump());
}

TEST(SpecRoundTrip, HandWrittenGroups)
{
    const auto fp = instance_from_text(R"({
      "group": {"kind": "free_product", "left": {"kind": "free", "rank": 2}, "right": {"kind": "free_abelian", "rank": 1}},
      "endo": {"kind": "words", "images": [[[0, "ab"]], [[0, "a"], [1, [2]]], [[1, [3]]]]}
    })");
    const Group& G = fp.instance.alpha.group();
    EXPECT_TRUE(G.is<FreeProductKind>());
    EXPECT_EQ(instance_from_text(instance_json(fp.instance).dump()).instance.alpha, fp.instance.alpha);

    const auto q = instance_from_text(R"({
      "group": {"kind": "abelian_quotient", "ambient": {"kind": "free_abelian", "rank": 2}, "relations": [[0, 4]]},
      "endo": {"kind": "matrix", "rows": [[2, 0], [0, 3]]}
    })");
    EXPECT_EQ(q.instance.alpha.group(), abelian_quotient(free_abelian(2), IntMatrix{{0}, {4}}));

    const auto s = instance_from_text(R"({
      "group": {"kind": "semidirect", "action": [[[2, 1], [1, 1]]], "length_mode": "bfs", "bfs_radius": 9},
      "endo": {"kind": "identity"},
      "options": {"seed": 11}
    })");
    EXPECT_EQ(s.instance.alpha.group().bfs_radius(), 9u);
    EXPECT_EQ(s.seed, 11u);
    const Json back = group_json(s.instance.alpha.group());
    EXPECT_EQ(back["bfs_radius"], 9);
    EXPECT_FALSE(group_json(semidirect(2, {IntMatrix{{2, 1}, {1, 1}}})).contains("length_mode"));
}

TEST(SpecRoundTrip, LargeIntegersStayExact)
{
    const auto h = instance_from_text(R"({
      "group": {"kind": "heisenberg"},
      "endo": {"kind": "heisenberg", "lambda": "123456789012345678901234567890", "gamma": -2}
    })");
    const auto* r = h.instance.alpha.as<HeisenbergEndo>();
    ASSERT_NE(r, nullptr);
    EXPECT_EQ(r->lambda, parse_bigint("123456789012345678901234567890"));
    EXPECT_EQ(endo_json(h.instance.alpha)["lambda"], "123456789012345678901234567890");
}

TEST(SpecRoundTrip, OptionsLengthModeOverridesTheGroup)
{
    const auto spec = instance_from_text(R"({
      "group": {"kind": "free_abelian", "rank": 2},
      "endo": {"kind": "identity"},
      "options": {"length_mode": "bfs", "radius": 7, "max_m": 5}
    })");
    EXPECT_EQ(spec.instance.alpha.group().length_mode(), LengthMode::BfsOracle);
    EXPECT_EQ(spec.instance.alpha.group().bfs_radius(), 7u);
    EXPECT_EQ(spec.instance.options.max_m, 5u);
}

TEST(SpecElements, LiteralsPerKind)
{
    const Group F2 = free_group(2);
    const Json w = "abBA";
    EXPECT_EQ(parse_element({w, ""}, F2), F2.identity());
    const Json w2 = "aab";
    EXPECT_EQ(element_json(parse_element({w2, ""}, F2), F2), "aab");
    const Json letters = Json::array({1, -2});
    EXPECT_EQ(to_string(parse_element({letters, ""}, F2)), "aB");

    const Group H = heisenberg();
    const Json t = Json::array({1, 2, 3});
    EXPECT_EQ(parse_element({t, ""}, H), Element(heis(1, 2, 3)));

    const Group P = direct_product(F2, free_abelian(1));
    const Json pair = Json::array({"ab", Json::array({4})});
    EXPECT_EQ(element_json(parse_element({pair, ""}, P), P), pair);

    const Group Q = abelian_quotient(free_abelian(2), IntMatrix{{0}, {4}});
    const Json v = Json::array({1, 7});
    EXPECT_EQ(element_json(parse_element({v, ""}, Q), Q), Json::array({1, 3}));
}

TEST(SpecErrors, PointToTheOffendingValue)
{
    EXPECT_EQ(spec_error(R"({"group": {"kind": "free_abelian", "rank": 2}, "endo": {"kind": "matrix", "rows": [[1, 0], [0, "x"]]}})"),
              "/endo/rows/1/1: malformed integer string");
    EXPECT_EQ(spec_error(R"({"group": {"kind": "free_abelian", "rank": 2}, "endo": {"kind": "matrix", "rows": [[1, 0]]}})"),
              "/endo/rows: expected 2 rows, got 1");
    EXPECT_EQ(spec_error(R"({"group": {"kind": "torus"}, "endo": {"kind": "identity"}})"),
              "/group/kind: unknown group kind \"torus\"");
    EXPECT_EQ(spec_error(R"({"group": {"kind": "free", "rank": 2, "colour": 1}, "endo": {"kind": "identity"}})"),
              "/group/colour: unknown key");
    EXPECT_EQ(spec_error(R"({"group": {"kind": "free", "rank": 2}})"), "/: missing \"endo\"");
    EXPECT_EQ(spec_error(R"({"group": {"kind": "free", "rank": 2}, "endo": {"kind": "words", "images": ["ab", "c"]}})"),
              "/endo/images/1: letter c exceeds rank 2");
    EXPECT_EQ(spec_error(R"({"group": {"kind": "semidirect", "action": [[[2, 0], [0, 1]]]}, "endo": {"kind": "identity"}})"),
              "/group: semidirect: action matrix 0 is not unimodular");
    // Well-formed JSON, invalid endomorphism: the message keeps the library's reason.
    EXPECT_NE(spec_error(R"({"group": {"kind": "abelian_quotient", "ambient": {"kind": "free_abelian", "rank": 2}, "relations": [[0, 4]]},
                             "endo": {"kind": "matrix", "rows": [[1, 0], [1, 1]]}})")
                  .find("/endo: matrix endomorphism is not well defined"),
              std::string::npos);
}

TEST(SpecErrors, SyntaxErrorsCarryLineAndColumn)
{
    const std::string msg = spec_error("{\n  \"group\": {\"kind\": \"free\",,\n}");
    EXPECT_EQ(msg.rfind("spec:2:", 0), 0u) << msg;
}

TEST(SpecErrors, SuiteLawIds)
{
    try {
        suite_from_text(R"({"kind": "suite", "entries": [{"law": "thm0-none", "instance": {"group": {"kind": "free", "rank": 1}, "endo": {"kind": "identity"}}}]})");
        FAIL();
    }
    catch (const SpecError& e) {
        EXPECT_EQ(std::string(e.what()), "/entries/0/law: unknown law id \"thm0-none\"");
    }
    EXPECT_TRUE(suite_from_text(R"({"kind": "suite", "entries": []})").entries.empty());
}
