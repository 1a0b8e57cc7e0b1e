#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <endogrow/cli.hpp>

using namespace endogrow;

namespace {

const std::string kSpecs = ENDOGROW_SAMPLES_DIR "/specs/";

CommandResult run(std::vector<std::string> args) { return run_cli(args); }

std::vector<std::vector<std::string>> tsv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line) && !line.empty()) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, '\t')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

std::filesystem::path temp_file(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / ("endogrow_test_" + name);
    std::ofstream(path) << text;
    return path;
}

int run_binary(const std::string& args, const std::string& env = "")
{
    const int status =
        std::system((env + " " + std::string(ENDOGROW_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(CliEstimate, RotationFinalLineReachesSqrtTwo)
{
    const auto r = run({"estimate", kSpecs + "rotation_z2.json"});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = tsv_rows(r.out);
    ASSERT_EQ(rows.size(), 21u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"m", "K_m", "root", "inf_bound", "ratio_estimate"}));
    EXPECT_NEAR(std::stod(rows.back()[3]), 1.414214, 1e-6);
    // K_m = 2^{m/2} at even m; the entries are exact integers.
    EXPECT_EQ(rows.back()[1], "1024");
}

TEST(CliEstimate, IdentityAndFibonacci)
{
    const auto id = tsv_rows(run({"estimate", kSpecs + "identity_z2.json"}).out);
    EXPECT_EQ(id.back()[4], "1");
    EXPECT_EQ(id.back()[3], "1");

    const auto r = run({"estimate", kSpecs + "fibonacci_f2.json", "--format", "json"});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const Json j = Json::parse(r.out);
    // Orbit-length oracle: |alpha^m(a)| follows the Fibonacci recurrence.
    BigInt f0 = 1, f1 = 2;
    for (const auto& row : j["table"]) {
        EXPECT_EQ(parse_bigint(row["K_m"].dump()), f1) << row["m"];
        const BigInt f2 = f0 + f1;
        f0 = f1;
        f1 = f2;
    }
    EXPECT_NEAR(j["ratio_estimate"].get<double>(), (1 + std::sqrt(5.0)) / 2, 1e-3);
    EXPECT_EQ(j["status"], "converged");
}

TEST(CliEstimate, FlagsOverrideTheSpec)
{
    const auto rows = tsv_rows(run({"estimate", kSpecs + "rank_one.json", "--max-m", "5"}).out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows.back()[1], "243");
    // The BFS metric on Z with the spec's radius 12 agrees with the exact one up to m = 2.
    const auto bfs = run({"estimate", kSpecs + "rank_one.json", "--length-mode", "bfs"});
    EXPECT_EQ(bfs.exit_code, 0);
    EXPECT_EQ(tsv_rows(bfs.out).size(), 3u);
    EXPECT_NE(bfs.err.find("truncated"), std::string::npos);
}

TEST(CliSpectral, Examples)
{
    auto gr = [](const std::string& spec) {
        const auto r = run({"spectral", kSpecs + spec, "--format", "json"});
        EXPECT_EQ(r.exit_code, 0) << r.err;
        return Json::parse(r.out)["gr"].get<double>();
    };
    EXPECT_NEAR(gr("rotation_z2.json"), std::sqrt(2.0), 1e-12);
    EXPECT_DOUBLE_EQ(gr("identity_z2.json"), 1);
    EXPECT_DOUBLE_EQ(gr("rank_one.json"), 3);
    // Free part multiplied by 2; the Z/4 part only permutes residues.
    EXPECT_DOUBLE_EQ(gr("torsion_quotient.json"), 2);
    EXPECT_EQ(run({"spectral", kSpecs + "fibonacci_f2.json"}).exit_code, kExitInputError);
}

TEST(CliBall, CountsMatchClosedForms)
{
    const auto z2 = tsv_rows(run({"ball", kSpecs + "identity_z2.json", "--radius", "6"}).out);
    ASSERT_EQ(z2.size(), 8u);
    for (std::size_t n = 0; n <= 6; ++n) {
        EXPECT_EQ(std::stoul(z2[n + 1][1]), 2 * n * n + 2 * n + 1);
    }
    const auto f2 = tsv_rows(run({"ball", kSpecs + "fibonacci_f2.json", "--radius", "5"}).out);
    std::size_t sphere = 4, total = 1;
    for (std::size_t n = 1; n <= 5; ++n) {
        total += sphere;
        sphere *= 3;
        EXPECT_EQ(std::stoul(f2[n + 1][1]), total);
    }
}

TEST(CliBall, ElementQueries)
{
    const auto r = run({"ball", kSpecs + "heisenberg_phi22.json", "--radius", "6", "--element", "[0,4,0]",
                        "--element", "[0,0,0]", "--format", "json"});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["lengths"][0]["length"], 4);
    EXPECT_EQ(j["lengths"][1]["length"], 0);
    EXPECT_EQ(run({"ball", kSpecs + "heisenberg_phi22.json", "--element", "[1,2]"}).exit_code, kExitInputError);
}

TEST(CliDistortion, CatMap)
{
    const auto r = run({"distortion", kSpecs + "cat_map.json", "--radius", "10", "--max-m", "12", "--format", "json"});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_NEAR(j["K"].get<double>(), (3 + std::sqrt(5.0)) / 2, 1e-9);
    EXPECT_NEAR(j["sqrt_K"].get<double>(), (1 + std::sqrt(5.0)) / 2, 1e-9);
    ASSERT_EQ(j["profile"].size(), 11u);
    for (std::size_t n = 1; n < j["profile"].size(); ++n) {
        EXPECT_LE(j["profile"][n - 1]["rho"].get<long long>(), j["profile"][n]["rho"].get<long long>());
    }
    // K_m = F_{2m+2} for this action.
    EXPECT_EQ(j["table"][11]["K_m"], 121393);
    EXPECT_EQ(run({"distortion", kSpecs + "rank_one.json"}).exit_code, kExitInputError);
}

TEST(CliVerify, DefaultSuitePasses)
{
    const auto r = run({"verify"});
    EXPECT_EQ(r.exit_code, 0) << r.out;
    EXPECT_NE(r.out.find("0 fail, 0 inapplicable (seed " + std::to_string(kDefaultSeed) + ")"), std::string::npos);
}

TEST(CliVerify, SuiteFiles)
{
    EXPECT_EQ(run({"verify", "--suite", kSpecs + "suite_empty.json"}).exit_code, 0);
    const auto small = run({"verify", "--suite", kSpecs + "suite_small.json", "--format", "json"});
    EXPECT_EQ(small.exit_code, 0);
    EXPECT_EQ(Json::parse(small.out)["summary"]["pass"], 3);

    const auto bad = temp_file("bad_law.json", R"({"kind": "suite", "entries": [{"law": "thm7.7-none",
        "instance": {"group": {"kind": "free", "rank": 1}, "endo": {"kind": "identity"}}}]})");
    const auto r = run({"verify", "--suite", bad.string()});
    EXPECT_EQ(r.exit_code, kExitInputError);
    EXPECT_NE(r.err.find("/entries/0/law"), std::string::npos);
    EXPECT_EQ(run({"verify", "--law", "thm7.7-none"}).exit_code, kExitInputError);

    const auto failing = temp_file("failing.json", R"({"kind": "suite", "entries": [{"law": "thm4.1-abelian",
        "instance": {"group": {"kind": "free_abelian", "rank": 2}, "endo": {"kind": "matrix", "rows": [[1, 1], [0, 1]]},
                     "options": {"max_m": 6, "tolerance": 1e-12}}}]})");
    EXPECT_EQ(run({"verify", "--suite", failing.string()}).exit_code, kExitLawFailure);
}

TEST(CliOutput, Deterministic)
{
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"estimate", kSpecs + "fibonacci_f2.json", "--format", "json"},
             {"verify", "--seed", "5", "--law", "thm4.1-abelian", "--law", "thm2.2.3-power"},
             {"ball", kSpecs + "klein_polycyclic.json", "--radius", "7"}}) {
        const auto a = run(args);
        const auto b = run(args);
        EXPECT_EQ(a.exit_code, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(CliOutput, WritesFilesAtomically)
{
    const auto path = std::filesystem::temp_directory_path() / "endogrow_test_out.tsv";
    std::filesystem::remove(path);
    EXPECT_EQ(run_binary("-o " + path.string() + " estimate " + kSpecs + "rank_one.json"), 0);
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(text.str(), run({"estimate", kSpecs + "rank_one.json"}).out);
    EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST(CliExitCodes, Binary)
{
    EXPECT_EQ(run_binary("estimate " + kSpecs + "identity_z2.json"), 0);
    EXPECT_EQ(run_binary("estimate /nonexistent.json"), 2);
    EXPECT_EQ(run_binary("estimate " + kSpecs + "identity_z2.json --format xml"), 2);
    EXPECT_EQ(run_binary("frobnicate"), 2);
    EXPECT_EQ(run_binary("ball " + kSpecs + "identity_z2.json", "ENDOGROW_BUDGET=zero"), 2);
    EXPECT_EQ(run_binary("ball " + kSpecs + "identity_z2.json", "ENDOGROW_BUDGET=100"), 0);
    // Even K_1 = 3 exceeds a BFS radius of 1: nothing can be computed.
    const auto tiny = temp_file("tiny.json", R"({"group": {"kind": "free_abelian", "rank": 1},
        "endo": {"kind": "matrix", "rows": [[3]]}, "options": {"length_mode": "bfs", "radius": 1}})");
    EXPECT_EQ(run_binary("estimate " + tiny.string()), 3);
    EXPECT_EQ(run_binary("verify --suite " + kSpecs + "suite_empty.json"), 0);
}
