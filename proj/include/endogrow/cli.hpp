#pragma once

// Command-line front end. Each command renders its whole output into a
// string; run_cli maps errors to exit codes:
//   0 success, 1 law failure, 2 input error, 3 computation failure.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>

#include "growth.hpp"
#include "oracle.hpp"
#include "spec_io.hpp"

namespace endogrow {

enum ExitCode { kExitOk = 0, kExitLawFailure = 1, kExitInputError = 2, kExitComputationFailure = 3 };

struct CommandResult {
    int exit_code = kExitOk;
    std::string out;
    std::string err;
};

struct EstimateFlags {
    std::optional<std::size_t> max_m;
    std::optional<LengthMode> length_mode;
    std::string format = "tsv";
};

struct BallFlags {
    std::optional<std::size_t> radius;
    std::vector<std::string> elements;  ///< JSON element literals to look up
    std::string format = "tsv";
};

struct DistortionFlags {
    std::optional<std::size_t> radius;
    std::optional<std::size_t> max_m;
    std::string format = "tsv";
};

struct VerifyFlags {
    std::string suite = "default";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> laws;  ///< restrict to these ids
    std::string format = "text";
};

namespace detail {

inline Json real_json(double x)
{
    if (std::isfinite(x)) {
        return x;
    }
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

/// ENDOGROW_BUDGET must be a positive integer when set.
inline void check_budget_env()
{
    if (const char* env = std::getenv("ENDOGROW_BUDGET")) {
        const std::string s = env;
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
            std::strtoull(env, nullptr, 10) == 0) {
            throw SpecError("ENDOGROW_BUDGET", "expected a positive integer, got \"" + s + "\"");
        }
    }
}

inline Endomorphism with_metric(const Endomorphism& alpha, LengthMode mode, std::size_t radius)
{
    return Endomorphism(alpha.group().with_length_mode(mode, mode == LengthMode::BfsOracle ? radius : 0),
                        alpha.rep());
}

inline std::string tsv_pairs(const std::vector<std::pair<std::string, std::string>>& rows)
{
    std::string out = "quantity\tvalue\n";
    for (const auto& [k, v] : rows) {
        out += k + "\t" + v + "\n";
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------- commands

inline CommandResult cmd_estimate(const InstanceSpec& spec, const EstimateFlags& flags)
{
    Endomorphism alpha = spec.instance.alpha;
    if (flags.length_mode) {
        alpha = detail::with_metric(alpha, *flags.length_mode, spec.instance.options.radius);
    }
    const std::size_t M = flags.max_m.value_or(spec.instance.options.max_m);
    if (M == 0) {
        throw SpecError("--max-m", "must be positive");
    }
    const GrowthEstimate e = km_table(alpha, M);
    CommandResult r;
    if (e.size() == 0) {
        r.exit_code = kExitComputationFailure;
        r.err = "no K_m could be computed (status " + to_string(e.status) + ")\n";
        return r;
    }
    if (e.status == GrowthStatus::Truncated) {
        r.err = "table truncated at m = " + std::to_string(e.size()) + " of " + std::to_string(M) + "\n";
    }
    if (flags.format == "json") {
        Json table = Json::array();
        double inf = 0;
        for (std::size_t m = 1; m <= e.size(); ++m) {
            inf = m == 1 ? e.roots[0] : std::min(inf, e.roots[m - 1]);
            table.push_back({{"m", m},
                             {"K_m", detail::integer_json(e.K[m - 1])},
                             {"root", detail::real_json(e.roots[m - 1])},
                             {"inf_bound", detail::real_json(inf)},
                             {"ratio_estimate", detail::real_json(detail::window_ratio(e.K, m))}});
        }
        Json out = {{"endomorphism", describe(alpha)},
                    {"metric", to_string(e.metric)},
                    {"status", to_string(e.status)},
                    {"requested_m", e.requested_m},
                    {"table", std::move(table)},
                    {"inf_bound", detail::real_json(e.inf_bound)},
                    {"ratio_estimate", detail::real_json(e.ratio_estimate)},
                    {"spread", detail::real_json(e.spread)}};
        r.out = out.dump(2) + "\n";
    }
    else {
        r.out = estimate_tsv(e);
    }
    return r;
}

inline CommandResult cmd_spectral(const InstanceSpec& spec, const std::string& format = "tsv")
{
    const Endomorphism& alpha = spec.instance.alpha;
    if (!alpha.group().is_abelian() || alpha.as<MatrixEndo>() == nullptr) {
        throw SpecError("/endo", "spectral needs a matrix endomorphism of an abelian group");
    }
    const double gr = gr_exact_abelian(alpha);
    CommandResult r;
    if (format == "json") {
        r.out = Json{{"endomorphism", describe(alpha)}, {"method", "exact_spectral"}, {"gr", gr}}.dump(2) + "\n";
    }
    else {
        r.out = detail::tsv_pairs({{"gr", format_real(gr)}});
    }
    return r;
}

inline CommandResult cmd_ball(const InstanceSpec& spec, const BallFlags& flags)
{
    const Group& G = spec.instance.alpha.group();
    const std::size_t R = flags.radius.value_or(spec.instance.options.radius);
    std::vector<Element> queries;
    for (std::size_t i = 0; i < flags.elements.size(); ++i) {
        const std::string where = "--element " + std::to_string(i);
        const Json j = parse_json_text(flags.elements[i], where);
        queries.push_back(parse_element({j, where}, G));
    }
    const BallCensus c = enumerate_ball(G, R);
    CommandResult r;
    if (!c.complete) {
        r.err = "budget exhausted: complete up to radius " + std::to_string(c.radius) + " of " + std::to_string(R) +
                "\n";
    }
    auto length = [&](const Element& g) -> std::optional<std::size_t> { return c.length_of(g); };
    if (flags.format == "json") {
        Json counts = Json::array();
        for (auto n : c.counts) {
            counts.push_back(n);
        }
        Json lengths = Json::array();
        for (const auto& g : queries) {
            const auto len = length(g);
            lengths.push_back({{"element", element_json(g, G)}, {"length", len ? Json(*len) : Json(nullptr)}});
        }
        r.out = Json{{"group", group_json(G)},
                     {"requested_radius", R},
                     {"radius", c.radius},
                     {"complete", c.complete},
                     {"counts", std::move(counts)},
                     {"lengths", std::move(lengths)}}
                    .dump(2) +
                "\n";
        return r;
    }
    r.out = census_tsv(c);
    if (!queries.empty()) {
        r.out += "\nelement\tlength\n";
        for (const auto& g : queries) {
            const auto len = length(g);
            r.out += element_json(g, G).dump() + "\t" + (len ? std::to_string(*len) : std::string(">") +
                                                                                           std::to_string(c.radius)) +
                     "\n";
        }
    }
    return r;
}

inline CommandResult cmd_distortion(const InstanceSpec& spec, const DistortionFlags& flags)
{
    const Group& G = spec.instance.alpha.group();
    if (G.as<SemidirectKind>() == nullptr) {
        throw SpecError("/group", "distortion needs a semidirect group");
    }
    const std::size_t R = flags.radius.value_or(spec.instance.options.radius);
    const std::size_t M = flags.max_m.value_or(spec.instance.options.max_m);
    if (M == 0) {
        throw SpecError("--max-m", "must be positive");
    }
    const DistortionProfile p = semidirect_base_distortion(G, R);
    const DistortionRate rate = distortion_rate(G, M);
    CommandResult r;
    if (p.truncated) {
        r.err = "budget exhausted: profile complete up to n = " + std::to_string(p.rho.size() - 1) + "\n";
    }
    auto root = [&](std::size_t n) {
        return n == 0 ? 0.0 : std::pow(p.rho[n].convert_to<double>(), 1.0 / static_cast<double>(n));
    };
    if (flags.format == "json") {
        Json profile = Json::array();
        for (std::size_t n = 0; n < p.rho.size(); ++n) {
            profile.push_back({{"n", n}, {"rho", detail::integer_json(p.rho[n])}, {"root", root(n)}});
        }
        Json table = Json::array();
        for (std::size_t m = 1; m <= rate.table.size(); ++m) {
            table.push_back({{"m", m},
                             {"K_m", detail::integer_json(rate.table.K[m - 1])},
                             {"root", rate.table.roots[m - 1]}});
        }
        r.out = Json{{"profile", std::move(profile)},
                     {"truncated", p.truncated},
                     {"table", std::move(table)},
                     {"K", rate.K},
                     {"sqrt_K", rate.sqrt_K}}
                    .dump(2) +
                "\n";
        return r;
    }
    r.out = "n\trho\troot\n";
    for (std::size_t n = 0; n < p.rho.size(); ++n) {
        r.out += std::to_string(n) + "\t" + p.rho[n].str() + "\t" + format_real(root(n)) + "\n";
    }
    r.out += "\n" + estimate_tsv(rate.table) + "\n" +
             detail::tsv_pairs({{"K", format_real(rate.K)}, {"sqrt_K", format_real(rate.sqrt_K)}});
    return r;
}

inline CommandResult cmd_verify(const VerifyFlags& flags)
{
    Catalog cat;
    if (flags.suite == "default") {
        cat = default_catalog(flags.seed.value_or(kDefaultSeed));
    }
    else {
        cat = suite_from_text(read_text_file(flags.suite), flags.suite);
        if (flags.seed) {
            cat.seed = *flags.seed;
        }
    }
    if (!flags.laws.empty()) {
        for (const auto& id : flags.laws) {
            try {
                law_index(id);
            }
            catch (const UnknownLaw&) {
                throw SpecError("--law", "unknown law id \"" + id + "\"");
            }
        }
        std::erase_if(cat.entries, [&](const CatalogEntry& e) {
            return std::find(flags.laws.begin(), flags.laws.end(), e.law) == flags.laws.end();
        });
    }
    const SuiteReport report = run_suite(cat);
    CommandResult r;
    r.out = flags.format == "json" ? report_json(report).dump(2) + "\n" : report_text(report);
    r.exit_code = report.ok() ? kExitOk : kExitLawFailure;
    return r;
}

// ------------------------------------------------------------------ driver

inline const std::map<std::string, LengthMode>& length_mode_names()
{
    static const std::map<std::string, LengthMode> names{
        {"exact", LengthMode::Exact}, {"quasi", LengthMode::Quasi}, {"bfs", LengthMode::BfsOracle}};
    return names;
}

/// Parses args (without the program name) and runs one command. When
/// output_path is set by --output, the caller writes out there instead of stdout.
inline CommandResult run_cli(const std::vector<std::string>& args, std::string* output_path = nullptr)
{
    CLI::App app{"Growth rates of group endomorphisms", "endogrow"};
    app.require_subcommand(1);
    std::string output;
    app.add_option("-o,--output", output, "Write the result to this file (atomically)");

    std::string spec_path;
    EstimateFlags est;
    std::optional<std::string> est_mode;
    auto* estimate = app.add_subcommand("estimate", "K_m table and growth-rate estimate");
    estimate->add_option("spec", spec_path, "Instance spec (JSON)")->required();
    estimate->add_option("--max-m", est.max_m, "Largest m")->check(CLI::PositiveNumber);
    estimate->add_option("--length-mode", est_mode, "exact | quasi | bfs")
        ->check(CLI::IsMember({"exact", "quasi", "bfs"}));
    estimate->add_option("--format", est.format)->check(CLI::IsMember({"tsv", "json"}));

    std::string spectral_format = "tsv";
    auto* spectral = app.add_subcommand("spectral", "Exact growth rate of an abelian endomorphism");
    spectral->add_option("spec", spec_path)->required();
    spectral->add_option("--format", spectral_format)->check(CLI::IsMember({"tsv", "json"}));

    BallFlags ball_flags;
    auto* ball = app.add_subcommand("ball", "Cayley ball census and exact word lengths");
    ball->add_option("spec", spec_path)->required();
    ball->add_option("--radius", ball_flags.radius, "Ball radius");
    ball->add_option("--element", ball_flags.elements, "Element literal (JSON) to look up; repeatable")
        ->allow_extra_args(false);
    ball->add_option("--format", ball_flags.format)->check(CLI::IsMember({"tsv", "json"}));

    DistortionFlags dist_flags;
    auto* distortion = app.add_subcommand("distortion", "Distortion of the base of a semidirect product");
    distortion->add_option("spec", spec_path)->required();
    distortion->add_option("--radius", dist_flags.radius, "Ball radius for rho(n)");
    distortion->add_option("--max-m", dist_flags.max_m, "Largest m for K_m")->check(CLI::PositiveNumber);
    distortion->add_option("--format", dist_flags.format)->check(CLI::IsMember({"tsv", "json"}));

    VerifyFlags verify_flags;
    auto* verify = app.add_subcommand("verify", "Run the law harness");
    verify->add_option("--suite", verify_flags.suite, "'default' or a suite spec file");
    verify->add_option("--seed", verify_flags.seed, "Catalog seed");
    verify->add_option("--law", verify_flags.laws, "Only this law id; repeatable");
    verify->add_option("--format", verify_flags.format)->check(CLI::IsMember({"text", "json"}));

    CommandResult result;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e) {
        std::ostringstream out, err;
        result.exit_code = app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
        result.out = out.str();
        result.err = err.str();
        return result;
    }
    if (output_path != nullptr) {
        *output_path = output;
    }

    try {
        detail::check_budget_env();
        auto load = [&] { return instance_from_text(read_text_file(spec_path), spec_path); };
        if (*estimate) {
            if (est_mode) {
                est.length_mode = length_mode_names().at(*est_mode);
            }
            result = cmd_estimate(load(), est);
        }
        else if (*spectral) {
            result = cmd_spectral(load(), spectral_format);
        }
        else if (*ball) {
            result = cmd_ball(load(), ball_flags);
        }
        else if (*distortion) {
            result = cmd_distortion(load(), dist_flags);
        }
        else {
            result = cmd_verify(verify_flags);
        }
    }
    catch (const InvalidArgument& e) {
        result = {kExitInputError, "", std::string("error: ") + e.what() + "\n"};
    }
    catch (const std::exception& e) {
        result = {kExitComputationFailure, "", std::string("computation failed: ") + e.what() + "\n"};
    }
    return result;
}

/// Writes text to path via a temporary file and a rename.
inline void write_atomically(const std::string& path, const std::string& text)
{
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << text;
        out.flush();
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, target);
}

} // namespace endogrow
