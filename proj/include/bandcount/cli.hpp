/**
 * @file cli.hpp
 * @brief The band-counter command line: subcommands over the library, CSV and
 *        JSON on the output stream, optional SVG plots.
 *
 * Exit codes: 0 success, 1 solver error (or an oracle mismatch), 2 usage error.
 */
#pragma once

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "annulus.hpp"
#include "halfline.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "predictions.hpp"
#include "scan.hpp"
#include "strip.hpp"

namespace bandcount::cli {

struct Options {
    double L = 1.0;
    double R = 0.5;
    double h = 0.01;
    std::string bc = "dn";
    std::string out = "csv";
    std::string plot;
    std::string output;
    std::string geometry = "strip";
    std::string kind = "neu";
    std::string ratios = "-2.5,-3,-3.5,-4";
    std::string formula = "strip-dn";
    std::optional<long> m_min, m_max;
    long m = 0;
    long k = 0;
    int levels = 5;
    int cases = 100;
    double xi = -1.0;
    unsigned jobs = 0;
    std::uint64_t seed = 1;
};

class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline Variant parse_bc(std::string const& s) {
    if (s == "dn") return Variant::MixedDN;
    if (s == "nn") return Variant::PureNN;
    throw usage_error("--bc: expected dn or nn, got '" + s + "'");
}

inline Geometry parse_geometry(Options const& o) {
    if (o.geometry == "strip") return Strip{o.L};
    if (o.geometry == "annulus") return Annulus{o.R};
    throw usage_error("--geometry: expected strip or annulus, got '" + o.geometry + "'");
}

inline std::vector<double> parse_list(std::string const& s, std::string const& flag) {
    std::vector<double> out;
    for (auto const& f : split(s, ',')) {
        try {
            out.push_back(parse_real(f));
        } catch (std::exception const&) {
            throw usage_error(flag + ": '" + f + "' is not a number");
        }
    }
    if (out.empty()) throw usage_error(flag + ": empty list");
    return out;
}

inline void write_plot(std::string const& path, Plot const& plot) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw usage_error("--plot: cannot open '" + path + "'");
    write_svg(f, plot);
}

inline void emit_count(std::ostream& os, Options const& o, CountResult const& r) {
    if (o.out == "json") {
        auto j = summary_json(r);
        json rows = json::array();
        for (auto const& [m, s] : r.ground_values)
            rows.push_back({{"m", m},
                            {"lambda0", real_json(s.lambda0)},
                            {"below", s.below},
                            {"ambiguous", s.ambiguous},
                            {"splitting", real_json(s.splitting)},
                            {"lambda1", real_json(s.lambda1)}});
        j["ground_values"] = rows;
        os << j.dump(2) << '\n';
    } else {
        write_count_csv(os, r);
    }
    write_plot(o.plot, band_plot(r));
}

inline void cmd_count(std::ostream& os, Options const& o, bool annulus) {
    ScanOptions so;
    so.jobs = o.jobs;
    auto const v = parse_bc(o.bc);
    emit_count(os, o, annulus ? count_annulus(o.R, o.h, v, so) : count_strip(o.L, o.h, v, so));
}

inline void cmd_band_scan(std::ostream& os, Options const& o) {
    auto const g = parse_geometry(o);
    auto const v = parse_bc(o.bc);
    auto range = is_annulus(g) ? annulus_momentum_range(o.R, o.h) : strip_momentum_range(o.L, o.h);
    if (o.m_min) range.first = *o.m_min;
    if (o.m_max) range.second = *o.m_max;
    if (range.second < range.first) throw usage_error("--m-max: below --m-min");
    auto const rows = parallel_map<std::pair<RichardsonResult, RichardsonResult>>(
        range.first, range.second, o.jobs, [&](long m) {
            auto const p = make_fiber_problem(g, m, o.h, v);
            return std::pair{richardson_eigenvalue(p, 0), richardson_eigenvalue(p, 1)};
        });
    os << "m,lambda0,lambda1,lambda0_over_h,lambda1_over_h,error0,error1\n";
    for (auto const& [m, r] : rows)
        os << m << ',' << format_real(r.first.value) << ',' << format_real(r.second.value) << ','
           << format_real(r.first.value / o.h) << ',' << format_real(r.second.value / o.h) << ','
           << format_real(r.first.error_estimate) << ',' << format_real(r.second.error_estimate) << '\n';
    json s = {{"schema_version", kSchemaVersion}, {"geometry", to_json(g)}, {"variant", to_string(v)},
              {"h", o.h}, {"m_min", range.first}, {"m_max", range.second}};
    os << "# summary " << s.dump() << '\n';
    if (!o.plot.empty()) {
        CountResult cr;
        cr.h = o.h, cr.geometry = g, cr.variant = v;
        for (auto const& [m, r] : rows) cr.ground_values[m].lambda0 = r.first.value;
        write_plot(o.plot, band_plot(cr));
    }
}

inline void cmd_halfline(std::ostream& os, Options const& o) {
    BoundaryCondition kind;
    if (o.kind == "neu")
        kind = BoundaryCondition::Neumann;
    else if (o.kind == "dir")
        kind = BoundaryCondition::Dirichlet;
    else
        throw usage_error("--kind: expected neu or dir, got '" + o.kind + "'");
    auto const ratios = parse_list(o.ratios, "--ratios");
    for (double q : ratios)
        if (!(q <= -2)) throw usage_error("--ratios: every ratio must be <= -2");
    auto const rows = splitting_sweep(kind, ratios, o.h);
    os << "ratio,mu0,splitting,predicted,rel_error\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        os << format_real(ratios[i]) << ',' << format_real(rows[i].mu0) << ',' << format_real(rows[i].splitting) << ','
           << format_real(rows[i].predicted_splitting) << ',' << format_real(rows[i].relative_error) << '\n';
    json s = {{"schema_version", kSchemaVersion}, {"kind", o.kind}, {"h", o.h}};
    os << "# summary " << s.dump() << '\n';
}

inline void cmd_convergence(std::ostream& os, Options const& o) {
    auto const g = parse_geometry(o);
    auto const v = parse_bc(o.bc);
    if (o.levels < 2) throw usage_error("--levels: need at least 2");
    auto const p = make_fiber_problem(g, o.m, o.h, v);
    Grid grid = default_grid(p);
    os << "n,spacing,lambda,delta,delta_ratio,richardson,error_estimate\n";
    double prev = std::numeric_limits<double>::quiet_NaN(), prev_delta = prev;
    for (int l = 0; l < o.levels; ++l, grid = grid.refined()) {
        double const lam = eigenvalue(discretize<double>(p, grid), o.k);
        double const delta = lam - prev;
        double rich = std::numeric_limits<double>::quiet_NaN(), err = rich;
        if (l > 0) rich = (4 * lam - prev) / 3, err = std::abs(delta) / 3;
        os << grid.n << ',' << format_real(grid.spacing()) << ',' << format_real(lam) << ',' << format_real(delta)
           << ',' << format_real(prev_delta / delta) << ',' << format_real(rich) << ',' << format_real(err) << '\n';
        prev = lam;
        prev_delta = delta;
    }
    json s = {{"schema_version", kSchemaVersion}, {"problem", to_json(p)}, {"k", o.k}};
    os << "# summary " << s.dump() << '\n';
}

/// Returns the number of mismatches outside the ambiguity bands.
inline long cmd_oracle(std::ostream& os, Options const& o) {
    if (o.cases < 1) throw usage_error("--cases: must be positive");
    std::mt19937_64 rng(o.seed);
    std::vector<OracleCase> cases;
    for (int i = 0; i < o.cases; ++i) cases.push_back(random_oracle_case(rng));
    auto const res = parallel_map<OracleComparison>(0, o.cases - 1, o.jobs, [&](long i) {
        return compare_with_shooting(cases[static_cast<std::size_t>(i)]);
    });
    os << "case,geometry,bc,h,m,threshold,sturm,shooting,ambiguous,agree,lambda0,lambda0_shooting\n";
    long mismatches = 0, ambiguous = 0, lambda_disagree = 0;
    for (auto const& [i, r] : res) {
        auto const& p = cases[static_cast<std::size_t>(i)].problem;
        bool const agree = r.sturm == r.shooting;
        if (r.ambiguous)
            ++ambiguous;
        else if (!agree)
            ++mismatches;
        if (!r.lambda0_agrees) ++lambda_disagree;
        os << i << ',' << (p.potential == PotentialKind::AnnulusRadial ? "annulus" : "strip") << ','
           << bc_letter(p.bc.left) << bc_letter(p.bc.right) << ',' << format_real(p.h) << ',' << p.m << ','
           << format_real(cases[static_cast<std::size_t>(i)].threshold) << ',' << r.sturm << ',' << r.shooting << ','
           << (r.ambiguous ? 1 : 0) << ',' << (agree ? 1 : 0) << ',' << format_real(r.lambda0) << ','
           << format_real(r.lambda0_shooting) << '\n';
    }
    json s = {{"schema_version", kSchemaVersion}, {"seed", o.seed},           {"cases", o.cases},
              {"ambiguous", ambiguous},         {"mismatches", mismatches}, {"lambda0_disagreements", lambda_disagree}};
    os << "# summary " << s.dump() << '\n';
    return mismatches + lambda_disagree;
}

inline void cmd_predict(std::ostream& os, Options const& o) {
    FormulaId f{};
    bool found = false;
    for (auto c : {FormulaId::StripDN, FormulaId::StripNN, FormulaId::AnnulusDN, FormulaId::AnnulusNN,
                   FormulaId::HalflineNeuSplit, FormulaId::HalflineDirSplit})
        if (to_string(c) == o.formula) f = c, found = true;
    if (!found) throw usage_error("--formula: unknown formula '" + o.formula + "'");
    bool const annulus = f == FormulaId::AnnulusDN || f == FormulaId::AnnulusNN;
    Geometry const g = annulus ? Geometry{Annulus{o.R}} : Geometry{Strip{o.L}};
    auto const r = predict(f, g, o.h, o.xi);
    json j = {{"schema_version", kSchemaVersion},
              {"formula", to_string(f)},
              {"geometry", to_json(g)},
              {"h", o.h},
              {"predicted", r.predicted_count},
              {"window", {r.window.lo, r.window.hi}}};
    if (r.transition) j["transition"] = *r.transition;
    if (annulus) j["R_tilde_sq"] = transition_radius_sq(o.R);
    os << j.dump(2) << '\n';
}

/// Parses argv and runs one subcommand, writing tables to `out` (or --output)
/// and diagnostics to `err`.
inline int run(int argc, char const* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Options o;
    CLI::App app{"Band functions and eigenvalue counts below the lowest Landau level", "band-counter"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto add_common = [&](CLI::App* s) {
        s->add_option("--output", o.output, "Write tables to this file instead of stdout");
        s->add_option("--jobs", o.jobs, "Worker threads (0 = hardware parallelism)");
    };
    auto add_h = [&](CLI::App* s) { s->add_option("--h", o.h, "Semiclassical parameter")->check(CLI::PositiveNumber); };

    auto* strip = app.add_subcommand("strip-count", "Count m with lambda0 < h on the strip");
    strip->add_option("--L", o.L, "Strip height")->check(CLI::PositiveNumber);
    add_h(strip);
    strip->add_option("--bc", o.bc, "dn or nn");
    strip->add_option("--out", o.out, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    strip->add_option("--plot", o.plot, "SVG of lambda0/h");
    add_common(strip);

    auto* annulus = app.add_subcommand("annulus-count", "Count m with lambda0 < h on the annulus");
    annulus->add_option("--R", o.R, "Inner radius in (0,1)")->check(CLI::Range(0.0, 1.0));
    add_h(annulus);
    annulus->add_option("--bc", o.bc, "dn or nn");
    annulus->add_option("--out", o.out, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    annulus->add_option("--plot", o.plot, "SVG of lambda0/h against 2mh");
    add_common(annulus);

    auto* scan = app.add_subcommand("band-scan", "lambda0 and lambda1 against m");
    scan->add_option("--geometry", o.geometry, "strip or annulus");
    scan->add_option("--L", o.L, "Strip height")->check(CLI::PositiveNumber);
    scan->add_option("--R", o.R, "Inner radius")->check(CLI::Range(0.0, 1.0));
    add_h(scan);
    scan->add_option("--bc", o.bc, "dn or nn");
    scan->add_option("--m-min", o.m_min, "First momentum (default: rough window)");
    scan->add_option("--m-max", o.m_max, "Last momentum (default: rough window)");
    scan->add_option("--plot", o.plot, "SVG of lambda0/h");
    add_common(scan);

    auto* half = app.add_subcommand("halfline-sweep", "Half-line ground levels against the splitting law");
    half->add_option("--kind", o.kind, "neu or dir");
    half->add_option("--ratios", o.ratios, "Comma-separated xi/sqrt(h) values, each <= -2");
    add_h(half);
    add_common(half);

    auto* conv = app.add_subcommand("convergence", "Grid-refinement study of one eigenvalue");
    conv->add_option("--geometry", o.geometry, "strip or annulus");
    conv->add_option("--L", o.L, "Strip height")->check(CLI::PositiveNumber);
    conv->add_option("--R", o.R, "Inner radius")->check(CLI::Range(0.0, 1.0));
    add_h(conv);
    conv->add_option("--m", o.m, "Momentum");
    conv->add_option("--k", o.k, "Eigenvalue index")->check(CLI::NonNegativeNumber);
    conv->add_option("--bc", o.bc, "dn or nn");
    conv->add_option("--levels", o.levels, "Number of grids, each halving the last");
    add_common(conv);

    auto* oracle = app.add_subcommand("oracle-check", "Sturm counts against Prufer shooting on random problems");
    oracle->add_option("--cases", o.cases, "Number of random problems");
    oracle->add_option("--seed", o.seed, "Random seed");
    add_common(oracle);

    auto* pred = app.add_subcommand("predict", "Closed-form leading terms");
    pred->add_option("--formula", o.formula,
                     "strip-dn, strip-nn, annulus-dn, annulus-nn, halfline-neu or halfline-dir");
    pred->add_option("--L", o.L, "Strip height")->check(CLI::PositiveNumber);
    pred->add_option("--R", o.R, "Inner radius")->check(CLI::Range(0.0, 1.0));
    add_h(pred);
    pred->add_option("--xi", o.xi, "Well shift for the splitting laws");
    add_common(pred);

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const&) {
        out << app.help();
        return 0;
    } catch (CLI::CallForAllHelp const&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (CLI::ParseError const& e) {
        err << "band-counter: " << e.what() << '\n';
        return 2;
    }

    std::ostringstream buffer;
    try {
        long failures = 0;
        if (*strip)
            cmd_count(buffer, o, false);
        else if (*annulus)
            cmd_count(buffer, o, true);
        else if (*scan)
            cmd_band_scan(buffer, o);
        else if (*half)
            cmd_halfline(buffer, o);
        else if (*conv)
            cmd_convergence(buffer, o);
        else if (*oracle)
            failures = cmd_oracle(buffer, o);
        else if (*pred)
            cmd_predict(buffer, o);
        if (o.output.empty()) {
            out << buffer.str();
        } else {
            std::ofstream f(o.output);
            if (!f) throw usage_error("--output: cannot open '" + o.output + "'");
            f << buffer.str();
        }
        if (failures > 0) {
            err << "band-counter: " << failures << " oracle disagreements\n";
            return 1;
        }
        return 0;
    } catch (usage_error const& e) {
        err << "band-counter: " << e.what() << '\n';
        return 2;
    } catch (std::invalid_argument const& e) {
        err << "band-counter: invalid input: " << e.what() << '\n';
        return 2;
    } catch (std::exception const& e) {
        err << "band-counter: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace bandcount::cli
