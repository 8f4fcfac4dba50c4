/**
 * @file io.hpp
 * @brief JSON records for problems and counts, the count CSV with its summary
 *        line, and a minimal SVG plot writer.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core_types.hpp"
#include "predictions.hpp"

namespace bandcount {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal that round-trips; non-finite values as inf, -inf, nan.
inline std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_real(std::string const& s) {
    std::size_t used = 0;
    double const v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("parse_real: trailing characters in '" + s + "'");
    return v;
}

// ---------------------------------------------------------------------------
// Enum names

inline std::string to_string(Variant v) {
    switch (v) {
        case Variant::MixedDN: return "dn";
        case Variant::PureNN: return "nn";
        case Variant::HalflineNeu: return "halfline-neu";
        case Variant::HalflineDir: return "halfline-dir";
        case Variant::FullLine: return "full-line";
    }
    return "?";
}

inline Variant variant_from_string(std::string const& s) {
    for (auto v : {Variant::MixedDN, Variant::PureNN, Variant::HalflineNeu, Variant::HalflineDir, Variant::FullLine})
        if (to_string(v) == s) return v;
    throw std::invalid_argument("unknown variant '" + s + "'");
}

inline std::string to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::StripHarmonic: return "strip-harmonic";
        case PotentialKind::AnnulusRadial: return "annulus-radial";
        case PotentialKind::HalflineHarmonic: return "halfline-harmonic";
        case PotentialKind::Custom: return "custom";
    }
    return "?";
}

inline PotentialKind potential_from_string(std::string const& s) {
    for (auto k : {PotentialKind::StripHarmonic, PotentialKind::AnnulusRadial, PotentialKind::HalflineHarmonic,
                   PotentialKind::Custom})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown potential '" + s + "'");
}

inline BoundaryCondition bc_from_letter(char c) {
    if (c == 'D') return BoundaryCondition::Dirichlet;
    if (c == 'N') return BoundaryCondition::Neumann;
    throw std::invalid_argument(std::string("unknown boundary condition '") + c + "'");
}

// ---------------------------------------------------------------------------
// JSON

/// Reals go through format_real so that infinite endpoints survive.
inline json real_json(double x) { return std::isfinite(x) ? json(x) : json(format_real(x)); }

inline double real_from(json const& j) { return j.is_string() ? parse_real(j.get<std::string>()) : j.get<double>(); }

inline json to_json(Geometry const& g) {
    if (auto const* s = std::get_if<Strip>(&g)) return {{"kind", "strip"}, {"L", s->L}};
    return {{"kind", "annulus"}, {"R", std::get<Annulus>(g).R}};
}

inline Geometry geometry_from_json(json const& j) {
    auto const kind = j.at("kind").get<std::string>();
    if (kind == "strip") return Strip{j.at("L").get<double>()};
    if (kind == "annulus") return Annulus{j.at("R").get<double>()};
    throw std::invalid_argument("unknown geometry '" + kind + "'");
}

inline json to_json(FiberProblem const& p) {
    return {{"a", real_json(p.a)},
            {"b", real_json(p.b)},
            {"h", p.h},
            {"m", p.m},
            {"potential", to_string(p.potential)},
            {"weight", p.weight == Weight::Radial ? "radial" : "flat"},
            {"bc", std::string{bc_letter(p.bc.left), bc_letter(p.bc.right)}},
            {"xi_free", p.xi_free},
            {"samples", p.samples.values}};
}

inline FiberProblem fiber_problem_from_json(json const& j) {
    FiberProblem p;
    p.a = real_from(j.at("a"));
    p.b = real_from(j.at("b"));
    p.h = j.at("h").get<double>();
    p.m = j.at("m").get<long>();
    p.potential = potential_from_string(j.at("potential").get<std::string>());
    p.weight = j.at("weight").get<std::string>() == "radial" ? Weight::Radial : Weight::Flat;
    auto const bc = j.at("bc").get<std::string>();
    if (bc.size() != 2) throw std::invalid_argument("bc must have two letters");
    p.bc = {bc_from_letter(bc[0]), bc_from_letter(bc[1])};
    p.xi_free = j.value("xi_free", 0.0);
    p.samples.values = j.value("samples", std::vector<double>{});
    validate(p);
    return p;
}

/// Summary of a count without the per-momentum table.
inline json summary_json(CountResult const& r) {
    return {{"schema_version", kSchemaVersion},
            {"geometry", to_json(r.geometry)},
            {"variant", to_string(r.variant)},
            {"h", r.h},
            {"m_min", r.m_min},
            {"m_max", r.m_max},
            {"count", r.count},
            {"predicted", r.predicted},
            {"ratio", r.ratio},
            {"ambiguous_m", r.ambiguous_m}};
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr char const* kCountHeader = "m,lambda0,lambda0_over_h,below,ambiguous,splitting,lambda1";

inline void write_count_csv(std::ostream& os, CountResult const& r) {
    os << kCountHeader << '\n';
    for (auto const& [m, s] : r.ground_values)
        os << m << ',' << format_real(s.lambda0) << ',' << format_real(s.lambda0 / r.h) << ',' << (s.below ? 1 : 0)
           << ',' << (s.ambiguous ? 1 : 0) << ',' << format_real(s.splitting) << ',' << format_real(s.lambda1) << '\n';
    os << "# summary " << summary_json(r).dump() << '\n';
}

inline std::vector<std::string> split(std::string const& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

/// Inverse of write_count_csv. Columns beyond the known ones are ignored.
inline CountResult read_count_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("count CSV: empty input");
    auto const header = split(line, ',');
    auto const known = split(kCountHeader, ',');
    if (header.size() < 5 || !std::equal(header.begin(), header.begin() + 5, known.begin()))
        throw std::invalid_argument("count CSV: unexpected header");
    CountResult r;
    bool summary = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# summary ", 0) == 0) {
            auto const j = json::parse(line.substr(10));
            if (j.at("schema_version").get<int>() > kSchemaVersion)
                throw std::invalid_argument("count CSV: newer schema version");
            r.geometry = geometry_from_json(j.at("geometry"));
            r.variant = variant_from_string(j.at("variant").get<std::string>());
            r.h = j.at("h").get<double>();
            r.m_min = j.at("m_min").get<long>();
            r.m_max = j.at("m_max").get<long>();
            r.count = j.at("count").get<long>();
            r.predicted = j.at("predicted").get<double>();
            r.ratio = j.at("ratio").get<double>();
            r.ambiguous_m = j.at("ambiguous_m").get<std::vector<long>>();
            summary = true;
            continue;
        }
        auto const f = split(line, ',');
        if (f.size() < 5) throw std::invalid_argument("count CSV: short row '" + line + "'");
        MomentumSample s;
        s.lambda0 = parse_real(f[1]);
        s.below = f[3] == "1";
        s.ambiguous = f[4] == "1";
        if (f.size() > 5) s.splitting = parse_real(f[5]);
        if (f.size() > 6) s.lambda1 = parse_real(f[6]);
        r.ground_values[std::stol(f[0])] = s;
    }
    if (!summary) throw std::invalid_argument("count CSV: missing summary line");
    return r;
}

// ---------------------------------------------------------------------------
// SVG

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    std::vector<double> hlines;
    std::vector<double> vlines;
};

inline std::string xml_escape(std::string const& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Scatter plot with reference lines, as a standalone SVG 1.1 document.
inline void write_svg(std::ostream& os, Plot const& plot) {
    double const W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 55;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (auto const& s : plot.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]), xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]), ymax = std::max(ymax, s.y[i]);
        }
    for (double v : plot.hlines) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
    for (double v : plot.vlines) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
    if (!(xmax > xmin)) xmin -= 1, xmax += 1;
    if (!(ymax > ymin)) ymin -= 1, ymax += 1;
    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto Y = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
    auto num = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.2f", v);
        return std::string(b);
    };
    auto label = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.4g", v);
        return std::string(b);
    };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(plot.title)
       << "</text>\n"
       << "<rect class=\"frame\" x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
       << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double const xv = xmin + (xmax - xmin) * i / 4, yv = ymin + (ymax - ymin) * i / 4;
        os << "<text x=\"" << num(X(xv)) << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
           << label(xv) << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << num(Y(yv) + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
           << label(yv) << "</text>\n";
    }
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
       << xml_escape(plot.x_label) << "</text>\n"
       << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << H / 2 << ")\">" << xml_escape(plot.y_label) << "</text>\n";
    for (double v : plot.hlines)
        os << "<line class=\"hline\" x1=\"" << ml << "\" x2=\"" << W - mr << "\" y1=\"" << num(Y(v)) << "\" y2=\""
           << num(Y(v)) << "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";
    for (double v : plot.vlines)
        os << "<line class=\"vline\" x1=\"" << num(X(v)) << "\" x2=\"" << num(X(v)) << "\" y1=\"" << mt << "\" y2=\""
           << H - mb << "\" stroke=\"#2ca02c\" stroke-dasharray=\"6 4\"/>\n";
    for (auto const& s : plot.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            os << "<circle cx=\"" << num(X(s.x[i])) << "\" cy=\"" << num(Y(s.y[i])) << "\" r=\"2.5\" fill=\""
               << s.color << "\"/>\n";
        }
    os << "</svg>\n";
}

/// lambda_0 / h against 2 m h (annulus) or m h (strip), clipped to [0, 3].
inline Plot band_plot(CountResult const& r) {
    Plot p;
    bool const an = is_annulus(r.geometry);
    char hbuf[32];
    std::snprintf(hbuf, sizeof hbuf, "%g", r.h);
    p.title = std::string(an ? "annulus" : "strip") + " " + to_string(r.variant) + ", h = " + hbuf;
    p.x_label = an ? "2 m h" : "m h";
    p.y_label = "lambda0 / h";
    PlotSeries s;
    for (auto const& [m, v] : r.ground_values) {
        double const y = v.lambda0 / r.h;
        if (!(y <= 3)) continue;
        s.x.push_back((an ? 2.0 : 1.0) * static_cast<double>(m) * r.h);
        s.y.push_back(y);
    }
    p.series.push_back(std::move(s));
    p.hlines.push_back(1.0);
    if (an) p.vlines.push_back(transition_radius_sq(std::get<Annulus>(r.geometry).R));
    return p;
}

}  // namespace bandcount
