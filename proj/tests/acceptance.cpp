// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <bandcount/annulus.hpp>
#include <bandcount/halfline.hpp>
#include <bandcount/oracle.hpp>
#include <bandcount/strip.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace bandcount;
using BC = BoundaryCondition;

namespace {

constexpr double kBracket = 0.10;
constexpr double kFinestBracket = 0.05;
constexpr double kNaiveGap = 0.25;
constexpr double kSplittingMagnitude = 0.25;
constexpr double kFixtureRelTol = 1e-6;
constexpr double kResidualMax = 1e-3;
constexpr double kResidualRatioLo = 3.5;
constexpr double kResidualRatioHi = 4.5;
constexpr int kOracleCases = 100;
constexpr unsigned long long kOracleSeed = 20261019;

int failures = 0;

void report(int n, bool ok, std::string const& what) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", n, what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(char const* f, double a) {
    char b[64];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

/// |ratio - 1| nonincreasing along the sweep, allowing one inversion.
bool trend_ok(std::vector<double> const& r) {
    int inversions = 0;
    for (std::size_t i = 1; i < r.size(); ++i)
        if (std::abs(r[i] - 1) > std::abs(r[i - 1] - 1) + 1e-12) ++inversions;
    return inversions <= 1;
}

bool in_bracket(double r, double w) { return std::abs(r - 1) <= w; }

bool sweep_ok(std::vector<double> const& r) {
    bool ok = trend_ok(r) && in_bracket(r.back(), kFinestBracket);
    for (double v : r) ok = ok && in_bracket(v, kBracket);
    return ok;
}

std::string ratios_text(std::vector<double> const& hs, std::vector<double> const& r) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? ", " : "") + fmt("h=%g", hs[i]) + fmt(" %.4f", r[i]);
    return s;
}

}  // namespace

int main() {
    auto const start = std::chrono::steady_clock::now();
    std::vector<CountResult> scanned;
    std::vector<double> const strip_h{0.02, 0.01, 0.005, 0.0025};

    // 1, 2: strip counts
    for (Variant v : {Variant::MixedDN, Variant::PureNN}) {
        std::vector<double> r;
        for (double h : strip_h) {
            auto c = count_strip(1.0, h, v);
            double const scale = v == Variant::MixedDN ? 2 * h : h;
            r.push_back(static_cast<double>(c.count) * scale);
            scanned.push_back(std::move(c));
        }
        report(v == Variant::MixedDN ? 1 : 2, sweep_ok(r),
               std::string(v == Variant::MixedDN ? "strip DN count*2h/L: " : "strip NN count*h/L: ") +
                   ratios_text(strip_h, r));
    }

    // 3: annulus counts
    {
        std::vector<double> const hs{0.01, 0.005, 0.0025};
        bool ok = true;
        std::string detail;
        for (double R : {0.3, 0.5, 0.7}) {
            std::vector<double> r;
            bool ordered = true;
            for (double h : hs) {
                auto dn = count_annulus(R, h, Variant::MixedDN);
                auto nn = count_annulus(R, h, Variant::PureNN);
                r.push_back(static_cast<double>(dn.count) * 2 * h / (1 - transition_radius_sq(R)));
                ordered = ordered && dn.count < nn.count;
                scanned.push_back(std::move(dn));
                scanned.push_back(std::move(nn));
            }
            bool const cell = ordered && in_bracket(r.back(), kFinestBracket) &&
                              std::all_of(r.begin(), r.end(), [](double v) { return in_bracket(v, kBracket); });
            ok = ok && cell;
            detail += fmt(" R=%.1f:", R) + " " + ratios_text(hs, r) + (ordered ? " DN<NN;" : " DN>=NN;");
        }
        report(3, ok, "annulus count*2h/(1-R~^2):" + detail);
    }

    // 4: correct area against the naive one
    {
        double const R = 0.5, h = 0.0025;
        auto const c = count_annulus(R, h, Variant::MixedDN);
        double const n = static_cast<double>(c.count) * 2 * std::numbers::pi * h;
        double const right = annulus_area(transition_radius(R));
        double const naive = annulus_area((1 + R) / 2);
        double const e_right = std::abs(n - right) / right, e_naive = std::abs(n - naive) / naive;
        report(4, e_right <= kFinestBracket && e_naive >= kNaiveGap,
               fmt("deviation from |A_R~| %.4f (<= 0.05)", e_right) +
                   fmt(", from |A_(1+R)/2| %.4f (>= 0.25)", e_naive));
    }

    // 5: half-line splittings at h = 1
    {
        auto const n4 = mu0(BC::Neumann, -4.0, 1.0), d4 = mu0(BC::Dirichlet, -4.0, 1.0);
        auto const n3 = mu0(BC::Neumann, -3.0, 1.0), d3 = mu0(BC::Dirichlet, -3.0, 1.0);
        bool const signs = n4.splitting < 0 && d4.splitting > 0 && n4.predicted_splitting < 0 &&
                           d4.predicted_splitting > 0;
        bool const magnitude =
            n4.relative_error <= kSplittingMagnitude && d4.relative_error <= kSplittingMagnitude;
        bool const trend = n4.relative_error < n3.relative_error && d4.relative_error < d3.relative_error;
        report(5, signs && magnitude && trend,
               std::string("signs ") + (signs ? "ok" : "wrong") + fmt("; rel.err at -4: neu %.3f", n4.relative_error) +
                   fmt(" dir %.3f", d4.relative_error) + fmt("; at -3: neu %.3f", n3.relative_error) +
                   fmt(" dir %.3f", d3.relative_error));
    }

    // 6: second band
    {
        long violations = 0, momenta = 0;
        for (auto const& c : scanned) {
            violations += static_cast<long>(second_band_violations(c).size());
            momenta += static_cast<long>(c.ground_values.size());
        }
        report(6, violations == 0,
               std::to_string(violations) + " lambda1 <= h among " + std::to_string(momenta) + " scanned momenta");
    }

    // 7: Sturm against shooting
    {
        std::mt19937_64 rng(kOracleSeed);
        int mismatches = 0, ambiguous = 0, lambda_bad = 0;
        for (int i = 0; i < kOracleCases; ++i) {
            auto const oc = random_oracle_case(rng);
            auto const r = compare_with_shooting(oc);
            if (!r.lambda0_agrees) ++lambda_bad;
            if (r.ambiguous)
                ++ambiguous;
            else if (r.sturm != r.shooting)
                ++mismatches;
        }
        report(7, mismatches == 0 && lambda_bad == 0,
               std::to_string(kOracleCases) + " cases, " + std::to_string(mismatches) + " count mismatches, " +
                   std::to_string(ambiguous) + " ambiguous, " + std::to_string(lambda_bad) + " lambda0 disagreements");
    }

    // 8: exact spectra
    {
        double worst = 0;
        SolverConfig free_cfg;
        free_cfg.resolution = 256;
        auto const dd = make_custom_problem(0.0, std::numbers::pi, 1.0, {BC::Dirichlet, BC::Dirichlet}, {0.0});
        auto const dn = make_custom_problem(0.0, std::numbers::pi, 1.0, {BC::Dirichlet, BC::Neumann}, {0.0});
        for (long k = 0; k < 5; ++k) {
            double const edd = static_cast<double>((k + 1) * (k + 1)), edn = (k + 0.5) * (k + 0.5);
            worst = std::max(worst, std::abs(richardson_eigenvalue(dd, k, free_cfg).value - edd) / edd);
            worst = std::max(worst, std::abs(richardson_eigenvalue(dn, k, free_cfg).value - edn) / edn);
        }
        SolverConfig line_cfg;
        line_cfg.resolution = 32;
        for (double h : {1.0, 0.1, 0.01}) {
            auto const p = make_fiber_problem(Strip{1.0}, 0, h, Variant::FullLine, 0.0);
            for (long n = 0; n <= 4; ++n) {
                double const e = (2 * n + 1) * h;
                worst = std::max(worst, std::abs(richardson_eigenvalue(p, n, line_cfg).value - e) / e);
            }
        }
        report(8, worst <= kFixtureRelTol, fmt("largest relative error %.2e", worst));
    }

    // 9: quasi-mode residual
    {
        bool ok = true;
        std::string detail;
        for (double h : {0.01, 0.005, 0.0025}) {
            long const m = std::lround(0.7 / (2 * h));
            auto const g = quasimode_grid(0.5, h, 16);
            double const r16 = quasimode_residual(0.5, m, h, g);
            double const r32 = quasimode_residual(0.5, m, h, g.refined());
            double const q = r16 / r32;
            ok = ok && r16 <= kResidualMax && q >= kResidualRatioLo && q <= kResidualRatioHi;
            detail += fmt(" h=%g:", h) + fmt(" %.2e", r16) + fmt(" ratio %.3f;", q);
        }
        report(9, ok, "R=0.5, 2mh~0.7, spacing sqrt(h)/16:" + detail);
    }

    // 10: Temple bounds in the unfavorable window
    {
        struct Triple {
            double R;
            long m;
            double h;
        };
        std::vector<Triple> const triples{{0.3, 13, 0.01},   {0.3, 21, 0.005},  {0.3, 25, 0.005},  {0.3, 27, 0.005},
                                          {0.3, 38, 0.0025}, {0.3, 46, 0.0025}, {0.3, 54, 0.0025}, {0.5, 74, 0.0025},
                                          {0.5, 82, 0.0025}, {0.5, 86, 0.0025}};
        int good = 0;
        std::string bad;
        for (auto const& t : triples) {
            auto const J = annulus_window_J(t.R, t.h, annulus_default_eps(t.R));
            auto const b = dirichlet_halfdisc_bounds(t.R, t.m, t.h);
            bool const ok = J.contains(static_cast<double>(t.m)) && b.temple.valid && b.temple.lower > 0 &&
                            b.temple.lower <= b.direct && b.direct <= b.temple.upper;
            if (ok)
                ++good;
            else
                bad += fmt(" (R=%.1f", t.R) + " m=" + std::to_string(t.m) + fmt(" h=%g)", t.h);
        }
        report(10, good == static_cast<int>(triples.size()),
               std::to_string(good) + "/" + std::to_string(triples.size()) +
                   " triples with 0 < lower <= lambda - h <= upper" + bad);
    }

    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of 10 criteria failed (%.1f s)\n", failures, secs);
    return failures == 0 ? 0 : 1;
}
