/**
 * @file oracle.hpp
 * @brief Seeded random fiber problems and the comparison of Sturm counts with
 *        Prüfer shooting counts on them.
 */
#pragma once

#include <cmath>
#include <random>
#include <string>

#include "annulus.hpp"
#include "core_types.hpp"
#include "shooting.hpp"
#include "strip.hpp"
#include "tridiag.hpp"

namespace bandcount {

struct OracleCase {
    FiberProblem problem;
    double threshold = 0.0;
};

/// Random h in [0.01, 1] (log-uniform), strip or annulus, any endpoint pair,
/// m in the rough window, threshold in [0.5 h, 4 h].
inline OracleCase random_oracle_case(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double const h = std::exp(std::log(0.01) + unit(rng) * (std::log(1.0) - std::log(0.01)));
    bool const annulus = unit(rng) < 0.5;
    BoundaryPair bc{unit(rng) < 0.5 ? BoundaryCondition::Dirichlet : BoundaryCondition::Neumann,
                    unit(rng) < 0.5 ? BoundaryCondition::Dirichlet : BoundaryCondition::Neumann};
    OracleCase c;
    if (annulus) {
        double const R = 0.2 + 0.6 * unit(rng);
        auto const [lo, hi] = annulus_momentum_range(R, h);
        long const m = std::uniform_int_distribution<long>(lo, hi)(rng);
        c.problem = make_fiber_problem(Annulus{R}, m, h, Variant::MixedDN);
    } else {
        double const L = 0.5 + 1.5 * unit(rng);
        auto const [lo, hi] = strip_momentum_range(L, h);
        long const m = std::uniform_int_distribution<long>(lo, hi)(rng);
        c.problem = make_fiber_problem(Strip{L}, m, h, Variant::MixedDN);
    }
    c.problem.bc = bc;
    c.threshold = h * (0.5 + 3.5 * unit(rng));
    return c;
}

struct OracleComparison {
    long sturm = 0;
    long shooting = 0;
    /// Some eigenvalue lies within its discretization band of the threshold.
    bool ambiguous = false;
    double lambda0 = 0.0;
    double lambda0_error = 0.0;
    double lambda0_shooting = 0.0;
    bool lambda0_agrees = false;
};

/// Relative accuracy budget of shooting eigenvalues (bisection plus RK4).
inline constexpr double kShootingRelTol = 1e-7;

/**
 * Sturm count on the refined default lattice against the shooting count.
 * Eigenvalues within 10 Richardson error estimates (plus 1e-9 of scale) of
 * the threshold make the case ambiguous.
 */
inline OracleComparison compare_with_shooting(OracleCase const& c, SolverConfig const& cfg = {}) {
    auto const& p = c.problem;
    auto const grid = default_grid(p, cfg);
    auto const fine = discretize<double>(p, grid.refined(), cfg);
    OracleComparison out;
    out.sturm = count_below(fine, c.threshold);
    out.shooting = shoot_count(p, c.threshold, cfg);
    double const scale = std::max(p.h, std::abs(c.threshold));
    for (long k = 0; k <= out.sturm + 1 && static_cast<std::size_t>(k) < fine.size(); ++k) {
        auto const r = richardson_eigenvalue(p, k, grid, cfg);
        double const band = 10 * r.error_estimate + 1e-9 * scale;
        if (std::abs(r.fine - c.threshold) <= band || std::abs(r.value - c.threshold) <= band) out.ambiguous = true;
        if (k == 0) out.lambda0 = r.value, out.lambda0_error = r.error_estimate;
    }
    out.lambda0_shooting = shoot_eigenvalue(p, 0, 1e-11, cfg);
    double const tol = out.lambda0_error + kShootingRelTol * std::max(std::abs(out.lambda0), p.h);
    out.lambda0_agrees = std::abs(out.lambda0_shooting - out.lambda0) <= tol;
    return out;
}

inline std::string describe(FiberProblem const& p) {
    std::string g = p.potential == PotentialKind::AnnulusRadial ? "annulus" : "strip";
    return g + " (" + std::to_string(p.a) + "," + std::to_string(p.b) + ") " + bc_letter(p.bc.left) +
           bc_letter(p.bc.right) + " h=" + std::to_string(p.h) + " m=" + std::to_string(p.m);
}

}  // namespace bandcount
