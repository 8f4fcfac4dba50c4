/**
 * @file boundary_effect.hpp
 * @brief Sign and size of lambda_0 - h for one fiber, resolved on the lattice.
 *
 * lambda_0(fiber) - h is exponentially small in 1/h for most fibers, far
 * below both double precision and the O(spacing^2) discretization error.
 * Both errors cancel when lambda_0 of the discrete fiber is compared with the
 * ground level of the same lattice with the boundaries pushed away (the
 * discrete Landau level), in multiprecision.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "multiprecision.hpp"
#include "tridiag.hpp"

namespace bandcount {

struct BoundaryEffect {
    /// discrete lambda_0 - discrete Landau level, Richardson-extrapolated
    /// (in log-magnitude in the exponentially small regime).
    double splitting = 0.0;
    double error_estimate = 0.0;
    double coarse = 0.0;
    double fine = 0.0;
    /// Discrete Landau level on the coarse lattice.
    double landau_level = 0.0;
    bool below = false;
    bool ambiguous = false;
};

/// Splittings within this fraction of h are reported as ties.
inline constexpr double kAmbiguityBand = 1e-50;

namespace detail {

/// lambda_0(fiber) - lambda_0(reference) on one lattice, cross-checked
/// against Sturm counts at the reference level +/- delta.
template <class Real>
std::pair<double, double> lattice_splitting(FiberProblem const& p, Grid const& grid, SolverConfig const& cfg,
                                            double band) {
    auto const op = discretize<Real>(p, grid, cfg);
    auto const ref = reference_operator<Real>(p, grid, cfg);
    Real const delta = Real(p.h) * Real(band);
    Real const abs_tol = std::max(Real(delta * Real(1e-8)), Real(64 * std::numeric_limits<Real>::epsilon() * Real(p.h)));
    Real const level = lowest_eigenvalue(ref, abs_tol);
    Real const lambda = lowest_eigenvalue(op, abs_tol);
    Real const s = lambda - level;
    bool const counted_below = count_below(op, Real(level - delta)) >= 1;
    bool const counted_above = count_below(op, Real(level + delta)) == 0;
    if ((s < -delta && !counted_below) || (s > delta && !counted_above))
        throw solver_error("boundary_effect: Newton level and Sturm count disagree");
    return {static_cast<double>(s), static_cast<double>(level)};
}

}  // namespace detail

/// Below this fraction of h a splitting is in the exponentially small regime.
inline constexpr double kTinySplitting = 1e-8;

/**
 * Boundary effect of one fiber from the splitting on `grid` and on its exact
 * halving.
 *
 * When the well touches a boundary the splitting is O(h) and carries an
 * additive O(spacing^2) error from the boundary rows; Richardson
 * extrapolation removes it and its sign decides. When the splitting is
 * exponentially small the lattice perturbs the decay exponent instead, which
 * keeps the sign but makes additive extrapolation meaningless: both lattices
 * must then agree, and the magnitude is extrapolated in log|splitting|. Everything else (and |splitting| <= band h) is a tie.
 */
template <class Real = mp_real>
BoundaryEffect boundary_effect(FiberProblem const& p, Grid const& grid, SolverConfig const& cfg = {},
                               double band = kAmbiguityBand) {
    auto const [sc, level] = detail::lattice_splitting<Real>(p, grid, cfg, band);
    auto const [sf, level_f] = detail::lattice_splitting<Real>(p, grid.refined(), cfg, band);
    (void)level_f;
    BoundaryEffect e;
    e.coarse = sc;
    e.fine = sf;
    e.splitting = (4 * sf - sc) / 3;
    e.error_estimate = std::abs(sf - sc) / 3;
    e.landau_level = level;
    double const tie = band * p.h;
    bool const tiny = std::max(std::abs(sc), std::abs(sf)) < kTinySplitting * p.h;
    if (tiny) {
        bool const agree = (sc < -tie && sf < -tie) || (sc > tie && sf > tie);
        e.ambiguous = !agree;
        e.below = agree && sf < 0;
        if (agree) {
            // log|s| has the O(spacing^2) expansion here
            double const mag = std::exp((4 * std::log(std::abs(sf)) - std::log(std::abs(sc))) / 3);
            e.splitting = std::copysign(mag, sf);
            e.error_estimate = std::abs(e.splitting - sf);
        } else {
            e.splitting = sf;
        }
    } else {
        e.ambiguous = std::abs(e.splitting) <= std::max(tie, e.error_estimate / 10);
        e.below = !e.ambiguous && e.splitting < 0;
    }
    return e;
}

template <class Real = mp_real>
BoundaryEffect boundary_effect(FiberProblem const& p, SolverConfig const& cfg = {}, double band = kAmbiguityBand) {
    return boundary_effect<Real>(p, default_grid(p, cfg), cfg, band);
}

}  // namespace bandcount
