/**
 * @file halfline.hpp
 * @brief Half-line harmonic operators -h^2 d^2/dt^2 + (t + xi)^2 on (0, inf)
 *        with a Neumann or Dirichlet end, their ground levels against h, and
 *        the weighted-norm decay certificate of fiber ground states.
 */
#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "boundary_effect.hpp"
#include "core_types.hpp"
#include "predictions.hpp"
#include "tridiag.hpp"

namespace bandcount {

struct HalflineResult {
    BoundaryCondition kind = BoundaryCondition::Neumann;
    double xi = 0.0;
    double h = 1.0;
    double mu0 = 0.0;
    /// mu0 - h.
    double splitting = 0.0;
    double error_estimate = 0.0;
    double predicted_splitting = 0.0;
    /// |splitting - predicted| / |predicted|; NaN at xi = 0.
    double relative_error = std::numeric_limits<double>::quiet_NaN();
};

/// Splittings below this fraction of h are out of reach of the solver.
inline constexpr double kSplittingFloor = 1e-40;

inline FiberProblem halfline_problem(BoundaryCondition kind, double xi, double h) {
    return make_fiber_problem(Strip{1.0}, 0, h,
                              kind == BoundaryCondition::Neumann ? Variant::HalflineNeu : Variant::HalflineDir, xi);
}

/**
 * Ground level of the half-line operator. The splitting mu0 - h is measured
 * against the ground level of the same lattice without the boundary, in
 * multiprecision, so it stays resolved far below double precision.
 */
inline HalflineResult mu0(BoundaryCondition kind, double xi, double h, SolverConfig const& cfg = {}) {
    if (!(xi <= 0)) throw std::invalid_argument("mu0: xi must be nonpositive");
    auto const p = halfline_problem(kind, xi, h);
    HalflineResult r;
    r.kind = kind;
    r.xi = xi;
    r.h = h;
    r.predicted_splitting = predicted_splitting(kind, xi, h);
    if (xi < 0 && std::abs(r.predicted_splitting) < kSplittingFloor * h)
        throw solver_error("mu0: predicted splitting below the numeric floor");
    auto const e = boundary_effect<mp_real>(p, cfg);
    r.splitting = e.splitting;
    r.error_estimate = e.error_estimate;
    r.mu0 = h + e.splitting;
    if (xi < 0) r.relative_error = std::abs(r.splitting - r.predicted_splitting) / std::abs(r.predicted_splitting);
    return r;
}

/// mu0 at xi = ratio * sqrt(h) for each ratio.
inline std::vector<HalflineResult> splitting_sweep(BoundaryCondition kind, std::span<double const> ratios, double h,
                                                   SolverConfig const& cfg = {}) {
    std::vector<HalflineResult> out;
    out.reserve(ratios.size());
    for (double q : ratios) {
        if (!(q <= -2)) throw std::invalid_argument("splitting_sweep: ratios must be <= -2");
        out.push_back(mu0(kind, q * std::sqrt(h), h, cfg));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Decay certificate

struct DecayCertificate {
    /// Weighted over unweighted norm with the weight divided by e^{exponent_shift}.
    double shifted_ratio = 1.0;
    double exponent_shift = 0.0;
    double ratio() const { return shifted_ratio * std::exp(exponent_shift); }
};

/// Distance function in the weight: (t + xi)^2 for flat fibers,
/// (phi(r) - phi(r_*)) / 2 for annulus fibers.
inline double decay_phase(FiberProblem const& p, double t) {
    if (p.potential == PotentialKind::AnnulusRadial) {
        double const rs = p.well_center();
        return (phase(t, rs) - phase(rs, rs)) / 2;
    }
    double const s = t + p.xi();
    return s * s;
}

/**
 * Ratio of \int |u|^2 e^{alpha Phi / h} to \int |u|^2 for the computed ground
 * state u (r dr measure for annulus fibers).
 */
inline DecayCertificate decay_certificate(FiberProblem const& p, double alpha, SolverConfig const& cfg = {}) {
    if (!(alpha >= 0 && alpha < 1)) throw std::invalid_argument("decay_certificate: alpha must lie in [0,1)");
    if (p.potential == PotentialKind::AnnulusRadial && p.m <= 0)
        throw std::invalid_argument("decay_certificate: annulus weight needs m > 0");
    auto const op = discretize<double>(p, default_grid(p, cfg), cfg);
    auto const u = ground_state(op, cfg.tol);
    double pmin = std::numeric_limits<double>::infinity();
    for (double t : op.nodes) pmin = std::min(pmin, decay_phase(p, t));
    DecayCertificate c;
    c.exponent_shift = alpha * pmin / p.h;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double const w = u[i] * op.jacobian[i];
        double const d = op.mass[i] * w * w;
        den += d;
        num += d * std::exp(alpha * (decay_phase(p, op.nodes[i]) - pmin) / p.h);
    }
    c.shifted_ratio = num / den;
    return c;
}

}  // namespace bandcount
