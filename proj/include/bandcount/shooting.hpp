/**
 * @file shooting.hpp
 * @brief Prüfer-phase shooting: an independent count of eigenvalues below a
 *        threshold for the same flat-measure ODE the tridiagonal solver uses.
 *
 * With w = rho sin(theta), w' = S rho cos(theta) and constant scale S, the
 * equation -h^2 w'' + (V - E) w = 0 becomes
 *     theta' = S cos^2(theta) + (E - V) / (h^2 S) sin^2(theta),
 * integrated by fixed-step RK4 from the left end.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "core_types.hpp"
#include "tridiag.hpp"

namespace bandcount {

struct ShootingResult {
    long eigenvalue_count_below = 0;
    std::vector<double> eigenvalues;
    long integrator_steps = 0;
};

namespace detail {

struct PruferSetup {
    double a = 0.0;
    double b = 1.0;
    double scale = 1.0;
    double theta_left = 0.0;
    /// Eigenvalues sit where theta(b) = theta_right + k pi.
    double theta_right = 0.0;
};

inline double max_gap(FiberProblem const& p, double a, double b, double energy) {
    double g = 0.0;
    int const samples = 4096;
    for (int i = 0; i <= samples; ++i) {
        double const t = a + (b - a) * i / samples;
        g = std::max(g, std::abs(energy - effective_potential<double>(p, t)));
    }
    return g;
}

/// Angle of the boundary condition w' = s w (or w = 0) in (0, pi].
inline double boundary_angle(FiberProblem const& p, BoundaryCondition c, double endpoint, double scale) {
    if (c == BoundaryCondition::Dirichlet) return 0.0;
    return std::atan2(scale, robin_slope(p, endpoint));
}

inline PruferSetup prufer_setup(FiberProblem const& p, double energy, SolverConfig const& cfg) {
    auto const [a, b] = resolved_interval(p, cfg);
    PruferSetup s;
    s.a = a;
    s.b = b;
    s.scale = std::sqrt(std::max(max_gap(p, a, b, energy), p.h)) / p.h;
    s.theta_left = boundary_angle(p, p.bc.left, a, s.scale);
    double const r = boundary_angle(p, p.bc.right, b, s.scale);
    s.theta_right = r == 0.0 ? pi() : r;
    return s;
}

inline long minimum_steps(PruferSetup const& s) {
    return static_cast<long>(std::ceil(s.scale * (s.b - s.a) / (pi() / 8)));
}

/// theta(b); `crossings` receives the number of interior zeros of w.
inline double integrate_phase(FiberProblem const& p, PruferSetup const& s, double energy, long steps,
                              long* crossings = nullptr) {
    double const h2 = p.h * p.h;
    auto rhs = [&](double t, double th) {
        double const c = std::cos(th), sn = std::sin(th);
        return s.scale * c * c + (energy - effective_potential<double>(p, t)) / (h2 * s.scale) * sn * sn;
    };
    double const dx = (s.b - s.a) / static_cast<double>(steps);
    double th = s.theta_left;
    long zeros = 0;
    for (long i = 0; i < steps; ++i) {
        double const t = s.a + dx * static_cast<double>(i);
        double const k1 = rhs(t, th);
        double const k2 = rhs(t + dx / 2, th + dx / 2 * k1);
        double const k3 = rhs(t + dx / 2, th + dx / 2 * k2);
        double const k4 = rhs(t + dx, th + dx * k3);
        double const next = th + dx / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (i + 1 < steps) zeros += static_cast<long>(std::floor(next / pi())) - static_cast<long>(std::floor(th / pi()));
        th = next;
    }
    if (crossings) *crossings = zeros;
    return th;
}

}  // namespace detail

/// Steps used when none are given: eight times the resolution minimum.
inline long default_shooting_steps(FiberProblem const& p, double threshold, SolverConfig const& cfg = {}) {
    return 8 * detail::minimum_steps(detail::prufer_setup(p, threshold, cfg));
}

/**
 * Number of eigenvalues strictly below `threshold`. Throws solver_error when
 * `steps` lets the phase advance by pi/8 or more per step.
 */
inline long shoot_count(FiberProblem const& p, double threshold, long steps, SolverConfig const& cfg = {}) {
    validate(p);
    auto const s = detail::prufer_setup(p, threshold, cfg);
    if (steps < detail::minimum_steps(s))
        throw solver_error("shoot_count: " + std::to_string(steps) + " steps under-resolve the phase (need " +
                           std::to_string(detail::minimum_steps(s)) + ")");
    double const theta = detail::integrate_phase(p, s, threshold, steps);
    double const k = std::ceil((theta - s.theta_right) / pi());
    return std::max(0L, static_cast<long>(k));
}

inline long shoot_count(FiberProblem const& p, double threshold, SolverConfig const& cfg = {}) {
    return shoot_count(p, threshold, default_shooting_steps(p, threshold, cfg), cfg);
}

/// Total Prüfer phase theta(b) at `energy`, with the scale S taken at
/// `scale_energy` (phases at different energies compare only for equal S).
inline double prufer_phase(FiberProblem const& p, double energy, double scale_energy, long steps,
                           SolverConfig const& cfg = {}) {
    auto const s = detail::prufer_setup(p, scale_energy, cfg);
    return detail::integrate_phase(p, s, energy, steps);
}

/// Interior zeros of the solution shot from the left end at `energy`.
inline long interior_zeros(FiberProblem const& p, double energy, SolverConfig const& cfg = {}) {
    auto const s = detail::prufer_setup(p, energy, cfg);
    long z = 0;
    detail::integrate_phase(p, s, energy, 8 * detail::minimum_steps(s), &z);
    return z;
}

/**
 * k-th eigenvalue by bisection on shoot_count until the bracket is below
 * tol * max(|lambda|, h). Steps are fixed from the bracket ends so the count
 * is a deterministic function of the energy.
 */
inline double shoot_eigenvalue(FiberProblem const& p, long k, double tol = 1e-10, SolverConfig const& cfg = {},
                               long* steps_used = nullptr) {
    validate(p);
    if (k < 0) throw std::out_of_range("shoot_eigenvalue: negative index");
    if (!(tol > 0)) throw std::invalid_argument("shoot_eigenvalue: tolerance must be positive");
    auto const [a, b] = resolved_interval(p, cfg);
    double vmin = effective_potential<double>(p, a);
    for (int i = 0; i <= 4096; ++i) vmin = std::min(vmin, effective_potential<double>(p, a + (b - a) * i / 4096));
    double lo = vmin - p.h;
    double hi = vmin + (2 * k + 3) * p.h;
    for (int it = 0; it < 200; ++it) {
        if (shoot_count(p, lo, cfg) == 0) break;
        lo -= (hi - lo);
    }
    for (int it = 0; it < 200; ++it) {
        if (shoot_count(p, hi, cfg) > k) break;
        hi += (hi - lo);
    }
    long const steps = std::max(default_shooting_steps(p, lo, cfg), default_shooting_steps(p, hi, cfg));
    if (steps_used) *steps_used = steps;
    for (int it = 0; it < 400; ++it) {
        double const mid = (lo + hi) / 2;
        if (hi - lo <= tol * std::max(std::abs(mid), p.h)) break;
        if (shoot_count(p, mid, steps, cfg) > k)
            hi = mid;
        else
            lo = mid;
    }
    return (lo + hi) / 2;
}

/// Count below `threshold` and the eigenvalues under it.
inline ShootingResult shoot(FiberProblem const& p, double threshold, double tol = 1e-10, SolverConfig const& cfg = {}) {
    ShootingResult r;
    r.integrator_steps = default_shooting_steps(p, threshold, cfg);
    r.eigenvalue_count_below = shoot_count(p, threshold, r.integrator_steps, cfg);
    for (long k = 0; k < r.eigenvalue_count_below; ++k) r.eigenvalues.push_back(shoot_eigenvalue(p, k, tol, cfg));
    return r;
}

}  // namespace bandcount
