/**
 * @file tridiag.hpp
 * @brief Finite-difference fiber operators as symmetric tridiagonal matrices:
 *        Sturm counts, bisection, ground states, Richardson extrapolation,
 *        Temple bounds and the discrete Landau level of a lattice.
 *
 * All routines are templates over the scalar type so the same code runs in
 * double and in `mp_real`.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core_types.hpp"

namespace bandcount {

struct SolverConfig {
    /// Grid spacing is at most sqrt(h) / resolution.
    double resolution = 8.0;
    /// Open ends are cut at this many sqrt(h) beyond the turning points of
    /// the lowest level.
    double truncation = 12.0;
    /// The reference lattice reaches this many sqrt(h) beyond the well.
    double reference_margin = 16.0;
    /// Relative bisection tolerance.
    double tol = 1e-12;
};

/**
 * Symmetric tridiagonal matrix of a fiber problem in flat-measure variables.
 *
 * Unknowns are the interior grid nodes plus every Neumann endpoint. Neumann
 * rows come from a ghost-node reflection and are symmetrized with the half
 * quadrature weight `mass` = 1/2, so an eigenvector y relates to the sampled
 * function by w = y / sqrt(mass), u = w / jacobian.
 */
template <class Real>
struct DiscreteOperator {
    std::vector<Real> diag;
    std::vector<Real> offdiag;
    std::vector<Real> nodes;
    std::vector<Real> mass;
    std::vector<Real> jacobian;
    Real spacing{};
    Grid grid;
    double h = 1.0;
    /// Whether the endpoint nodes a, b are unknowns.
    bool left_node = false;
    bool right_node = false;

    std::size_t size() const { return diag.size(); }

    /// Gershgorin bound on |lambda|.
    Real norm_bound() const {
        using std::abs;
        Real s(0);
        for (std::size_t i = 0; i < diag.size(); ++i) {
            Real r = abs(diag[i]);
            if (i > 0) r += abs(offdiag[i - 1]);
            if (i + 1 < diag.size()) r += abs(offdiag[i]);
            s = std::max(s, r);
        }
        return s;
    }

    std::pair<Real, Real> gershgorin_interval() const {
        using std::abs;
        Real lo = diag[0], hi = diag[0];
        for (std::size_t i = 0; i < diag.size(); ++i) {
            Real r(0);
            if (i > 0) r += abs(offdiag[i - 1]);
            if (i + 1 < diag.size()) r += abs(offdiag[i]);
            lo = std::min(lo, Real(diag[i] - r));
            hi = std::max(hi, Real(diag[i] + r));
        }
        return {lo, hi};
    }
};

// ---------------------------------------------------------------------------
// Interval resolution and grids

/// Finite interval of a possibly open problem: open ends are placed
/// (1 + truncation) sqrt(h) from the well centre.
inline std::pair<double, double> resolved_interval(FiberProblem const& p, SolverConfig const& cfg = {}) {
    double const reach = (1.0 + cfg.truncation) * std::sqrt(p.h);
    double const c = p.well_center();
    double a = p.a, b = p.b;
    if (!std::isfinite(a)) a = c - reach;
    if (!std::isfinite(b)) b = std::max(c, std::isfinite(a) ? a : c) + reach;
    if (!(b > a)) throw solver_error("resolved_interval: empty truncation window");
    return {a, b};
}

inline double max_spacing(FiberProblem const& p, SolverConfig const& cfg = {}) {
    return std::sqrt(p.h) / cfg.resolution;
}

/// Coarsest grid meeting the resolution rule.
inline Grid default_grid(FiberProblem const& p, SolverConfig const& cfg = {}) {
    auto [a, b] = resolved_interval(p, cfg);
    return Grid::with_max_spacing(a, b, max_spacing(p, cfg));
}

namespace detail {

/// Assembles the operator on lattice indices j_lo..j_hi of t_j = a + j dx.
/// A Robin slope given for an end makes that node a boundary node; otherwise
/// the node beyond is a Dirichlet zero.
template <class Real>
DiscreteOperator<Real> assemble(FiberProblem const& p, Real const& a, Real const& dx, long j_lo, long j_hi,
                                std::optional<Real> left_slope, std::optional<Real> right_slope) {
    using std::sqrt;
    DiscreteOperator<Real> op;
    op.h = p.h;
    op.spacing = dx;
    auto const n = static_cast<std::size_t>(j_hi - j_lo + 1);
    op.diag.resize(n);
    op.offdiag.assign(n > 0 ? n - 1 : 0, Real(0));
    op.nodes.resize(n);
    op.mass.assign(n, Real(1));
    op.jacobian.assign(n, Real(1));
    Real const k = Real(p.h) * Real(p.h) / (dx * dx);
    Real const sqrt2 = sqrt(Real(2));
    for (std::size_t i = 0; i < n; ++i) {
        Real const t = a + Real(j_lo + static_cast<long>(i)) * dx;
        op.nodes[i] = t;
        op.diag[i] = 2 * k + effective_potential(p, t);
        if (p.weight == Weight::Radial) op.jacobian[i] = sqrt(t);
        if (i + 1 < n) op.offdiag[i] = -k;
    }
    if (left_slope) {
        op.diag[0] += 2 * k * dx * *left_slope;
        op.mass[0] = Real(1) / 2;
        if (n > 1) op.offdiag[0] = -sqrt2 * k;
    }
    if (right_slope) {
        op.diag[n - 1] -= 2 * k * dx * *right_slope;
        op.mass[n - 1] = Real(1) / 2;
        if (n > 1) op.offdiag[n - 2] = -sqrt2 * k;
    }
    return op;
}

}  // namespace detail

/**
 * Second-order discretization of the problem on `grid`.
 *
 * Radial problems are first mapped to flat measure by w = sqrt(r) u; a
 * Neumann end then becomes w' = w / (2 r).
 */
template <class Real = double>
DiscreteOperator<Real> discretize(FiberProblem const& p, Grid const& grid, SolverConfig const& cfg = {}) {
    validate(p);
    grid.validate();
    if (p.weight == Weight::Radial && !(grid.a > 0))
        throw std::invalid_argument("discretize: radial problem on an interval containing r = 0");
    if (grid.spacing() > max_spacing(p, cfg) * (1 + 1e-12))
        throw solver_error("discretize: grid under-resolves the potential (spacing > sqrt(h)/" +
                           std::to_string(cfg.resolution) + ")");
    if (!p.truncated() && (std::abs(grid.a - p.a) > 1e-12 * (1 + std::abs(p.a)) ||
                           std::abs(grid.b - p.b) > 1e-12 * (1 + std::abs(p.b))))
        throw std::invalid_argument("discretize: grid interval differs from the problem interval");

    Real const a(grid.a);
    Real const dx = (Real(grid.b) - a) / Real(grid.n + 1);
    bool const ln = p.bc.left == BoundaryCondition::Neumann;
    bool const rn = p.bc.right == BoundaryCondition::Neumann;
    std::optional<Real> ls, rs;
    if (ln) ls = Real(robin_slope(p, grid.a));
    if (rn) rs = Real(robin_slope(p, grid.b));
    auto op = detail::assemble<Real>(p, a, dx, ln ? 0 : 1, rn ? grid.n + 1 : grid.n, ls, rs);
    op.grid = grid;
    op.left_node = ln;
    op.right_node = rn;
    return op;
}

/**
 * Discrete Landau level carrier: the same lattice as `discretize(p, grid)`,
 * extended to cover the well +/- reference_margin sqrt(h) and closed by
 * Dirichlet ends far away. Its ground level is the lattice's image of h, so
 * lambda_0(problem) - lambda_0(reference) isolates the boundary effect.
 */
template <class Real = double>
DiscreteOperator<Real> reference_operator(FiberProblem const& p, Grid const& grid, SolverConfig const& cfg = {}) {
    validate(p);
    Real const a(grid.a);
    Real const dx = (Real(grid.b) - a) / Real(grid.n + 1);
    double const dxd = grid.spacing();
    double const c = p.well_center();
    double const w = cfg.reference_margin * std::sqrt(p.h);
    long j_lo = std::min<long>(0, static_cast<long>(std::floor((c - w - grid.a) / dxd)));
    long j_hi = std::max<long>(grid.n + 1, static_cast<long>(std::ceil((c + w - grid.a) / dxd)));
    if (p.weight == Weight::Radial) {
        long const first_positive = static_cast<long>(std::floor(-grid.a / dxd)) + 1;
        j_lo = std::max(j_lo, first_positive);
    }
    auto op = detail::assemble<Real>(p, a, dx, j_lo, j_hi, std::nullopt, std::nullopt);
    op.grid = grid;
    return op;
}

// ---------------------------------------------------------------------------
// Sturm counts and eigenvalues

/// Number of eigenvalues strictly below `threshold`.
template <class Real>
long count_below(DiscreteOperator<Real> const& op, Real const& threshold) {
    using std::abs;
    if (op.diag.empty()) throw std::invalid_argument("count_below: empty operator");
    Real const pivmin = std::numeric_limits<Real>::epsilon() * std::max(op.norm_bound(), Real(1)) *
                        std::numeric_limits<Real>::epsilon();
    long count = 0;
    Real q = op.diag[0] - threshold;
    if (q == 0) q = pivmin;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < op.diag.size(); ++i) {
        q = op.diag[i] - threshold - op.offdiag[i - 1] * op.offdiag[i - 1] / q;
        // a zero pivot is nudged positive: eigenvalues equal to the threshold
        // are not counted
        if (q == 0) q = pivmin;
        if (q < 0) ++count;
    }
    return count;
}

template <class Real>
long count_below(DiscreteOperator<Real> const& op, double threshold)
    requires(!std::is_same_v<Real, double>)
{
    return count_below(op, Real(threshold));
}

/// k-th eigenvalue by bisection on `count_below`, to relative tolerance
/// tol * max(|lambda|, h).
template <class Real>
Real eigenvalue(DiscreteOperator<Real> const& op, long k, double tol = 1e-12) {
    using std::abs;
    if (k < 0 || static_cast<std::size_t>(k) >= op.size()) throw std::out_of_range("eigenvalue: index out of range");
    if (!(tol >= 10 * std::numeric_limits<double>::epsilon()))
        throw std::invalid_argument("eigenvalue: tolerance below 10 machine epsilon");
    auto [lo, hi] = op.gershgorin_interval();
    Real const width = hi - lo;
    lo -= width * Real(1e-3) + Real(1e-300);
    hi += width * Real(1e-3) + Real(1e-300);
    Real const floor_scale(op.h);
    for (int it = 0; it < 4000; ++it) {
        Real const mid = (lo + hi) / 2;
        if (hi - lo <= Real(tol) * std::max(abs(mid), floor_scale)) break;
        if (count_below(op, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return (lo + hi) / 2;
}

/**
 * Lowest eigenvalue refined by Newton's method on det(A - x), started from
 * `below` (which must lie under the spectrum). Iterates increase
 * monotonically towards lambda_0; the derivative comes from the Sturm pivots.
 */
template <class Real>
Real refine_lowest(DiscreteOperator<Real> const& op, Real below, Real const& abs_tol, int max_iter = 200) {
    using std::abs;
    if (count_below(op, below) != 0) throw solver_error("refine_lowest: start is not below the spectrum");
    Real x = below;
    for (int it = 0; it < max_iter; ++it) {
        Real q = op.diag[0] - x;
        Real dq(-1);
        Real sum = dq / q;
        for (std::size_t i = 1; i < op.diag.size(); ++i) {
            Real const o2 = op.offdiag[i - 1] * op.offdiag[i - 1];
            Real const qn = op.diag[i] - x - o2 / q;
            dq = Real(-1) + o2 * dq / (q * q);
            q = qn;
            sum += dq / q;
        }
        // sum = -\sum_i 1 / (lambda_i - x) < 0
        Real const step = Real(-1) / sum;
        x += step;
        if (abs(step) <= abs_tol) return x;
    }
    throw solver_error("refine_lowest: Newton iteration did not converge");
}

/// Lowest eigenvalue to absolute accuracy abs_tol in any precision: a double
/// bisection seeds the Newton refinement.
template <class Real>
Real lowest_eigenvalue(DiscreteOperator<Real> const& op, Real const& abs_tol) {
    using std::abs;
    auto [glo, ghi] = op.gershgorin_interval();
    Real seed;
    if constexpr (std::is_same_v<Real, double>) {
        seed = eigenvalue(op, 0, 1e-13);
    } else {
        DiscreteOperator<double> d;
        d.diag.reserve(op.size());
        for (auto const& v : op.diag) d.diag.push_back(static_cast<double>(v));
        for (auto const& v : op.offdiag) d.offdiag.push_back(static_cast<double>(v));
        d.h = op.h;
        seed = Real(eigenvalue(d, 0, 1e-13));
    }
    Real gap = (abs(seed) + Real(op.h)) * Real(1e-9);
    Real start = seed - gap;
    while (count_below(op, start) != 0) {
        gap *= 16;
        start = seed - gap;
        if (start < glo) {
            start = glo - (ghi - glo) * Real(1e-6) - Real(1e-300);
            break;
        }
    }
    return refine_lowest(op, start, abs_tol);
}

// ---------------------------------------------------------------------------
// Eigenvectors

/**
 * Eigenvector for an isolated eigenvalue `lambda` via twisted factorization:
 * one step of inverse iteration with the right-hand side e_k at the twist
 * index k that minimizes |gamma_k|. Recurrences always run in the direction
 * of growth, so exponentially small tails keep their relative accuracy.
 * Returns the vector in the symmetric (y) coordinates, max entry 1.
 */
template <class Real>
std::vector<Real> twisted_eigenvector(DiscreteOperator<Real> const& op, Real const& lambda) {
    using std::abs;
    auto const n = op.size();
    std::vector<Real> dp(n), dm(n);
    Real const pivmin = std::numeric_limits<Real>::min() * Real(1e20);
    auto guard = [&](Real v) { return v == 0 ? pivmin : v; };
    dp[0] = guard(op.diag[0] - lambda);
    for (std::size_t i = 1; i < n; ++i)
        dp[i] = guard(op.diag[i] - lambda - op.offdiag[i - 1] * op.offdiag[i - 1] / dp[i - 1]);
    dm[n - 1] = guard(op.diag[n - 1] - lambda);
    for (std::size_t i = n - 1; i-- > 0;)
        dm[i] = guard(op.diag[i] - lambda - op.offdiag[i] * op.offdiag[i] / dm[i + 1]);
    std::size_t k = 0;
    Real best = abs(dp[0] + dm[0] - (op.diag[0] - lambda));
    for (std::size_t i = 1; i < n; ++i) {
        Real const g = abs(dp[i] + dm[i] - (op.diag[i] - lambda));
        if (g < best) best = g, k = i;
    }
    std::vector<Real> y(n);
    y[k] = Real(1);
    for (std::size_t i = k; i-- > 0;) y[i] = -op.offdiag[i] / dp[i] * y[i + 1];
    for (std::size_t i = k + 1; i < n; ++i) y[i] = -op.offdiag[i - 1] / dm[i] * y[i - 1];
    Real mx(0);
    for (auto const& v : y) mx = std::max(mx, abs(v));
    for (auto& v : y) v /= mx;
    return y;
}

/// Converts symmetric coordinates to samples of u at op.nodes.
template <class Real>
std::vector<Real> to_function_samples(DiscreteOperator<Real> const& op, std::span<Real const> y) {
    using std::sqrt;
    std::vector<Real> u(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) u[i] = y[i] / sqrt(op.mass[i]) / op.jacobian[i];
    return u;
}

/// Discrete L^2 norm squared of u samples (trapezoid weights, r dr for radial).
template <class Real>
Real discrete_norm2(DiscreteOperator<Real> const& op, std::span<Real const> u) {
    Real s(0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        Real const w = u[i] * op.jacobian[i];
        s += op.mass[i] * w * w;
    }
    return s * op.spacing;
}

/**
 * Positive, unit-norm ground state sampled at op.nodes (u, not w).
 * Throws when lambda_0 is not isolated at grid resolution or the residual
 * check fails.
 */
template <class Real>
std::vector<Real> ground_state(DiscreteOperator<Real> const& op, double tol = 1e-12) {
    using std::abs;
    using std::sqrt;
    if (op.size() < 2) throw std::invalid_argument("ground_state: operator too small");
    Real const l0 = eigenvalue(op, 0, tol);
    Real const l1 = eigenvalue(op, 1, tol);
    Real const err = Real(tol) * std::max(abs(l0), Real(op.h));
    if (!(l1 - l0 > 10 * err)) throw solver_error("ground_state: degenerate gap");
    auto y = twisted_eigenvector(op, l0);
    // residual in y coordinates
    Real res2(0), ynorm2(0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        Real r = (op.diag[i] - l0) * y[i];
        if (i > 0) r += op.offdiag[i - 1] * y[i - 1];
        if (i + 1 < y.size()) r += op.offdiag[i] * y[i + 1];
        res2 += r * r;
        ynorm2 += y[i] * y[i];
    }
    if (!(sqrt(res2 / ynorm2) <= Real(1e-8) * op.norm_bound()))
        throw solver_error("ground_state: inverse iteration did not converge");
    auto u = to_function_samples<Real>(op, y);
    Real const nrm = sqrt(discrete_norm2<Real>(op, u));
    for (auto& v : u) v /= nrm;
    return u;
}

// ---------------------------------------------------------------------------
// Richardson extrapolation

struct RichardsonResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double coarse = 0.0;
    double fine = 0.0;
};

/// (4 lambda_fine - lambda_coarse) / 3 from `grid` and its exact halving.
inline RichardsonResult richardson_eigenvalue(FiberProblem const& p, long k, Grid const& grid,
                                              SolverConfig const& cfg = {}) {
    auto const coarse = eigenvalue(discretize<double>(p, grid, cfg), k, cfg.tol);
    auto const fine = eigenvalue(discretize<double>(p, grid.refined(), cfg), k, cfg.tol);
    return {(4 * fine - coarse) / 3, std::abs(fine - coarse) / 3, coarse, fine};
}

inline RichardsonResult richardson_eigenvalue(FiberProblem const& p, long k, SolverConfig const& cfg = {}) {
    return richardson_eigenvalue(p, k, default_grid(p, cfg), cfg);
}

/// First `count` levels with Richardson error estimates.
inline SpectrumResult solve_spectrum(FiberProblem const& p, long count, SolverConfig const& cfg = {}) {
    auto const g = default_grid(p, cfg);
    auto const c = discretize<double>(p, g, cfg);
    auto const f = discretize<double>(p, g.refined(), cfg);
    SpectrumResult out;
    out.problem = p;
    out.grid_sizes_used = {g.n, g.refined().n};
    for (long k = 0; k < count; ++k) {
        double const lc = eigenvalue(c, k, cfg.tol);
        double const lf = eigenvalue(f, k, cfg.tol);
        out.eigenvalues.push_back((4 * lf - lc) / 3);
        out.error_estimates.push_back(std::abs(lf - lc) / 3);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Temple's inequality

template <class Real = double>
struct TempleBound {
    Real eta{};
    Real eps_sq{};
    Real beta{};
    Real lower{};
    Real upper{};
    bool valid = false;
};

/**
 * Temple bound for lambda_0 - reference_level from a trial vector given in
 * symmetric coordinates over the operator's unknowns:
 * eta - eps^2 / (beta - eta) <= lambda_0 - ref <= eta, valid when
 * eta < beta < lambda_1 - ref.
 */
template <class Real>
TempleBound<Real> temple_bound_unknowns(DiscreteOperator<Real> const& op, std::span<Real const> y,
                                        Real const& reference_level, Real const& beta) {
    if (y.size() != op.size()) throw std::invalid_argument("temple_bound: trial size mismatch");
    if (!(beta > 0)) throw std::invalid_argument("temple_bound: gap parameter must be positive");
    Real yy(0), ry(0), rr(0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        Real r = (op.diag[i] - reference_level) * y[i];
        if (i > 0) r += op.offdiag[i - 1] * y[i - 1];
        if (i + 1 < y.size()) r += op.offdiag[i] * y[i + 1];
        yy += y[i] * y[i];
        ry += r * y[i];
        rr += r * r;
    }
    if (!(yy > 0)) throw std::invalid_argument("temple_bound: zero trial");
    TempleBound<Real> t;
    t.eta = ry / yy;
    t.eps_sq = rr / yy - t.eta * t.eta;
    if (t.eps_sq < 0) t.eps_sq = Real(0);
    t.beta = beta;
    t.upper = t.eta;
    t.valid = beta > t.eta;
    t.lower = t.valid ? Real(t.eta - t.eps_sq / (beta - t.eta)) : Real(-std::numeric_limits<double>::infinity());
    return t;
}

/**
 * Temple bound from a trial function sampled on every grid node including
 * both endpoints (n + 2 values). Dirichlet endpoints must carry zero.
 */
template <class Real>
TempleBound<Real> temple_bound(DiscreteOperator<Real> const& op, std::span<Real const> trial,
                               Real const& reference_level, Real const& beta) {
    using std::abs;
    using std::sqrt;
    auto const n = static_cast<std::size_t>(op.grid.n);
    if (trial.size() != n + 2) throw std::invalid_argument("temple_bound: trial must sample all n + 2 grid nodes");
    Real scale(0);
    for (auto const& v : trial) scale = std::max(scale, abs(v));
    Real const zero_tol = scale * Real(1e-12);
    if (!op.left_node && abs(trial.front()) > zero_tol)
        throw std::invalid_argument("temple_bound: trial violates the Dirichlet condition at the left end");
    if (!op.right_node && abs(trial.back()) > zero_tol)
        throw std::invalid_argument("temple_bound: trial violates the Dirichlet condition at the right end");
    auto const first = op.left_node ? 0u : 1u;
    std::vector<Real> y(op.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = trial[first + i] * op.jacobian[i] * sqrt(op.mass[i]);
    return temple_bound_unknowns<Real>(op, y, reference_level, beta);
}

}  // namespace bandcount
