/**
 * @file annulus.hpp
 * @brief Radial fibers H_m = h^2(-d^2/dr^2 - r^{-1} d/dr) + (m h / r - r / 2)^2
 *        on (R, 1): ground band, count, crossover, quasi-modes r^m e^{-r^2/4h}
 *        and Temple bounds for the exterior Dirichlet problem.
 */
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "boundary_effect.hpp"
#include "core_types.hpp"
#include "predictions.hpp"
#include "scan.hpp"
#include "strip.hpp"
#include "tridiag.hpp"

namespace bandcount {

inline void check_annulus_variant(Variant v) {
    if (v != Variant::MixedDN && v != Variant::PureNN)
        throw std::invalid_argument("annulus: variant must be MixedDN or PureNN");
}

inline double band0_annulus(double R, long m, double h, Variant variant, SolverConfig const& cfg = {}) {
    check_annulus_variant(variant);
    return richardson_eigenvalue(make_fiber_problem(Annulus{R}, m, h, variant), 0, cfg).value;
}

// ---------------------------------------------------------------------------
// Quasi-mode

/// u(r) = r^m e^{-r^2/4h}, an exact solution of H_m u = h u on (0, inf).
struct QuasiMode {
    long m = 1;
    double h = 0.01;
    double r_star = 0.0;

    QuasiMode(long m_, double h_) : m(m_), h(h_) {
        if (m_ <= 0) throw std::invalid_argument("QuasiMode: m must be positive");
        if (!(h_ > 0)) throw std::invalid_argument("QuasiMode: h must be positive");
        r_star = std::sqrt(2.0 * static_cast<double>(m_) * h_);
    }

    double phi(double r) const { return phase(r, r_star); }
    double phi_star() const { return r_star * r_star * (1 - 2 * std::log(r_star)); }

    /// log u(r).
    double log_value(double r) const { return static_cast<double>(m) * std::log(r) - r * r / (4 * h); }

    /// Laplace asymptotic of \int |u|^2 r dr: sqrt(pi h) r_* e^{-phi(r_*)/2h}.
    double laplace_norm() const { return std::sqrt(pi() * h) * r_star * std::exp(-phi_star() / (2 * h)); }
};

/**
 * Relative residual ||(A - h) y|| / ||y|| of the sampled, Liouville-
 * transformed quasi-mode over the rows of the MixedDN fiber lattice on `grid`.
 * The first and last rows, where the quasi-mode does not meet the boundary
 * conditions, are excluded unless `include_boundary_rows`.
 */
inline double quasimode_residual(double R, long m, double h, Grid const& grid, bool include_boundary_rows = false,
                                 SolverConfig const& cfg = {}) {
    auto const p = make_fiber_problem(Annulus{R}, m, h, Variant::MixedDN);
    auto const op = discretize<double>(p, grid, cfg);
    QuasiMode const q(m, h);
    double top = -std::numeric_limits<double>::infinity();
    for (double r : op.nodes) top = std::max(top, q.log_value(r) + 0.5 * std::log(r));
    std::vector<double> y(op.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        double const r = op.nodes[i];
        y[i] = std::exp(q.log_value(r) + 0.5 * std::log(r) - top) * std::sqrt(op.mass[i]);
    }
    std::size_t const first = include_boundary_rows ? 0 : 1;
    std::size_t const last = include_boundary_rows ? y.size() : y.size() - 1;
    double res2 = 0, y2 = 0;
    for (std::size_t i = 0; i < y.size(); ++i) y2 += y[i] * y[i];
    for (std::size_t i = first; i < last; ++i) {
        double r = (op.diag[i] - h) * y[i];
        if (i > 0) r += op.offdiag[i - 1] * y[i - 1];
        if (i + 1 < y.size()) r += op.offdiag[i] * y[i + 1];
        res2 += r * r;
    }
    return std::sqrt(res2 / y2);
}

inline Grid quasimode_grid(double R, double h, double divisor) {
    return Grid::with_max_spacing(R, 1.0, std::sqrt(h) / divisor);
}

struct LaplaceCheck {
    double exact = 0.0;
    double predicted = 0.0;
    double ratio = 0.0;
};

/// Trapezoid quadrature of \int_R^1 |u|^2 r dr at spacing sqrt(h)/64 against
/// the Laplace asymptotic.
inline LaplaceCheck laplace_norm_check(double R, long m, double h, double eps = 0.0) {
    QuasiMode const q(m, h);
    double const rs2 = q.r_star * q.r_star;
    if (eps > 0 && !(rs2 >= R * R + eps && rs2 <= 1 - eps))
        throw std::invalid_argument("laplace_norm_check: r_* outside the window");
    auto const g = quasimode_grid(R, h, 64);
    double const shift = -q.phi_star() / (2 * h);
    double const dx = g.spacing();
    double s = 0;
    for (long i = 0; i <= g.n + 1; ++i) {
        double const r = g.a + static_cast<double>(i) * dx;
        double const wgt = (i == 0 || i == g.n + 1) ? 0.5 : 1.0;
        s += wgt * std::exp(2 * q.log_value(r) + std::log(r) - shift);
    }
    s *= dx;
    LaplaceCheck c;
    c.predicted = q.laplace_norm();
    c.ratio = s / (std::sqrt(pi() * h) * q.r_star);
    c.exact = c.ratio * c.predicted;
    return c;
}

/// u'(1) u(1) by central difference against ((r_*^2 - 1)/2h) e^{-phi(1)/2h}.
inline BoundaryTerm annulus_boundary_term(long m, double h) {
    QuasiMode const q(m, h);
    double const d = std::sqrt(h) / 64;
    auto u = [&](double r) { return std::exp(q.log_value(r)); };
    double const up = (u(1 + d) - u(1 - d)) / (2 * d);
    return {up * u(1.0), (q.r_star * q.r_star - 1) / (2 * h) * std::exp(-q.phi(1.0) / (2 * h))};
}

/**
 * Excess over h of the Rayleigh quotient of chi * (lattice Gaussian), chi = 0
 * on [R, R + eta/2] and 1 on [R + eta, 1], measured against the lattice's own
 * Landau level on the default MixedDN lattice.
 */
inline double quasimode_rayleigh_annulus(double R, long m, double h, double eta, SolverConfig const& cfg = {}) {
    double const eps = annulus_default_eps(R);
    if (!annulus_window_I(R, h, eps).contains(static_cast<double>(m)))
        throw std::invalid_argument("quasimode_rayleigh_annulus: 2 m h outside the favorable window");
    QuasiMode const q(m, h);
    if (!(eta > 0 && eta < eps && R + eta < q.r_star && q.phi(1.0) < q.phi(R + eta) - eps * std::abs(std::log(R))))
        throw std::invalid_argument("quasimode_rayleigh_annulus: eta violates the cutoff constraints");
    auto const p = make_fiber_problem(Annulus{R}, m, h, Variant::MixedDN);
    return detail::lattice_quasimode_excess<mp_real>(p, default_grid(p, cfg), cfg,
                                                     [&](double r) { return smoothstep(r, R + eta / 2, R + eta); });
}

/// Largest admissible cutoff width, halved.
inline double default_cutoff_eta(double R, long m, double h) {
    double const eps = annulus_default_eps(R);
    QuasiMode const q(m, h);
    double lo = 0, hi = std::min(eps, q.r_star - R);
    for (int it = 0; it < 100; ++it) {
        double const mid = (lo + hi) / 2;
        if (q.phi(1.0) < q.phi(R + mid) - eps * std::abs(std::log(R)))
            lo = mid;
        else
            hi = mid;
    }
    return lo / 2;
}

/// Lattice splitting of the annulus fiber, the quantity the quasi-mode bounds.
inline double lattice_splitting_annulus(double R, long m, double h, Variant variant, SolverConfig const& cfg = {}) {
    auto const p = make_fiber_problem(Annulus{R}, m, h, variant);
    return detail::lattice_splitting<mp_real>(p, default_grid(p, cfg), cfg, kAmbiguityBand).first;
}

// ---------------------------------------------------------------------------
// Counting

inline std::pair<long, long> annulus_momentum_range(double R, double h) {
    double const c = 2.0 / std::sqrt(h);
    return {static_cast<long>(std::ceil(R * R / (2 * h) - c)), static_cast<long>(std::floor(1 / (2 * h) + c))};
}

inline CountResult count_annulus(double R, double h, Variant variant, ScanOptions const& opt = {}) {
    check_annulus_variant(variant);
    validate(Geometry{Annulus{R}});
    auto const [lo, hi] = annulus_momentum_range(R, h);
    if (hi - lo + 1 < 10) throw solver_error("count_annulus: rough window holds fewer than 10 momenta");
    CountResult r;
    r.h = h;
    r.geometry = Annulus{R};
    r.variant = variant;
    r.m_min = lo;
    r.m_max = hi;
    r.predicted =
        predict(variant == Variant::MixedDN ? FormulaId::AnnulusDN : FormulaId::AnnulusNN, Annulus{R}, h).predicted_count;
    r.ground_values = parallel_map<MomentumSample>(
        lo, hi, opt.jobs, [&](long m) { return classify_fiber(make_fiber_problem(Annulus{R}, m, h, variant), opt); });
    tally(r);
    return r;
}

struct Crossover {
    long empirical = 0;
    double predicted = 0.0;
    /// The longest run of consecutive momenta below h.
    long run_lo = 0;
    long run_hi = 0;
};

/// Lower end of the longest run of momenta below h against (1-R^2)/(4h|ln R|).
inline Crossover transition_from(CountResult const& r) {
    auto const* an = std::get_if<Annulus>(&r.geometry);
    if (!an) throw std::invalid_argument("transition_from: annulus count expected");
    Crossover c;
    c.predicted = transition_radius_sq(an->R) / (2 * r.h);
    long best = 0, start = 0, len = 0;
    long prev = 0;
    bool have_prev = false;
    for (auto const& [m, s] : r.ground_values) {
        bool const below = s.below && !s.ambiguous;
        if (below && have_prev && prev == m - 1 && len > 0) {
            ++len;
        } else if (below) {
            start = m, len = 1;
        } else {
            len = 0;
        }
        if (len > best) best = len, c.run_lo = start, c.run_hi = m;
        prev = m;
        have_prev = true;
    }
    if (best == 0) throw solver_error("transition_scan: no momentum below h in the window");
    c.empirical = c.run_lo;
    return c;
}

inline Crossover transition_scan(double R, double h, ScanOptions opt = {}) {
    opt.with_lambda1 = false;
    return transition_from(count_annulus(R, h, Variant::MixedDN, opt));
}

// ---------------------------------------------------------------------------
// Exterior Dirichlet problem

/// H_m on (R, inf) with u(R) = 0, for any R > 0 (R >= 1 is allowed here).
inline FiberProblem exterior_dirichlet_problem(double R, long m, double h) {
    if (!(R > 0)) throw std::invalid_argument("exterior problem: R must be positive");
    if (m <= 0) throw std::invalid_argument("exterior problem: m must be positive");
    FiberProblem p;
    p.a = R;
    p.b = std::numeric_limits<double>::infinity();
    p.h = h;
    p.m = m;
    p.potential = PotentialKind::AnnulusRadial;
    p.weight = Weight::Radial;
    p.bc = {BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet};
    validate(p);
    return p;
}

struct HalfdiscBounds {
    /// Bounds on lambda - (discrete Landau level).
    TempleBound<double> temple;
    /// lambda_0 - Landau level on the same lattice, computed directly.
    double direct = 0.0;
    /// (phi(R) - phi(r_*)) / 2h.
    double exponent = 0.0;
};

/**
 * Temple bounds for the exterior Dirichlet fiber with r_* > R. The trial is
 * the lattice analogue of f u with f(r) = \int_R^r chi / u^2: with u the
 * lattice Gaussian, the increments f_{j+1} - f_j = chi_{j+1/2} / (u_j u_{j+1})
 * make f u solve the lattice equation wherever chi is constant. chi switches
 * from 1 to 0 where phi falls halfway from phi(R) to phi(r_*). beta = h.
 */
inline HalfdiscBounds dirichlet_halfdisc_bounds(double R, long m, double h, SolverConfig const& cfg = {}) {
    using Real = mp_real;
    auto const p = exterior_dirichlet_problem(R, m, h);
    QuasiMode const q(m, h);
    if (!(q.r_star > R)) throw std::invalid_argument("dirichlet_halfdisc_bounds: needs r_* > R");
    auto const grid = default_grid(p, cfg);
    auto const op = discretize<Real>(p, grid, cfg);
    auto const ref = reference_operator<Real>(p, grid, cfg);
    Real const level = lowest_eigenvalue(ref, Real(h) * Real(1e-60));
    auto const u = twisted_eigenvector(ref, level);
    double const dx = grid.spacing();
    long const j0 = std::lround((R - static_cast<double>(ref.nodes[0])) / dx);
    if (j0 < 0 || j0 >= static_cast<long>(u.size())) throw solver_error("dirichlet_halfdisc_bounds: lattice mismatch");

    // cutoff centre: phi(r_c) = (phi(R) + phi(r_*)) / 2 on (R, r_*)
    double const target = (q.phi(R) + q.phi_star()) / 2;
    double lo = R, hi = q.r_star;
    for (int it = 0; it < 200; ++it) {
        double const mid = (lo + hi) / 2;
        (q.phi(mid) > target ? lo : hi) = mid;
    }
    double const rc = (lo + hi) / 2;
    double const width = std::min(rc - R, q.r_star - rc) / 2;
    auto chi = [&](double r) { return 1 - smoothstep(r, rc - width, rc + width); };

    std::vector<Real> y(op.size());
    Real f(0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        auto const j = static_cast<std::size_t>(j0 + static_cast<long>(i));
        double const mid = R + (static_cast<double>(i) + 0.5) * dx;
        f += Real(chi(mid)) / (u[j] * u[j + 1]);
        y[i] = f * u[j + 1];
    }
    auto const t = temple_bound_unknowns<Real>(op, y, level, Real(h));
    HalfdiscBounds b;
    b.temple = {static_cast<double>(t.eta), static_cast<double>(t.eps_sq), static_cast<double>(t.beta),
                static_cast<double>(t.lower), static_cast<double>(t.upper), t.valid};
    b.direct = static_cast<double>(Real(lowest_eigenvalue(op, Real(h) * Real(1e-60)) - level));
    b.exponent = (q.phi(R) - q.phi_star()) / (2 * h);
    return b;
}

}  // namespace bandcount
