/**
 * @file strip.hpp
 * @brief Fibers -h^2 d^2/dt^2 + (t + m h)^2 on (0, L): ground band, second
 *        band, the count of m with lambda_0 < h, window classification and
 *        the cutoff Gaussian quasi-mode.
 */
#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "boundary_effect.hpp"
#include "core_types.hpp"
#include "predictions.hpp"
#include "scan.hpp"
#include "tridiag.hpp"

namespace bandcount {

inline void check_strip_variant(Variant v) {
    if (v != Variant::MixedDN && v != Variant::PureNN)
        throw std::invalid_argument("strip: variant must be MixedDN or PureNN");
}

inline double band0(double L, long m, double h, Variant variant, SolverConfig const& cfg = {}) {
    check_strip_variant(variant);
    return richardson_eigenvalue(make_fiber_problem(Strip{L}, m, h, variant), 0, cfg).value;
}

inline double second_band_floor(double L, long m, double h, Variant variant, SolverConfig const& cfg = {}) {
    check_strip_variant(variant);
    return richardson_eigenvalue(make_fiber_problem(Strip{L}, m, h, variant), 1, cfg).value;
}

/// Integer momenta with m h in the rough window (-L - 2 sqrt(h), 2 sqrt(h)).
inline std::pair<long, long> strip_momentum_range(double L, double h) {
    auto const w = strip_windows(L, h, L / 8).rough_window;
    return {static_cast<long>(std::ceil(w.lo / h)), static_cast<long>(std::floor(w.hi / h))};
}

inline CountResult count_strip(double L, double h, Variant variant, ScanOptions const& opt = {}) {
    check_strip_variant(variant);
    validate(Geometry{Strip{L}});
    auto const [lo, hi] = strip_momentum_range(L, h);
    if (hi - lo + 1 < 10) throw solver_error("count_strip: rough window holds fewer than 10 momenta");
    CountResult r;
    r.h = h;
    r.geometry = Strip{L};
    r.variant = variant;
    r.m_min = lo;
    r.m_max = hi;
    r.predicted = predict(variant == Variant::MixedDN ? FormulaId::StripDN : FormulaId::StripNN, Strip{L}, h)
                      .predicted_count;
    r.ground_values = parallel_map<MomentumSample>(
        lo, hi, opt.jobs, [&](long m) { return classify_fiber(make_fiber_problem(Strip{L}, m, h, variant), opt); });
    tally(r);
    return r;
}

enum class MomentumLabel { Favorable, Unfavorable, Boundary };

inline char label_letter(MomentumLabel l) {
    return l == MomentumLabel::Favorable ? 'F' : l == MomentumLabel::Unfavorable ? 'U' : 'B';
}

inline std::map<long, MomentumLabel> labels_from(CountResult const& r) {
    std::map<long, MomentumLabel> out;
    for (auto const& [m, s] : r.ground_values)
        out[m] = s.ambiguous ? MomentumLabel::Boundary : s.below ? MomentumLabel::Favorable : MomentumLabel::Unfavorable;
    return out;
}

/// Labels every scanned m of the MixedDN strip by lambda_0 against h.
inline std::map<long, MomentumLabel> classify_momenta(double L, double h, double eps, ScanOptions opt = {}) {
    strip_windows(L, h, eps);
    opt.with_lambda1 = false;
    return labels_from(count_strip(L, h, Variant::MixedDN, opt));
}

/// Momenta in I_eps not Favorable plus momenta in J_eps not Unfavorable.
inline std::vector<long> strip_misclassified(std::map<long, MomentumLabel> const& labels, double L, double h,
                                             double eps) {
    auto const w = strip_windows(L, h, eps);
    std::vector<long> bad;
    for (auto const& [m, l] : labels) {
        double const xi = static_cast<double>(m) * h;
        if (w.I_eps.contains(xi) && l != MomentumLabel::Favorable) bad.push_back(m);
        if (w.J_eps.contains(xi) && l != MomentumLabel::Unfavorable) bad.push_back(m);
    }
    return bad;
}

// ---------------------------------------------------------------------------
// Hermite functions

/// c_{n,h} H_n((t+xi)/sqrt h) e^{-(t+xi)^2/2h}, via the recurrence of the
/// normalized functions.
inline double hermite_state(int n, double xi, double h, double t) {
    if (n < 0 || n > 30) throw std::invalid_argument("hermite_state: n must lie in [0, 30]");
    if (!(h > 0)) throw std::invalid_argument("hermite_state: h must be positive");
    double const x = (t + xi) / std::sqrt(h);
    double prev = 0.0;
    double cur = std::pow(pi(), -0.25) * std::exp(-x * x / 2);
    for (int k = 0; k < n; ++k) {
        double const next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur * std::pow(h, -0.25);
}

// ---------------------------------------------------------------------------
// Quasi-modes

/// C^2 smoothstep: 0 below lo, 1 above hi.
inline double smoothstep(double x, double lo, double hi) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    double const s = (x - lo) / (hi - lo);
    return s * s * s * (10 + s * (-15 + 6 * s));
}

namespace detail {

/**
 * Rayleigh quotient minus the discrete Landau level of the trial
 * chi * (ground state of the reference lattice), restricted to the fiber
 * lattice. The reference ground state is the lattice's own Gaussian, so the
 * quotient carries no O(spacing^2) bias.
 */
template <class Real, class Cutoff>
double lattice_quasimode_excess(FiberProblem const& p, Grid const& grid, SolverConfig const& cfg, Cutoff chi) {
    using std::sqrt;
    auto const op = discretize<Real>(p, grid, cfg);
    auto const ref = reference_operator<Real>(p, grid, cfg);
    Real const level = lowest_eigenvalue(ref, Real(p.h) * Real(1e-60));
    auto const g = twisted_eigenvector(ref, level);
    double const dx = grid.spacing();
    auto const offset = std::lround(static_cast<double>(op.nodes[0] - ref.nodes[0]) / dx);
    std::vector<Real> y(op.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        long const j = offset + static_cast<long>(i);
        Real const w = (j >= 0 && j < static_cast<long>(g.size())) ? g[static_cast<std::size_t>(j)] : Real(0);
        y[i] = Real(chi(static_cast<double>(op.nodes[i]))) * w * sqrt(op.mass[i]);
    }
    auto const t = temple_bound_unknowns<Real>(op, y, level, Real(4 * p.h));
    return static_cast<double>(t.eta);
}

}  // namespace detail

/**
 * Excess over h of the Rayleigh quotient of the cutoff Gaussian centred at
 * t = -m h, with chi = 0 on [0, eps/2] and 1 on [eps, L]. Evaluated on the
 * default lattice against its own Landau level.
 */
inline double quasimode_rayleigh_strip(double L, long m, double h, double eps, SolverConfig const& cfg = {}) {
    auto const w = strip_windows(L, h, eps);
    if (!w.I_eps.contains(static_cast<double>(m) * h))
        throw std::invalid_argument("quasimode_rayleigh_strip: m h outside I_eps");
    auto const p = make_fiber_problem(Strip{L}, m, h, Variant::MixedDN);
    return detail::lattice_quasimode_excess<mp_real>(p, default_grid(p, cfg), cfg,
                                                     [&](double t) { return smoothstep(t, eps / 2, eps); });
}

/// Splitting lambda_0 - Landau level on the default lattice, the quantity the
/// quasi-mode bounds from above.
inline double lattice_splitting_strip(double L, long m, double h, Variant variant, SolverConfig const& cfg = {}) {
    auto const p = make_fiber_problem(Strip{L}, m, h, variant);
    return detail::lattice_splitting<mp_real>(p, default_grid(p, cfg), cfg, kAmbiguityBand).first;
}

struct BoundaryTerm {
    double discrete = 0.0;
    double closed_form = 0.0;
};

/// f_0'(L) f_0(L) from a central difference of the Hermite samples against
/// -(L + xi) / (sqrt(pi) h^{3/2}) e^{-(L+xi)^2/h}.
inline BoundaryTerm strip_boundary_term(double L, double xi, double h) {
    double const d = std::sqrt(h) / 64;
    double const f = hermite_state(0, xi, h, L);
    double const fp = (hermite_state(0, xi, h, L + d) - hermite_state(0, xi, h, L - d)) / (2 * d);
    double const s = L + xi;
    return {fp * f, -s / (std::sqrt(pi()) * std::pow(h, 1.5)) * std::exp(-s * s / h)};
}

}  // namespace bandcount
