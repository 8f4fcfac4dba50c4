/**
 * @file predictions.hpp
 * @brief Closed-form leading terms: counts, momentum windows, transition
 *        radius and half-line splitting laws.
 */
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "core_types.hpp"

namespace bandcount {

enum class FormulaId { StripDN, StripNN, AnnulusDN, AnnulusNN, HalflineNeuSplit, HalflineDirSplit };

inline std::string to_string(FormulaId f) {
    switch (f) {
        case FormulaId::StripDN: return "strip-dn";
        case FormulaId::StripNN: return "strip-nn";
        case FormulaId::AnnulusDN: return "annulus-dn";
        case FormulaId::AnnulusNN: return "annulus-nn";
        case FormulaId::HalflineNeuSplit: return "halfline-neu";
        case FormulaId::HalflineDirSplit: return "halfline-dir";
    }
    return "?";
}

/// Real interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo <= x && x <= hi; }
    double length() const { return hi - lo; }
};

struct PredictionReport {
    Geometry geometry = Strip{};
    double h = 0.0;
    FormulaId formula = FormulaId::StripDN;
    /// Leading count (or, for the splitting laws, the leading value of mu0 - h
    /// at the xi carried in `window.lo`).
    double predicted_count = 0.0;
    /// Momentum interval of the rough localization, in units of m.
    Interval window;
    /// Annulus crossover momentum (1 - R^2) / (4 h |ln R|).
    std::optional<double> transition;
};

// ---------------------------------------------------------------------------
// Annulus quantities

/// R~^2 = (1 - R^2) / (2 |ln R|).
inline double transition_radius_sq(double R) {
    if (!(R > 0 && R < 1)) throw std::invalid_argument("transition radius: R must lie in (0,1)");
    return (1 - R * R) / (2 * std::abs(std::log(R)));
}

inline double transition_radius(double R) { return std::sqrt(transition_radius_sq(R)); }

/// phi(r) = r^2 - 2 r_*^2 ln r.
inline double phase(double r, double r_star) { return r * r - 2 * r_star * r_star * std::log(r); }

/// Area of the annulus {rho < |x| < 1}.
inline double annulus_area(double rho) { return pi() * (1 - rho * rho); }

/// Default window margin: min(0.1, (1/2) min(1 - R~^2, R~^2 - R^2)).
inline double annulus_default_eps(double R) {
    double const t = transition_radius_sq(R);
    return std::min(0.1, 0.5 * std::min(1 - t, t - R * R));
}

/// Favorable momenta: R~^2 + eps < 2 m h < 1 - eps.
inline Interval annulus_window_I(double R, double h, double eps) {
    return {(transition_radius_sq(R) + eps) / (2 * h), (1 - eps) / (2 * h)};
}

/// Unfavorable momenta: R^2 + eps < 2 m h < R~^2 - eps.
inline Interval annulus_window_J(double R, double h, double eps) {
    return {(R * R + eps) / (2 * h), (transition_radius_sq(R) - eps) / (2 * h)};
}

/// Rough localization (R^2/2h - c R/sqrt(h), 1/2h + c/sqrt(h)), c = 2.
inline Interval annulus_rough_window(double R, double h, double c = 2.0) {
    return {R * R / (2 * h) - c * R / std::sqrt(h), 1 / (2 * h) + c / std::sqrt(h)};
}

// ---------------------------------------------------------------------------
// Strip quantities, in units of xi = m h

struct MomentumWindows {
    double eps = 0.1;
    Interval I_eps;
    Interval J_eps;
    Interval rough_window;
};

inline MomentumWindows strip_windows(double L, double h, double eps, double c = 2.0) {
    if (!(eps > 0 && eps < L / 4)) throw std::invalid_argument("strip_windows: eps must lie in (0, L/4)");
    return {eps, {-L + eps, -L / 2 - eps}, {-L / 2 + eps, -eps}, {-L - c * std::sqrt(h), c * std::sqrt(h)}};
}

// ---------------------------------------------------------------------------
// Half-line law

/// Leading term of mu0 - h: pi^{-1/2} h (xi/sqrt h) e^{-xi^2/h} for Neumann
/// (negative for xi < 0) and its negative for Dirichlet.
inline double predicted_splitting(BoundaryCondition kind, double xi, double h) {
    double const s = h * (xi / std::sqrt(h)) * std::exp(-xi * xi / h) / std::sqrt(pi());
    return kind == BoundaryCondition::Neumann ? s : -s;
}

// ---------------------------------------------------------------------------

inline PredictionReport predict(FormulaId f, Geometry const& g, double h, double xi = 0.0) {
    if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("predict: h must be positive");
    validate(g);
    PredictionReport r;
    r.geometry = g;
    r.h = h;
    r.formula = f;
    switch (f) {
        case FormulaId::StripDN:
        case FormulaId::StripNN: {
            auto const* s = std::get_if<Strip>(&g);
            if (!s) throw std::invalid_argument("predict: strip formula needs a strip");
            r.predicted_count = (f == FormulaId::StripDN ? 0.5 : 1.0) * s->L / h;
            auto const w = strip_windows(s->L, h, s->L / 8).rough_window;
            r.window = {w.lo / h, w.hi / h};
            break;
        }
        case FormulaId::AnnulusDN:
        case FormulaId::AnnulusNN: {
            auto const* a = std::get_if<Annulus>(&g);
            if (!a) throw std::invalid_argument("predict: annulus formula needs an annulus");
            double const R = a->R;
            r.predicted_count = f == FormulaId::AnnulusDN ? 1 / (2 * h) - (1 - R * R) / (4 * h * std::abs(std::log(R)))
                                                          : (1 - R * R) / (2 * h);
            r.window = annulus_rough_window(R, h);
            if (f == FormulaId::AnnulusDN) r.transition = transition_radius_sq(R) / (2 * h);
            break;
        }
        case FormulaId::HalflineNeuSplit:
        case FormulaId::HalflineDirSplit:
            if (!(xi < 0)) throw std::invalid_argument("predict: splitting law needs xi < 0");
            r.predicted_count = predicted_splitting(
                f == FormulaId::HalflineNeuSplit ? BoundaryCondition::Neumann : BoundaryCondition::Dirichlet, xi, h);
            r.window = {xi, xi};
            break;
    }
    return r;
}

}  // namespace bandcount
