/**
 * @file core_types.hpp
 * @brief Shared vocabulary: geometries, boundary conditions, fiber problems,
 *        grids and result records.
 *
 * Everything here is an immutable value type after construction.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bandcount {

/// Raised when a solver cannot honour its contract (under-resolution,
/// non-convergence, window misconfiguration).
class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Geometry

struct Strip {
    double L = 1.0;
};

struct Annulus {
    double R = 0.5;  // outer radius is 1
};

using Geometry = std::variant<Strip, Annulus>;

inline void validate(Geometry const& g) {
    if (auto const* s = std::get_if<Strip>(&g)) {
        if (!(s->L > 0) || !std::isfinite(s->L)) throw std::invalid_argument("Strip: L must be positive");
    } else {
        auto const& a = std::get<Annulus>(g);
        if (!(a.R > 0 && a.R < 1)) throw std::invalid_argument("Annulus: R must lie in (0,1)");
    }
}

inline bool is_annulus(Geometry const& g) { return std::holds_alternative<Annulus>(g); }

// ---------------------------------------------------------------------------
// Boundary conditions

enum class BoundaryCondition { Dirichlet, Neumann };

struct BoundaryPair {
    BoundaryCondition left = BoundaryCondition::Dirichlet;
    BoundaryCondition right = BoundaryCondition::Neumann;
    friend bool operator==(BoundaryPair const&, BoundaryPair const&) = default;
};

inline char bc_letter(BoundaryCondition c) { return c == BoundaryCondition::Dirichlet ? 'D' : 'N'; }

// ---------------------------------------------------------------------------
// Fiber problems

enum class PotentialKind { StripHarmonic, AnnulusRadial, HalflineHarmonic, Custom };
enum class Weight { Flat, Radial };
enum class Variant { MixedDN, PureNN, HalflineNeu, HalflineDir, FullLine };

/// Samples of a potential on a uniform partition of [a,b], linearly
/// interpolated. Test fixtures only.
struct SampledPotential {
    std::vector<double> values;
    friend bool operator==(SampledPotential const&, SampledPotential const&) = default;
};

/**
 * A 1D Schrödinger eigenproblem -h^2 u'' + V u = lambda u (flat weight) or its
 * radial counterpart with inner product \int . r dr.
 *
 * Infinite endpoints mark a truncated line / half-line; the solver resolves
 * them through `resolved_interval`.
 */
struct FiberProblem {
    double a = 0.0;
    double b = 1.0;
    double h = 1.0;
    long m = 0;
    PotentialKind potential = PotentialKind::StripHarmonic;
    Weight weight = Weight::Flat;
    BoundaryPair bc;
    /// Shift of the harmonic well for HalflineHarmonic, V = (t + xi)^2.
    double xi_free = 0.0;
    SampledPotential samples;

    bool truncated() const { return !std::isfinite(a) || !std::isfinite(b); }

    /// xi = m h for strip fibers; the free shift for half-line/line problems.
    double xi() const {
        return potential == PotentialKind::HalflineHarmonic ? xi_free : static_cast<double>(m) * h;
    }

    /// Centre of the potential well: t = -xi (flat) or r_* = sqrt(2 m h) (radial).
    double well_center() const {
        if (potential == PotentialKind::AnnulusRadial) return m > 0 ? std::sqrt(2.0 * m * h) : 0.0;
        return -xi();
    }

    friend bool operator==(FiberProblem const&, FiberProblem const&) = default;
};

/// Potential before any Liouville transform, evaluated in the scalar type Real.
template <class Real>
Real potential_at(FiberProblem const& p, Real const& t) {
    switch (p.potential) {
        case PotentialKind::StripHarmonic: {
            Real s = t + Real(p.m) * Real(p.h);
            return s * s;
        }
        case PotentialKind::HalflineHarmonic: {
            Real s = t + Real(p.xi_free);
            return s * s;
        }
        case PotentialKind::AnnulusRadial: {
            Real s = Real(p.m) * Real(p.h) / t - t / 2;
            return s * s;
        }
        case PotentialKind::Custom: {
            auto const& v = p.samples.values;
            if (v.empty()) return Real(0);
            if (v.size() == 1) return Real(v.front());
            double const x = (static_cast<double>(t) - p.a) / (p.b - p.a) * static_cast<double>(v.size() - 1);
            double const xc = std::clamp(x, 0.0, static_cast<double>(v.size() - 1));
            auto const i = std::min(static_cast<std::size_t>(xc), v.size() - 2);
            double const w = xc - static_cast<double>(i);
            return Real((1 - w) * v[i] + w * v[i + 1]);
        }
    }
    return Real(0);
}

/// Potential of the flat-measure problem solved by every discretization:
/// for radial weight, w = sqrt(r) u turns the operator into
/// -h^2 w'' + (V - h^2/(4 r^2)) w.
template <class Real>
Real effective_potential(FiberProblem const& p, Real const& t) {
    Real v = potential_at(p, t);
    if (p.weight == Weight::Radial) v -= Real(p.h) * Real(p.h) / (4 * t * t);
    return v;
}

/// Robin coefficient s in w'(endpoint) = s w(endpoint) for a Neumann end of a
/// radial problem (u' = 0 with w = sqrt(r) u); zero for flat problems.
inline double robin_slope(FiberProblem const& p, double endpoint) {
    return p.weight == Weight::Radial ? 1.0 / (2.0 * endpoint) : 0.0;
}

inline void validate(FiberProblem const& p) {
    if (!(p.h > 0) || !std::isfinite(p.h)) throw std::invalid_argument("FiberProblem: h must be positive");
    if (!(p.a < p.b)) throw std::invalid_argument("FiberProblem: interval must satisfy a < b");
    if (std::isnan(p.a) || std::isnan(p.b)) throw std::invalid_argument("FiberProblem: NaN endpoint");
    if (p.weight == Weight::Radial && !(p.a > 0))
        throw std::invalid_argument("FiberProblem: radial weight needs an interval inside (0, inf)");
}

/**
 * Builds the fiber operator for angular momentum m.
 *
 * Strip fibers live on (0,L) with V = (t + m h)^2, annulus fibers on (R,1)
 * with V = (m h / r - r / 2)^2 and the r dr weight. Half-line variants put the
 * boundary at the left end (t = 0, or r = R for the annulus) and leave the
 * right end open; FullLine leaves both ends open. For the line/half-line
 * variants on a strip the well shift is `xi` when given, else m h.
 */
inline FiberProblem make_fiber_problem(Geometry const& geometry, long m, double h, Variant variant,
                                       std::optional<double> xi = std::nullopt) {
    if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("make_fiber_problem: h must be positive");
    validate(geometry);
    constexpr double inf = std::numeric_limits<double>::infinity();
    using BC = BoundaryCondition;

    FiberProblem p;
    p.h = h;
    p.m = m;
    if (auto const* s = std::get_if<Strip>(&geometry)) {
        p.weight = Weight::Flat;
        switch (variant) {
            case Variant::MixedDN:
                p.a = 0, p.b = s->L, p.bc = {BC::Dirichlet, BC::Neumann};
                p.potential = PotentialKind::StripHarmonic;
                break;
            case Variant::PureNN:
                p.a = 0, p.b = s->L, p.bc = {BC::Neumann, BC::Neumann};
                p.potential = PotentialKind::StripHarmonic;
                break;
            case Variant::HalflineNeu:
            case Variant::HalflineDir:
                p.a = 0, p.b = inf;
                p.bc = {variant == Variant::HalflineNeu ? BC::Neumann : BC::Dirichlet, BC::Dirichlet};
                p.potential = PotentialKind::HalflineHarmonic;
                p.xi_free = xi.value_or(static_cast<double>(m) * h);
                break;
            case Variant::FullLine:
                p.a = -inf, p.b = inf, p.bc = {BC::Dirichlet, BC::Dirichlet};
                p.potential = PotentialKind::HalflineHarmonic;
                p.xi_free = xi.value_or(static_cast<double>(m) * h);
                break;
        }
    } else {
        auto const& an = std::get<Annulus>(geometry);
        if (xi) throw std::invalid_argument("make_fiber_problem: annulus fibers take no free shift");
        p.weight = Weight::Radial;
        p.potential = PotentialKind::AnnulusRadial;
        switch (variant) {
            case Variant::MixedDN: p.a = an.R, p.b = 1.0, p.bc = {BC::Dirichlet, BC::Neumann}; break;
            case Variant::PureNN: p.a = an.R, p.b = 1.0, p.bc = {BC::Neumann, BC::Neumann}; break;
            case Variant::HalflineDir: p.a = an.R, p.b = inf, p.bc = {BC::Dirichlet, BC::Dirichlet}; break;
            case Variant::HalflineNeu: p.a = an.R, p.b = inf, p.bc = {BC::Neumann, BC::Dirichlet}; break;
            case Variant::FullLine:
                throw std::invalid_argument("make_fiber_problem: FullLine is not an annulus variant");
        }
    }
    return p;
}

/// Flat problem with a sampled potential, for fixtures.
inline FiberProblem make_custom_problem(double a, double b, double h, BoundaryPair bc, std::vector<double> samples) {
    FiberProblem p;
    p.a = a, p.b = b, p.h = h, p.m = 0;
    p.potential = PotentialKind::Custom;
    p.weight = Weight::Flat;
    p.bc = bc;
    p.samples.values = std::move(samples);
    validate(p);
    return p;
}

// ---------------------------------------------------------------------------
// Grid

/// Uniform grid with n interior nodes a + (i+1) * spacing, i = 0..n-1.
struct Grid {
    double a = 0.0;
    double b = 1.0;
    long n = 3;

    double spacing() const { return (b - a) / static_cast<double>(n + 1); }
    double node(long i) const { return a + static_cast<double>(i + 1) * spacing(); }

    /// Same interval, spacing halved exactly.
    Grid refined() const { return Grid{a, b, 2 * n + 1}; }

    static Grid with_max_spacing(double a, double b, double max_spacing) {
        if (!(max_spacing > 0)) throw std::invalid_argument("Grid: spacing must be positive");
        auto const cells = static_cast<long>(std::ceil((b - a) / max_spacing - 1e-12));
        Grid g{a, b, std::max<long>(cells - 1, 3)};
        g.validate();
        return g;
    }

    void validate() const {
        if (n < 3) throw std::invalid_argument("Grid: need at least 3 interior nodes");
        if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("Grid: bad interval");
    }
};

// ---------------------------------------------------------------------------
// Results

struct SpectrumResult {
    std::vector<double> eigenvalues;
    std::vector<double> error_estimates;
    std::vector<long> grid_sizes_used;
    FiberProblem problem;
};

struct MomentumSample {
    double lambda0 = 0.0;
    bool below = false;
    bool ambiguous = false;
    /// Discrete lambda0 minus the discrete Landau level on the same lattice
    /// (NaN when the fiber was classified from lambda0 alone).
    double splitting = std::numeric_limits<double>::quiet_NaN();
    double lambda1 = std::numeric_limits<double>::quiet_NaN();
    friend bool operator==(MomentumSample const&, MomentumSample const&) = default;
};

struct CountResult {
    double h = 0.0;
    Geometry geometry = Strip{};
    Variant variant = Variant::MixedDN;
    long m_min = 0;
    long m_max = 0;
    std::map<long, MomentumSample> ground_values;
    long count = 0;
    double predicted = 0.0;
    double ratio = 0.0;
    std::vector<long> ambiguous_m;
};

inline double pi() { return std::numbers::pi; }

}  // namespace bandcount
