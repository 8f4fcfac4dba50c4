#include <bandcount/annulus.hpp>

#include <cmath>

#include <gtest/gtest.h>

using namespace bandcount;

TEST(Annulus, GroundBandAgainstLandauLevel) {
    // favorable: 2mh = 0.7 > R~^2 ~ 0.541; unfavorable: 2mh = 0.35
    EXPECT_LT(band0_annulus(0.5, 70, 0.005, Variant::MixedDN), 0.005);
    EXPECT_GT(band0_annulus(0.5, 35, 0.005, Variant::MixedDN), 0.005);
    EXPECT_LT(band0_annulus(0.5, 35, 0.005, Variant::PureNN), 0.005);
    EXPECT_THROW(band0_annulus(0.5, 35, 0.005, Variant::HalflineNeu), std::invalid_argument);
}

TEST(QuasiModeAnnulus, InteriorResidualIsSecondOrder) {
    for (double h : {0.01, 0.005}) {
        long const m = std::lround(0.7 / (2 * h));
        double const r16 = quasimode_residual(0.5, m, h, quasimode_grid(0.5, h, 16));
        Grid const g16 = quasimode_grid(0.5, h, 16);
        double const r32 = quasimode_residual(0.5, m, h, g16.refined());
        EXPECT_LE(r16, 1e-3) << h;
        EXPECT_GE(r16 / r32, 3.5) << h;
        EXPECT_LE(r16 / r32, 4.5) << h;
        EXPECT_GT(quasimode_residual(0.5, m, h, g16, true), 10 * r16) << h;
    }
}

TEST(QuasiModeAnnulus, PhaseMinimum) {
    QuasiMode const q(70, 0.005);
    EXPECT_NEAR(q.r_star, std::sqrt(0.7), 1e-15);
    EXPECT_NEAR(q.phi(q.r_star), q.phi_star(), 1e-14);
    for (double r : {0.5, 0.7, 0.9, 1.0}) EXPECT_GE(q.phi(r), q.phi_star());
    EXPECT_THROW(QuasiMode(0, 0.01), std::invalid_argument);
}

TEST(QuasiModeAnnulus, LaplaceNormApproachesOne) {
    auto const a = laplace_norm_check(0.5, 70, 0.005);
    auto const b = laplace_norm_check(0.5, 140, 0.0025);
    EXPECT_NEAR(a.ratio, 1.0, 0.1);
    EXPECT_NEAR(b.ratio, 1.0, 0.1);
    auto const c = laplace_norm_check(0.5, 35, 0.01);
    EXPECT_LE(std::abs(b.ratio - 1), 1.1 * std::abs(c.ratio - 1));
    EXPECT_NEAR(a.exact / a.predicted, a.ratio, 1e-12);
    EXPECT_THROW(laplace_norm_check(0.5, 10, 0.005, 0.05), std::invalid_argument);
}

TEST(QuasiModeAnnulus, BoundaryTermClosedForm) {
    for (double h : {0.01, 0.005}) {
        long const m = std::lround(0.8 / (2 * h));
        auto const b = annulus_boundary_term(m, h);
        EXPECT_LT(b.closed_form, 0.0);
        EXPECT_NEAR(b.discrete / b.closed_form, 1.0, 1e-2) << h;
    }
}

TEST(QuasiModeAnnulus, RayleighExcessBoundsTheSplitting) {
    for (long m : {66L, 75L, 85L}) {
        double const h = 0.005;
        double const eta = default_cutoff_eta(0.5, m, h);
        double const q = quasimode_rayleigh_annulus(0.5, m, h, eta);
        double const s = lattice_splitting_annulus(0.5, m, h, Variant::MixedDN);
        EXPECT_LT(q, 0.0) << m;
        EXPECT_GE(q, s) << m;
    }
    EXPECT_THROW(quasimode_rayleigh_annulus(0.5, 35, 0.005, 0.01), std::invalid_argument);
    EXPECT_THROW(quasimode_rayleigh_annulus(0.5, 70, 0.005, 0.5), std::invalid_argument);
}

TEST(AnnulusCount, NearLeadingTerm) {
    auto const dn = count_annulus(0.5, 0.01, Variant::MixedDN);
    auto const nn = count_annulus(0.5, 0.01, Variant::PureNN);
    EXPECT_GE(dn.ratio, 0.9);
    EXPECT_LE(dn.ratio, 1.1);
    EXPECT_GE(nn.ratio, 0.9);
    EXPECT_LE(nn.ratio, 1.1);
    EXPECT_LT(dn.count, nn.count);
    EXPECT_TRUE(second_band_violations(dn).empty());
    EXPECT_TRUE(second_band_violations(nn).empty());
}

TEST(AnnulusCount, NaiveAreaIsRefuted) {
    auto const r = count_annulus(0.5, 0.005, Variant::MixedDN);
    double const n = static_cast<double>(r.count) * 2 * pi() * 0.005;
    double const right = annulus_area(transition_radius(0.5));
    double const naive = annulus_area(0.75);
    // The two areas differ by under 5% at R = 0.5, so the count separates
    // them only relative to its own distance from the correct one.
    EXPECT_LE(std::abs(n - right) / right, 0.01);
    EXPECT_GE(std::abs(n - naive), 4 * std::abs(n - right));
}

TEST(Crossover, FollowsTransitionRadius) {
    auto const a = transition_scan(0.5, 0.01);
    auto const b = transition_scan(0.5, 0.005);
    EXPECT_LE(std::abs(static_cast<double>(a.empirical) - a.predicted), 3.0);
    EXPECT_LE(std::abs(static_cast<double>(b.empirical) - b.predicted), 3.0);
    EXPECT_NEAR(static_cast<double>(b.empirical) / static_cast<double>(a.empirical), 2.0, 0.15);
    EXPECT_GT(a.run_hi, a.run_lo);
}

TEST(Exterior, ScalingCovariance) {
    // r -> c r maps H_m(R, h) to c^2 H_m(R / c, h / c^2)
    long const m = 22;
    double const h = 0.05, c = 1.7;
    auto const p = exterior_dirichlet_problem(1.0, m, h);
    auto const q = exterior_dirichlet_problem(1.0 / c, m, h / (c * c));
    for (long k = 0; k < 3; ++k) {
        double const lp = eigenvalue(discretize<double>(p, default_grid(p)), k);
        double const lq = eigenvalue(discretize<double>(q, default_grid(q)), k);
        EXPECT_NEAR(lp, c * c * lq, 1e-8 * lp) << k;
    }
    EXPECT_THROW(exterior_dirichlet_problem(0.0, 1, 0.1), std::invalid_argument);
    EXPECT_THROW(exterior_dirichlet_problem(1.0, 0, 0.1), std::invalid_argument);
}

TEST(Temple, PositiveLowerBoundsInTheUnfavorableWindow) {
    struct Triple {
        double R;
        long m;
        double h;
    };
    for (Triple t : {Triple{0.3, 13, 0.01}, Triple{0.3, 25, 0.005}, Triple{0.5, 82, 0.0025}}) {
        auto const b = dirichlet_halfdisc_bounds(t.R, t.m, t.h);
        EXPECT_TRUE(b.temple.valid);
        EXPECT_GT(b.temple.lower, 0.0) << t.R << " " << t.m;
        EXPECT_LE(b.temple.lower, b.direct);
        EXPECT_GE(b.temple.upper, b.direct);
        EXPECT_GT(b.exponent, 0.0);
    }
}

TEST(Temple, UnitRadiusExample) {
    auto const b = dirichlet_halfdisc_bounds(1.0, 22, 0.05);
    EXPECT_TRUE(b.temple.valid);
    EXPECT_GT(b.temple.lower, 0.0);
    EXPECT_LE(b.temple.lower, b.direct);
    EXPECT_GE(b.temple.upper, b.direct);
    EXPECT_THROW(dirichlet_halfdisc_bounds(1.0, 2, 0.05), std::invalid_argument);
}
