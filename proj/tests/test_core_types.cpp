#include <bandcount/core_types.hpp>

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

using namespace bandcount;

TEST(FiberProblem, StripMixedEndpoints) {
    auto const p = make_fiber_problem(Strip{1.0}, -37, 0.02, Variant::MixedDN);
    EXPECT_EQ(p.a, 0.0);
    EXPECT_EQ(p.b, 1.0);
    EXPECT_EQ(p.bc.left, BoundaryCondition::Dirichlet);
    EXPECT_EQ(p.bc.right, BoundaryCondition::Neumann);
    EXPECT_EQ(p.weight, Weight::Flat);
    EXPECT_DOUBLE_EQ(p.xi(), -0.74);
    EXPECT_DOUBLE_EQ(p.well_center(), 0.74);
}

TEST(FiberProblem, AnnulusRadialWeight) {
    auto const p = make_fiber_problem(Annulus{0.5}, 50, 0.005, Variant::PureNN);
    EXPECT_EQ(p.a, 0.5);
    EXPECT_EQ(p.b, 1.0);
    EXPECT_EQ(p.weight, Weight::Radial);
    EXPECT_EQ(p.bc.left, BoundaryCondition::Neumann);
    EXPECT_NEAR(p.well_center(), std::sqrt(0.5), 1e-15);
    EXPECT_DOUBLE_EQ(robin_slope(p, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(robin_slope(p, 1.0), 0.5);
}

TEST(FiberProblem, HalflineAndLineAreOpen) {
    auto const n = make_fiber_problem(Strip{1.0}, 0, 1.0, Variant::HalflineNeu, -4.0);
    EXPECT_TRUE(n.truncated());
    EXPECT_EQ(n.bc.left, BoundaryCondition::Neumann);
    EXPECT_DOUBLE_EQ(n.xi(), -4.0);
    auto const f = make_fiber_problem(Strip{1.0}, 3, 0.1, Variant::FullLine);
    EXPECT_TRUE(std::isinf(f.a) && std::isinf(f.b));
    EXPECT_NEAR(f.xi(), 0.3, 1e-15);
}

TEST(FiberProblem, RejectsBadInput) {
    EXPECT_THROW(make_fiber_problem(Strip{1.0}, 0, 0.0, Variant::MixedDN), std::invalid_argument);
    EXPECT_THROW(make_fiber_problem(Strip{1.0}, 0, -1.0, Variant::MixedDN), std::invalid_argument);
    EXPECT_THROW(make_fiber_problem(Strip{-1.0}, 0, 0.1, Variant::MixedDN), std::invalid_argument);
    EXPECT_THROW(make_fiber_problem(Annulus{1.5}, 1, 0.1, Variant::MixedDN), std::invalid_argument);
    EXPECT_THROW(make_fiber_problem(Annulus{0.5}, 1, 0.1, Variant::FullLine), std::invalid_argument);
    EXPECT_THROW(make_fiber_problem(Annulus{0.5}, 1, 0.1, Variant::MixedDN, 0.2), std::invalid_argument);
    EXPECT_THROW(make_custom_problem(1.0, 0.0, 0.1, {}, {0.0}), std::invalid_argument);
}

TEST(FiberProblem, PotentialMatchesClosedFormAtRandomPoints) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double const h = 0.001 + u(rng);
        long const m = static_cast<long>(u(rng) * 400) - 200;
        auto const s = make_fiber_problem(Strip{1.0}, m, h, Variant::MixedDN);
        double const t = u(rng);
        double const xs = t + static_cast<double>(m) * h;
        EXPECT_NEAR(potential_at(s, t), xs * xs, 1e-12 * (1 + xs * xs));

        auto const a = make_fiber_problem(Annulus{0.5}, m, h, Variant::MixedDN);
        double const r = 0.5 + 0.5 * u(rng);
        double const xa = static_cast<double>(m) * h / r - r / 2;
        EXPECT_NEAR(potential_at(a, r), xa * xa, 1e-12 * (1 + xa * xa));
        EXPECT_NEAR(effective_potential(a, r), xa * xa - h * h / (4 * r * r), 1e-12 * (1 + xa * xa));
    }
}

TEST(FiberProblem, CustomPotentialInterpolatesSamples) {
    auto const p = make_custom_problem(0.0, 2.0, 0.1, {}, {0.0, 1.0, 4.0});
    EXPECT_DOUBLE_EQ(potential_at(p, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(potential_at(p, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(potential_at(p, 1.5), 2.5);
    EXPECT_DOUBLE_EQ(potential_at(p, 2.0), 4.0);
}

TEST(Grid, RefinementHalvesSpacingExactly) {
    Grid const g{0.0, 1.0, 99};
    EXPECT_DOUBLE_EQ(g.spacing(), 0.01);
    auto const f = g.refined();
    EXPECT_EQ(f.n, 199);
    EXPECT_DOUBLE_EQ(f.spacing(), 0.005);
    for (long i = 0; i < g.n; ++i) EXPECT_DOUBLE_EQ(g.node(i), f.node(2 * i + 1));
}

TEST(Grid, MaxSpacingIsRespected) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        double const a = u(rng), b = a + 0.1 + u(rng), d = 0.001 + 0.05 * u(rng);
        auto const g = Grid::with_max_spacing(a, b, d);
        EXPECT_LE(g.spacing(), d * (1 + 1e-12));
        EXPECT_GE(g.n, 3);
    }
    EXPECT_THROW((Grid{0.0, 1.0, 2}.validate()), std::invalid_argument);
    EXPECT_THROW(Grid::with_max_spacing(0.0, 1.0, 0.0), std::invalid_argument);
}
