#include <bandcount/predictions.hpp>

#include <cmath>

#include <gtest/gtest.h>

using namespace bandcount;

TEST(Predict, StripCounts) {
    EXPECT_NEAR(predict(FormulaId::StripDN, Strip{1.0}, 0.01).predicted_count, 50.0, 1e-12);
    EXPECT_NEAR(predict(FormulaId::StripNN, Strip{1.0}, 0.01).predicted_count, 100.0, 1e-12);
    for (double h : {0.02, 0.005, 0.0013}) {
        EXPECT_NEAR(predict(FormulaId::StripDN, Strip{1.7}, h).predicted_count * 2,
                    predict(FormulaId::StripNN, Strip{1.7}, h).predicted_count, 1e-9);
    }
}

TEST(Predict, AnnulusCountsAndTransition) {
    auto const r = predict(FormulaId::AnnulusDN, Annulus{0.5}, 0.005);
    double const t = 0.75 / (2 * std::log(2.0));
    EXPECT_NEAR(transition_radius_sq(0.5), t, 1e-14);
    EXPECT_NEAR(r.predicted_count, 100 - 0.75 / (0.02 * std::log(2.0)), 1e-9);
    EXPECT_NEAR(r.predicted_count * 2 * 0.005, 0.4590, 5e-4);
    ASSERT_TRUE(r.transition.has_value());
    EXPECT_NEAR(*r.transition, t / 0.01, 1e-9);
    EXPECT_NEAR(r.predicted_count, annulus_area(transition_radius(0.5)) / (2 * pi() * 0.005), 1e-9);
    EXPECT_NEAR(predict(FormulaId::AnnulusNN, Annulus{0.5}, 0.005).predicted_count, 75.0, 1e-12);
}

TEST(Predict, TransitionRadiusLiesInsideTheAnnulus) {
    for (int i = 1; i < 100; ++i) {
        double const R = i / 100.0;
        double const t = transition_radius_sq(R);
        EXPECT_GT(t, R * R);
        EXPECT_LT(t, 1.0);
        double const h = 0.01;
        EXPECT_LT(predict(FormulaId::AnnulusDN, Annulus{R}, h).predicted_count, annulus_area(R) / (2 * pi() * h));
    }
}

TEST(Predict, PhaseComparisonChangesSignAtTransition) {
    double const R = 0.4;
    double const t = transition_radius_sq(R);
    auto diff = [&](double rs2) { return phase(1.0, std::sqrt(rs2)) - phase(R, std::sqrt(rs2)); };
    EXPECT_NEAR(diff(t), 0.0, 1e-13);
    EXPECT_GT(diff(t - 0.05), 0.0);
    EXPECT_LT(diff(t + 0.05), 0.0);
}

TEST(Predict, SplittingLawSigns) {
    double const n = predicted_splitting(BoundaryCondition::Neumann, -4.0, 1.0);
    double const d = predicted_splitting(BoundaryCondition::Dirichlet, -4.0, 1.0);
    EXPECT_LT(n, 0.0);
    EXPECT_GT(d, 0.0);
    EXPECT_NEAR(-n, 4 * std::exp(-16.0) / std::sqrt(pi()), 1e-20);
    EXPECT_NEAR(predict(FormulaId::HalflineDirSplit, Strip{1.0}, 1.0, -4.0).predicted_count, d, 1e-22);
}

TEST(Predict, Windows) {
    auto const w = strip_windows(1.0, 0.01, 0.1);
    EXPECT_DOUBLE_EQ(w.I_eps.lo, -0.9);
    EXPECT_DOUBLE_EQ(w.I_eps.hi, -0.6);
    EXPECT_DOUBLE_EQ(w.J_eps.lo, -0.4);
    EXPECT_DOUBLE_EQ(w.J_eps.hi, -0.1);
    EXPECT_NEAR(w.rough_window.lo, -1.2, 1e-12);
    EXPECT_THROW(strip_windows(1.0, 0.01, 0.3), std::invalid_argument);
    auto const i = annulus_window_I(0.5, 0.005, annulus_default_eps(0.5));
    auto const j = annulus_window_J(0.5, 0.005, annulus_default_eps(0.5));
    EXPECT_LT(j.hi, i.lo);
    EXPECT_GT(j.lo, 0.25 / 0.01);
}

TEST(Predict, RejectsMismatchedInput) {
    EXPECT_THROW(predict(FormulaId::StripDN, Annulus{0.5}, 0.01), std::invalid_argument);
    EXPECT_THROW(predict(FormulaId::AnnulusDN, Strip{1.0}, 0.01), std::invalid_argument);
    EXPECT_THROW(predict(FormulaId::StripDN, Strip{1.0}, 0.0), std::invalid_argument);
    EXPECT_THROW(predict(FormulaId::HalflineNeuSplit, Strip{1.0}, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(transition_radius_sq(1.0), std::invalid_argument);
}

TEST(Predict, FormulaNames) {
    EXPECT_EQ(to_string(FormulaId::StripDN), "strip-dn");
    EXPECT_EQ(to_string(FormulaId::AnnulusNN), "annulus-nn");
}
