#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lobconvex/convexity.hpp"
#include "lobconvex/error.hpp"
#include "test_support.hpp"

namespace lobconvex {
namespace {

using testing::rel_err;

SideCurve curve_of(std::initializer_list<std::pair<double, double>> pts) {
    SideCurve c;
    for (const auto& [d, w] : pts) c.points.push_back({d, w});
    return c;
}

/// Textbook simple-regression slope/intercept from raw sums, no centring.
std::pair<double, double> loglog_oracle(const SideCurve& curve) {
    long double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : curve.points) {
        const long double x = std::log(static_cast<long double>(p.depth));
        const long double y = std::log(static_cast<long double>(p.deviation));
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const long double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const long double intercept = (sy - slope * sx) / n;
    return {static_cast<double>(intercept), static_cast<double>(slope)};
}

TEST(FitPowerLaw, ExactLinearLaw) {
    const auto e = fit_power_law(curve_of({{100, 0.01}, {200, 0.02}, {300, 0.03}}));
    EXPECT_LT(rel_err(e.W, 1e-4), 1e-12);
    EXPECT_LT(rel_err(e.c, 1.0), 1e-12);
    EXPECT_NEAR(e.r_squared, 1.0, 1e-12);
    EXPECT_EQ(e.n_points, 3u);
    EXPECT_FALSE(e.degenerate);
}

TEST(FitPowerLaw, SquareRootLawMatchesOracle) {
    const auto curve = curve_of({{100, 0.01}, {400, 0.02}, {900, 0.03}});
    const auto e = fit_power_law(curve);
    const auto [intercept, slope] = loglog_oracle(curve);
    EXPECT_LT(rel_err(e.W, 1e-3), 1e-12);
    EXPECT_LT(rel_err(e.c, 0.5), 1e-12);
    EXPECT_NEAR(std::log(e.W), intercept, 1e-12);
    EXPECT_NEAR(e.c, slope, 1e-12);
    EXPECT_NEAR(e.r_squared, 1.0, 1e-12);
}

TEST(FitPowerLaw, NoisyCurveMatchesOracleAndRhoIsInverseW) {
    std::mt19937_64 gen(11);
    std::normal_distribution<double> noise(0.0, 0.2);
    for (int rep = 0; rep < 20; ++rep) {
        SideCurve curve;
        for (int i = 0; i < 150; ++i) {
            const double d = 100.0 * (1 + i % 5) * (1 + i / 5);
            curve.points.push_back({d, 2e-5 * std::pow(d, 0.6) * std::exp(noise(gen))});
        }
        const auto e = fit_power_law(curve);
        const auto [intercept, slope] = loglog_oracle(curve);
        EXPECT_NEAR(e.c, slope, 1e-10);
        EXPECT_NEAR(std::log(e.W), intercept, 1e-10);
        EXPECT_NEAR(e.rho * e.W, 1.0, 1e-15);
        EXPECT_GT(e.r_squared, 0.0);
        EXPECT_LE(e.r_squared, 1.0);
    }
}

TEST(FitPowerLaw, AllDepthsEqualIsSingular) {
    try {
        (void)fit_power_law(curve_of({{100, 0.01}, {100, 0.02}, {100, 0.03}}));
        FAIL() << "expected SingularFit";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularFit);
    }
}

TEST(FitPowerLaw, RejectsBadInput) {
    EXPECT_THROW((void)fit_power_law(curve_of({{100, 0.01}})), Error);
    EXPECT_THROW((void)fit_power_law(curve_of({{100, 0.01}, {0, 0.02}})), Error);
    EXPECT_THROW((void)fit_power_law(curve_of({{100, 0.01}, {200, 0.0}})), Error);
}

TEST(FitPowerLaw, NegativeSlopeIsDegenerate) {
    const auto e = fit_power_law(curve_of({{100, 0.03}, {200, 0.02}, {300, 0.01}}));
    EXPECT_LT(e.c, 0.0);
    EXPECT_TRUE(e.degenerate);
    EXPECT_GT(e.W, 0.0);
    EXPECT_FALSE(usable_log_c(e).has_value());
    EXPECT_FALSE(usable_log_c(e, true).has_value());  // log of a negative c never exists
}

TEST(FitPowerLaw, DepthScaleCovariance) {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> noise(0.0, 0.3);
    SideCurve base;
    for (int i = 0; i < 120; ++i) {
        const double d = 50.0 + 37.0 * i;
        base.points.push_back({d, 1e-4 * std::pow(d, 0.8) * std::exp(noise(gen))});
    }
    auto scaled = base;
    for (auto& p : scaled.points) p.depth *= 7.0;
    const auto a = fit_power_law(base);
    const auto b = fit_power_law(scaled);
    EXPECT_NEAR(b.c, a.c, 1e-12 * std::fabs(a.c));
    EXPECT_LT(rel_err(b.W, a.W * std::pow(7.0, -a.c)), 1e-10);
}

TEST(EstimatePanel, FullDayGivesTwoEstimatesPerWindow) {
    const auto data = synth::generate(testing::exact_config(1e-5, 0.7));
    const auto windows = assemble_windows(data.snapshots);
    const auto panel = estimate_panel(windows);
    EXPECT_EQ(panel.estimates.size(), 96u);
    EXPECT_TRUE(panel.gaps.empty());
    EXPECT_EQ(panel.estimates[0].side, Side::Bid);
    EXPECT_EQ(panel.estimates[1].side, Side::Ask);
    EXPECT_EQ(panel.estimates[95].t, 48);
}

TEST(EstimatePanel, MissingWindowBecomesOneGap) {
    auto data = synth::generate(testing::exact_config(1e-5, 0.7));
    // Keep only 10 snapshots of window 5.
    std::vector<BookSnapshot> kept;
    for (const auto& s : data.snapshots) {
        const bool in_w5 = s.timestamp >= 1200.0 && s.timestamp < 1500.0;
        if (!in_w5 || s.timestamp < 1300.0) kept.push_back(s);
    }
    const auto windows = assemble_windows(kept);
    const auto panel = estimate_panel(windows);
    EXPECT_EQ(panel.estimates.size(), 94u);
    ASSERT_EQ(panel.gaps.size(), 1u);
    EXPECT_EQ(panel.gaps[0].t, 5);
    EXPECT_FALSE(panel.gaps[0].side.has_value());
    EXPECT_EQ(panel.gaps[0].reason, ErrorCode::InsufficientData);
}

TEST(EstimatePanel, NoiselessConstantTruthIsRecovered) {
    for (const auto& [W, c] : {std::pair{1e-3, 0.5}, std::pair{1e-4, 1.0}, std::pair{2e-6, 1.4}}) {
        const auto data = synth::generate(testing::exact_config(W, c));
        const auto panel = estimate_panel(assemble_windows(data.snapshots));
        ASSERT_EQ(panel.estimates.size(), data.truth.size());
        for (std::size_t i = 0; i < panel.estimates.size(); ++i) {
            const auto& e = panel.estimates[i];
            const auto& t = data.truth[i];
            ASSERT_EQ(e.t, t.t);
            ASSERT_EQ(e.side, t.side);
            EXPECT_LT(rel_err(e.c, t.c), 1e-10);
            EXPECT_LT(rel_err(e.W, t.W), 1e-10);
            EXPECT_NEAR(e.r_squared, 1.0, 1e-10);
        }
    }
}

ConvexityEstimate est(Side side, double c, int t = 1) {
    ConvexityEstimate e;
    e.stock_id = "S";
    e.day_id = "D";
    e.t = t;
    e.side = side;
    e.c = c;
    e.W = 1e-4;
    e.rho = 1e4;
    e.degenerate = c < 0.0;
    return e;
}

TEST(SummarizeLogConvexity, ConstantPanelHasUndefinedTest) {
    std::vector<ConvexityEstimate> panel;
    for (int t = 1; t <= 10; ++t) {
        panel.push_back(est(Side::Bid, 1.0, t));
        panel.push_back(est(Side::Ask, 1.0, t));
    }
    const auto s = summarize_log_convexity(panel);
    for (const auto* d : {&s.log_c_bid, &s.log_c_ask, &s.difference}) {
        EXPECT_EQ(d->mean, 0.0);
        EXPECT_EQ(d->median, 0.0);
        EXPECT_EQ(d->std_dev, 0.0);
        EXPECT_TRUE(std::isnan(d->p_value));
        EXPECT_EQ(d->n, 10u);
    }
}

TEST(SummarizeLogConvexity, MeanWithinThreeStandardErrors) {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> z(0.0, 0.4);
    std::vector<ConvexityEstimate> panel;
    for (int t = 1; t <= 2000; ++t) {
        panel.push_back(est(Side::Bid, std::exp(-0.6 + z(gen)), t));
        panel.push_back(est(Side::Ask, std::exp(-0.6 + z(gen)), t));
    }
    const auto s = summarize_log_convexity(panel);
    const double se = 0.4 / std::sqrt(2000.0);
    EXPECT_NEAR(s.log_c_bid.mean, -0.6, 3 * se);
    EXPECT_NEAR(s.log_c_ask.mean, -0.6, 3 * se);
    EXPECT_LT(s.log_c_bid.p_value, 1e-10);
}

TEST(SummarizeLogConvexity, DifferenceUsesWindowsWithBothSides) {
    std::vector<ConvexityEstimate> panel{est(Side::Bid, 2.0, 1), est(Side::Ask, 1.0, 1), est(Side::Bid, 1.0, 2),
                                         est(Side::Ask, -0.5, 2), est(Side::Bid, 4.0, 3)};
    const auto s = summarize_log_convexity(panel);
    EXPECT_EQ(s.log_c_bid.n, 3u);
    EXPECT_EQ(s.log_c_ask.n, 1u);
    ASSERT_EQ(s.difference.n, 1u);
    EXPECT_NEAR(s.difference.mean, std::log(2.0), 1e-15);
}

TEST(SummarizeLogConvexity, EmptySideThrows) {
    std::vector<ConvexityEstimate> panel{est(Side::Bid, 1.0)};
    try {
        (void)summarize_log_convexity(panel);
        FAIL() << "expected EmptyPanel";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyPanel);
    }
}

}  // namespace
}  // namespace lobconvex
