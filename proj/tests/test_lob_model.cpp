#include <gtest/gtest.h>

#include <cmath>

#include "lobconvex/error.hpp"
#include "lobconvex/lob_model.hpp"
#include "test_support.hpp"

namespace lobconvex {
namespace {

using testing::make_book;
using testing::simple_book;

TEST(MidQuote, ArithmeticMeanOfBestQuotes) {
    auto s = simple_book();
    EXPECT_NEAR(mid_quote(s), 10.01, 1e-12);
    s.bid_quotes[0] = 9.98;
    s.ask_quotes[0] = 10.06;
    EXPECT_NEAR(mid_quote(s), 10.02, 1e-12);
}

TEST(SideDeviations, AskPointsMatchLogRatioOracle) {
    const auto s = simple_book();
    const auto pts = side_deviations(s, Side::Ask);
    ASSERT_EQ(pts.size(), kBookLevels);
    // ln(10.02 / 10.01) and ln(10.03 / 10.01), evaluated at 30 digits.
    EXPECT_DOUBLE_EQ(pts[0].depth, 100.0);
    EXPECT_DOUBLE_EQ(pts[1].depth, 300.0);
    EXPECT_NEAR(pts[0].deviation, 0.000998502329589522851, 1e-15);
    EXPECT_NEAR(pts[1].deviation, 0.001996008646714945645, 1e-15);
}

TEST(SideDeviations, BidDepthsAreCumulativeAndDeviationsIncrease) {
    const auto pts = side_deviations(simple_book(), Side::Bid);
    ASSERT_EQ(pts.size(), kBookLevels);
    const double want_depth[] = {100, 300, 600, 1000, 1500};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_DOUBLE_EQ(pts[i].depth, want_depth[i]);
        if (i > 0) {
            EXPECT_GT(pts[i].deviation, pts[i - 1].deviation);
        }
    }
}

TEST(SideDeviations, GeometricallySymmetricBookAgreesToSecondOrder) {
    // Quotes m e^{+-w}: the arithmetic mid is m cosh(w1), so the two sides agree
    // only up to O(w^2).
    const double m = 20.0;
    const std::array<double, kBookLevels> w{1e-3, 2e-3, 3e-3, 4e-3, 5e-3};
    std::array<double, kBookLevels> bid{}, ask{};
    for (std::size_t i = 0; i < kBookLevels; ++i) {
        bid[i] = m * std::exp(-w[i]);
        ask[i] = m * std::exp(w[i]);
    }
    const std::array<double, kBookLevels> depth{50, 60, 70, 80, 90};
    const auto s = make_book(bid, depth, ask, depth);
    const auto b = side_deviations(s, Side::Bid);
    const auto a = side_deviations(s, Side::Ask);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_DOUBLE_EQ(a[i].depth, b[i].depth);
        EXPECT_NEAR(a[i].deviation, b[i].deviation, 2.0 * w[0] * w[0]);
        EXPECT_NEAR(a[i].deviation, w[i], w[0] * w[0]);
    }
}

TEST(SideDeviations, PriceScaleInvariance) {
    const auto base = simple_book();
    auto twice = base;
    auto thrice = base;
    for (std::size_t i = 0; i < kBookLevels; ++i) {
        twice.bid_quotes[i] *= 2.0;
        twice.ask_quotes[i] *= 2.0;
        thrice.bid_quotes[i] *= 3.0;
        thrice.ask_quotes[i] *= 3.0;
    }
    for (Side side : {Side::Bid, Side::Ask}) {
        const auto p0 = side_deviations(base, side);
        const auto p2 = side_deviations(twice, side);
        const auto p3 = side_deviations(thrice, side);
        for (std::size_t i = 0; i < p0.size(); ++i) {
            // A power-of-two scale is exact in binary floating point.
            EXPECT_EQ(p0[i].deviation, p2[i].deviation);
            EXPECT_NEAR(p3[i].deviation, p0[i].deviation, 1e-12 * p0[i].deviation);
        }
    }
}

TEST(SideDeviations, QuoteAtMidIsDropped) {
    auto s = simple_book();
    s.bid_quotes[0] = 10.01;
    s.ask_quotes[0] = 10.01;  // locked book; mid sits on both best quotes
    EXPECT_EQ(side_deviations(s, Side::Bid).size(), kBookLevels - 1);
    EXPECT_EQ(side_deviations(s, Side::Ask).size(), kBookLevels - 1);
}

TEST(Validate, ReportsEachDefect) {
    EXPECT_EQ(validate(simple_book()), SnapshotDefect::None);

    auto s = simple_book();
    s.bid_quotes[4] = 0.0;
    EXPECT_EQ(validate(s), SnapshotDefect::NonPositivePrice);

    s = simple_book();
    s.ask_depths[2] = 0.0;
    EXPECT_EQ(validate(s), SnapshotDefect::NonPositiveDepth);

    s = simple_book();
    s.bid_quotes[1] = 10.001;  // bid_px_2 > bid_px_1
    EXPECT_EQ(validate(s), SnapshotDefect::NonMonotoneBid);

    s = simple_book();
    s.ask_quotes[3] = s.ask_quotes[2];
    EXPECT_EQ(validate(s), SnapshotDefect::NonMonotoneAsk);

    s = simple_book();
    s.bid_quotes[0] = 10.02;  // best bid == best ask
    EXPECT_EQ(validate(s), SnapshotDefect::CrossedBook);
}

TEST(Side, RoundTripsThroughText) {
    EXPECT_EQ(parse_side(to_string(Side::Bid)), Side::Bid);
    EXPECT_EQ(parse_side(to_string(Side::Ask)), Side::Ask);
    EXPECT_FALSE(parse_side("mid").has_value());
}

TEST(Windowing, HalfOpenIntervals) {
    const WindowingConfig cfg;
    EXPECT_EQ(cfg.slots_per_interval(), 30);
    EXPECT_EQ(interval_of(0.0, cfg), 1);
    EXPECT_EQ(interval_of(299.999, cfg), 1);
    EXPECT_EQ(interval_of(300.0, cfg), 2);
    EXPECT_EQ(interval_of(14399.0, cfg), 48);
    EXPECT_FALSE(interval_of(14400.0, cfg).has_value());
    EXPECT_FALSE(interval_of(-1.0, cfg).has_value());
    EXPECT_EQ(session_of(24), Session::Morning);
    EXPECT_EQ(session_of(25), Session::Afternoon);
}

TEST(Windowing, RejectsSpacingThatDoesNotDivideTheInterval) {
    WindowingConfig cfg;
    cfg.snapshot_spacing_sec = 7.0;
    try {
        cfg.check();
        FAIL() << "expected InvalidConfig";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
    }
}

TEST(AssembleWindows, EveryDayGetsAllWindowsSorted) {
    std::vector<BookSnapshot> snaps{simple_book(310.0, "B", "D2"), simple_book(5.0, "A", "D1"),
                                    simple_book(0.0, "B", "D1")};
    const auto windows = assemble_windows(snaps);
    ASSERT_EQ(windows.size(), 3u * 48u);
    EXPECT_EQ(windows[0].stock_id, "A");
    EXPECT_EQ(windows[48].stock_id, "B");
    EXPECT_EQ(windows[48].day_id, "D1");
    EXPECT_EQ(windows[96].day_id, "D2");
    EXPECT_EQ(windows[96 + 1].t, 2);
    EXPECT_EQ(windows[96 + 1].snapshots.size(), 1u);
    EXPECT_TRUE(windows[96].snapshots.empty());
}

TEST(AssembleWindows, NearestSlotAndLaterSnapshotWins) {
    auto early = simple_book(9.0);   // nearest slot 1
    auto late = simple_book(11.0);   // also slot 1
    late.ask_depths[0] = 999;
    auto other = simple_book(14.0);  // slot 1 as well (1.4 rounds to 1)
    other.ask_depths[0] = 555;
    auto next = simple_book(15.0);   // 1.5 rounds up to slot 2
    std::vector<BookSnapshot> snaps{late, early, other, next};
    const auto windows = assemble_windows(snaps);
    ASSERT_EQ(windows[0].snapshots.size(), 2u);
    EXPECT_DOUBLE_EQ(windows[0].snapshots[0].timestamp, 14.0);
    EXPECT_DOUBLE_EQ(windows[0].snapshots[0].ask_depths[0], 555.0);
    EXPECT_DOUBLE_EQ(windows[0].snapshots[1].timestamp, 15.0);
}

TEST(AssembleWindows, TimestampTieGoesToLaterInput) {
    auto first = simple_book(20.0);
    auto second = simple_book(20.0);
    second.bid_depths[0] = 777;
    std::vector<BookSnapshot> snaps{first, second};
    const auto windows = assemble_windows(snaps);
    ASSERT_EQ(windows[0].snapshots.size(), 1u);
    EXPECT_DOUBLE_EQ(windows[0].snapshots[0].bid_depths[0], 777.0);
}

IntervalWindow window_of(std::size_t n_snapshots) {
    IntervalWindow w{"S1", "D1", 1, {}};
    for (std::size_t i = 0; i < n_snapshots; ++i) w.snapshots.push_back(simple_book(10.0 * i));
    return w;
}

TEST(BuildSideCurve, PoolsAllLevels) {
    const auto curve = build_side_curve(window_of(30), Side::Ask);
    EXPECT_EQ(curve.points.size(), 150u);
    EXPECT_EQ(curve.side, Side::Ask);
}

TEST(BuildSideCurve, TooFewSnapshotsIsInsufficientData) {
    const auto w = window_of(10);
    EXPECT_TRUE(is_missing(w));
    try {
        (void)build_side_curve(w, Side::Bid);
        FAIL() << "expected InsufficientData";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
    }
}

TEST(BuildSideCurve, DropsLevelsQuotedAtTheMid) {
    auto w = window_of(30);
    for (std::size_t i : {3u, 11u, 27u}) {
        w.snapshots[i].bid_quotes[0] = 10.01;
        w.snapshots[i].ask_quotes[0] = 10.01;
    }
    EXPECT_EQ(build_side_curve(w, Side::Bid).points.size(), 147u);
}

TEST(BuildSideCurve, PointThresholdApplies) {
    auto w = window_of(20);
    for (auto& s : w.snapshots) {
        s.bid_quotes[0] = s.ask_quotes[0];  // locked: level 1 sits on the mid
    }
    CurveConfig cfg;
    cfg.min_points = 81;
    EXPECT_THROW((void)build_side_curve(w, Side::Ask, cfg), Error);
    cfg.min_points = 80;
    EXPECT_EQ(build_side_curve(w, Side::Ask, cfg).points.size(), 80u);
}

}  // namespace
}  // namespace lobconvex
