#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lobconvex/csv.hpp"
#include "lobconvex/error.hpp"
#include "lobconvex/ingest.hpp"
#include "lobconvex/pipeline.hpp"
#include "lobconvex/synthetic.hpp"
#include "test_support.hpp"

namespace lobconvex {
namespace {

using testing::simple_book;
using testing::slurp;

std::string snapshot_csv(const std::vector<BookSnapshot>& snaps) {
    std::ostringstream os;
    csv::write_snapshots(os, snaps);
    return os.str();
}

TEST(IngestSnapshots, CleanRowsAreAccepted) {
    std::vector<BookSnapshot> snaps;
    for (int i = 0; i < 1000; ++i) snaps.push_back(simple_book(10.0 * (i % 1440), "S" + std::to_string(i / 1440)));
    std::istringstream in(snapshot_csv(snaps));
    const auto r = ingest_snapshots(in);
    EXPECT_EQ(r.snapshots.size(), 1000u);
    EXPECT_TRUE(r.rejections.empty());
    EXPECT_EQ(r.total_rows, 1000u);
}

TEST(IngestSnapshots, InvalidRowsAreRejectedWithReasons) {
    auto nonmono = simple_book(10.0);
    nonmono.bid_quotes[1] = 10.005;
    auto crossed = simple_book(20.0);
    crossed.bid_quotes[0] = 10.03;
    auto late = simple_book(14400.0);
    std::string text = snapshot_csv({simple_book(0.0), nonmono, crossed, late});
    text += "S1,D1,abc,1,1,1,1,1,1,1,1,1,1,2,3,4,5,6,1,1,1,1,1\n";
    text += "S1,D1,30\n";
    text += "S1,D1,40,10,9.99,9.98,9.97,9.96,100,-5,1,1,1,10.02,10.03,10.04,10.05,10.06,1,1,1,1,1\n";
    std::istringstream in(text);
    const auto r = ingest_snapshots(in);
    EXPECT_EQ(r.total_rows, 7u);
    EXPECT_EQ(r.snapshots.size(), 1u);
    ASSERT_EQ(r.rejections.size(), 6u);
    EXPECT_EQ(r.rejections[0].row, 2u);
    EXPECT_EQ(r.rejections[0].reason, "NonMonotoneBid");
    EXPECT_EQ(r.rejections[1].reason, "CrossedBook");
    EXPECT_EQ(r.rejections[2].reason, "OutOfSession");
    EXPECT_EQ(r.rejections[3].reason, "ParseError");
    EXPECT_EQ(r.rejections[4].reason, "ParseError");
    EXPECT_EQ(r.rejections[5].reason, "ParseError");  // negative quantity
    EXPECT_EQ(r.snapshots.size() + r.rejections.size(), r.total_rows);
}

TEST(IngestSnapshots, OutputIsSortedByStockDayTime) {
    std::istringstream in(
        snapshot_csv({simple_book(50.0, "B", "D1"), simple_book(20.0, "A", "D2"), simple_book(10.0, "A", "D2"),
                      simple_book(90.0, "A", "D1")}));
    const auto r = ingest_snapshots(in);
    ASSERT_EQ(r.snapshots.size(), 4u);
    EXPECT_EQ(r.snapshots[0].day_id, "D1");
    EXPECT_EQ(r.snapshots[1].timestamp, 10.0);
    EXPECT_EQ(r.snapshots[2].timestamp, 20.0);
    EXPECT_EQ(r.snapshots[3].stock_id, "B");
}

TEST(IngestSnapshots, HeaderAndFileErrors) {
    std::istringstream bad("stock,day\nS,D\n");
    try {
        (void)ingest_snapshots(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadHeader);
    }
    try {
        (void)ingest_snapshots(std::filesystem::path("/nonexistent/snapshots.csv"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
    }
}

std::vector<IntervalWindow> two_windows() {
    return assemble_windows(std::vector<BookSnapshot>{simple_book(0.0), simple_book(300.0)});
}

TEST(AssembleTrades, SumsByAggressorAndUsesHalfOpenWindows) {
    const auto windows = two_windows();
    std::istringstream in(std::string(csv::kTradeHeader) +
                          "\nS1,D1,10,10.02,100,buy\nS1,D1,20,10.02,40,buy\nS1,D1,30,10.00,30,sell\n"
                          "S1,D1,300,10.02,70,buy\nS1,D1,299.5,10.00,5,sell\nS9,D1,5,10.0,1000,buy\n");
    const auto v = assemble_trades(in, windows);
    ASSERT_EQ(v.size(), windows.size());
    EXPECT_DOUBLE_EQ(v[0].buy, 140.0);
    EXPECT_DOUBLE_EQ(v[0].sell, 35.0);
    EXPECT_DOUBLE_EQ(v[1].buy, 70.0);  // the trade at exactly 300 s belongs to the later window
    EXPECT_DOUBLE_EQ(v[1].sell, 0.0);
    EXPECT_DOUBLE_EQ(v[2].buy, 0.0);
}

TEST(AssembleTrades, UnknownSideAndBadHeader) {
    const auto windows = two_windows();
    std::istringstream unknown(std::string(csv::kTradeHeader) + "\nS1,D1,10,10.02,100,cross\n");
    try {
        (void)assemble_trades(unknown, windows);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownSide);
    }
    std::istringstream header("a,b,c\n");
    EXPECT_THROW((void)assemble_trades(header, windows), Error);
}

class PipelineTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = testing::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
        synth::SynthConfig cfg;
        cfg.n_stocks = 2;
        cfg.n_days = 2;
        data_ = synth::generate(cfg);
        csv::write_dataset(data_, dir_ / "input");
    }

    RunConfig config(const std::string& out, bool with_trades) const {
        RunConfig c;
        c.snapshots = dir_ / "input" / "snapshots.csv";
        if (with_trades) c.trades = dir_ / "input" / "trades.csv";
        c.output_dir = dir_ / out;
        c.ar1_min_pairs = 20;
        return c;
    }

    static std::string manifest_value(const RunReport& r, const std::string& key) {
        for (const auto& [k, v] : r.manifest) {
            if (k == key) return v;
        }
        return "<absent>";
    }

    std::filesystem::path dir_;
    synth::SynthDataset data_;
};

TEST_F(PipelineTest, AllOutputsAndCounts) {
    const auto report = run_pipeline(config("out", true));
    EXPECT_EQ(manifest_value(report, "status"), "complete");
    EXPECT_EQ(manifest_value(report, "windows"), "192");
    EXPECT_EQ(manifest_value(report, "rows_total"), std::to_string(data_.snapshots.size()));
    EXPECT_EQ(manifest_value(report, "rows_rejected"), "0");
    EXPECT_EQ(manifest_value(report, "estimates"), "384");
    EXPECT_EQ(manifest_value(report, "discovery").rfind("done", 0), 0u);
    const std::vector<std::string> first{"rejections.csv", "intervals.csv", "convexity_panel.csv", "gaps.csv",
                                         "summary_log_convexity.csv"};
    for (std::size_t i = 0; i < first.size(); ++i) EXPECT_EQ(report.files[i], first[i]);
    EXPECT_EQ(report.files.back(), "manifest.csv");
    for (const auto& f : report.files) EXPECT_TRUE(std::filesystem::exists(dir_ / "out" / f)) << f;
    EXPECT_TRUE(std::filesystem::exists(dir_ / "out" / "discovery.csv"));
}

TEST_F(PipelineTest, WithoutTradesDiscoveryIsSkipped) {
    const auto report = run_pipeline(config("out", false));
    EXPECT_EQ(manifest_value(report, "discovery"), "skipped (no trades)");
    EXPECT_FALSE(std::filesystem::exists(dir_ / "out" / "discovery.csv"));
    EXPECT_NE(slurp(dir_ / "out" / "manifest.csv").find("discovery,skipped (no trades)"), std::string::npos);
}

TEST_F(PipelineTest, RerunsAreByteIdenticalAcrossDirectories) {
    const auto a = run_pipeline(config("a", true));
    const auto b = run_pipeline(config("b", true));
    ASSERT_EQ(a.files, b.files);
    for (const auto& f : a.files) EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
}

TEST_F(PipelineTest, StageFailureRemovesOutputsAndMarksManifest) {
    auto cfg = config("out", false);
    cfg.min_positive_lags = 40;  // more positive lags than the ACF can supply
    cfg.acf_max_lag = 39;
    try {
        (void)run_pipeline(cfg);
        FAIL() << "expected StageError";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "acf");
        EXPECT_NE(std::string(e.what()).find("InsufficientPositiveLags"), std::string::npos);
    }
    EXPECT_FALSE(std::filesystem::exists(dir_ / "out" / "intervals.csv"));
    const auto manifest = slurp(dir_ / "out" / "manifest.csv");
    EXPECT_NE(manifest.find("status,incomplete"), std::string::npos);
    EXPECT_NE(manifest.find("failed_stage,acf"), std::string::npos);
}

TEST_F(PipelineTest, RejectedRowsAreAccounted) {
    std::string text = slurp(dir_ / "input" / "snapshots.csv");
    text += "S001,D001,99999,10,9.99,9.98,9.97,9.96,1,1,1,1,1,10.02,10.03,10.04,10.05,10.06,1,1,1,1,1\n";
    std::ofstream(dir_ / "input" / "snapshots.csv", std::ios::binary | std::ios::trunc) << text;
    const auto report = run_pipeline(config("out", false));
    EXPECT_EQ(manifest_value(report, "rows_rejected"), "1");
    EXPECT_EQ(std::stoul(manifest_value(report, "rows_accepted")) + 1,
              std::stoul(manifest_value(report, "rows_total")));
    EXPECT_NE(slurp(dir_ / "out" / "rejections.csv").find("OutOfSession"), std::string::npos);
}

TEST_F(PipelineTest, MinDaysFilterDropsShortStocks) {
    auto cfg = config("out", false);
    cfg.min_days = 3;
    EXPECT_THROW((void)run_pipeline(cfg), StageError);  // nothing left to estimate
    cfg.min_days = 2;
    EXPECT_EQ(manifest_value(run_pipeline(cfg), "stocks"), "2");
}

TEST(RunConfig, InvalidSettingsAreRejected) {
    RunConfig c;
    c.output_dir = "x";
    c.acf_max_lag = 48;
    EXPECT_THROW(c.check(), Error);
    c.acf_max_lag = 10;
    c.windowing.snapshot_spacing_sec = 7;
    EXPECT_THROW(c.check(), Error);
}

TEST(RunConfig, CanonicalTextTracksSettingsNotPaths) {
    RunConfig a, b;
    a.snapshots = "/x/a.csv";
    b.snapshots = "/y/b.csv";
    EXPECT_EQ(a.canonical(), b.canonical());
    b.acf_max_lag = 20;
    EXPECT_NE(a.canonical(), b.canonical());
}

TEST(Fnv1a, ReferenceVectors) {
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
}

}  // namespace
}  // namespace lobconvex
