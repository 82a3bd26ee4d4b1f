#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lobconvex/convexity.hpp"
#include "lobconvex/regression.hpp"
#include "lobconvex/synthetic.hpp"
#include "lobconvex/timeseries_stats.hpp"

namespace lobconvex::csv {

inline constexpr std::string_view kSnapshotHeader =
    "stock_id,day_id,ts_sec,"
    "bid_px_1,bid_px_2,bid_px_3,bid_px_4,bid_px_5,"
    "bid_qty_1,bid_qty_2,bid_qty_3,bid_qty_4,bid_qty_5,"
    "ask_px_1,ask_px_2,ask_px_3,ask_px_4,ask_px_5,"
    "ask_qty_1,ask_qty_2,ask_qty_3,ask_qty_4,ask_qty_5";
inline constexpr std::string_view kTradeHeader = "stock_id,day_id,ts_sec,price,volume,aggressor_side";
inline constexpr std::string_view kTruthHeader = "stock_id,day_id,t,side,true_W,true_c";
inline constexpr std::string_view kPanelHeader = "stock_id,day_id,t,side,W,c,rho,r_squared,n_points,degenerate";
inline constexpr std::string_view kGapHeader = "stock_id,day_id,t,side,reason,detail";
inline constexpr std::string_view kRecordHeader = "stock_id,day_id,t,c_bid,c_ask,W_bid,W_ask,mid,r,g,v_buy,v_sell";
inline constexpr std::string_view kSummaryHeader = "coef,mean,n_sig_neg_5,n_sig_neg_10,n_sig_pos_5,n_sig_pos_10";

/// 17 significant digits (round-trips every double); NaN and infinities print empty.
[[nodiscard]] std::string format_double(double value);
[[nodiscard]] std::string format_optional(const std::optional<double>& value);

/// Splits on commas (no quoting), dropping a trailing '\r'.
[[nodiscard]] std::vector<std::string_view> split_line(std::string_view line);

void write_snapshots(std::ostream& out, std::span<const BookSnapshot> snapshots);
void write_trades(std::ostream& out, std::span<const synth::Trade> trades);
void write_truth(std::ostream& out, std::span<const synth::TruthRow> truth);

void write_panel(std::ostream& out, std::span<const ConvexityEstimate> estimates);
void write_gaps(std::ostream& out, std::span<const GapRecord> gaps);
void write_records(std::ostream& out, std::span<const IntervalRecord> records);

/// variable,mean,std_dev,median,min,max,p_value,n
void write_log_convexity_summary(std::ostream& out, const LogConvexitySummary& summary);

/// lag,value
void write_acf(std::ostream& out, const AcfCurve& acf);
/// term,estimate,p_value,r_squared rows for alpha, beta and the equation, then
/// the implied a, b and the long-memory verdict.
void write_long_memory(std::ostream& out, const LongMemoryFit& fit);
/// t,value
void write_profile(std::ostream& out, const IntradayProfile& profile);

/// Summary table with a trailing mean_r2 row.
void write_regression_summary(std::ostream& out, const PanelRegressionSummary& summary);
/// stock_id,coef,estimate,std_error,t_stat,p_value,r_squared,n_obs
void write_regression_per_stock(std::ostream& out, const PanelRegressionSummary& summary);

/// Writes snapshots.csv, trades.csv and truth.csv into `dir` (created if needed).
/// trades.csv is omitted when the dataset has no trades and `always_write_trades` is false.
void write_dataset(const synth::SynthDataset& data, const std::filesystem::path& dir,
                   bool always_write_trades = false);

}  // namespace lobconvex::csv
