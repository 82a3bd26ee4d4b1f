#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lobconvex/convexity.hpp"
#include "lobconvex/lob_model.hpp"

namespace lobconvex {

/// Per-interval panel row. Estimates are absent when that side produced no fit.
struct IntervalRecord {
    std::string stock_id;
    std::string day_id;
    int t = 0;
    std::optional<double> c_bid;
    std::optional<double> c_ask;
    std::optional<double> W_bid;
    std::optional<double> W_ask;
    double mid = 0.0;         // mean of the window's snapshot mid-quotes
    std::optional<double> r;  // log(mid_t / mid_{t-1}); absent at t = 1 or after a gap
    double g = 0.0;           // realized variance of the snapshot mids
    std::optional<double> v_buy;
    std::optional<double> v_sell;
};

struct IntervalStats {
    double mid = 0.0;
    std::optional<double> r;
    double g = 0.0;
};

/// Sum of squared consecutive log changes of `mids`; 0 for fewer than two values.
[[nodiscard]] double realized_variance(std::span<const double> mids);

/// Window-mean mid, return against `prev_mid`, and realized variance over the
/// window's consecutive snapshots. Throws Error(InsufficientData) on an empty window.
[[nodiscard]] IntervalStats interval_stats(const IntervalWindow& window, std::optional<double> prev_mid);

struct WindowVolumes {
    double buy = 0.0;
    double sell = 0.0;
};

/// One record per non-missing window, in window order. `volumes`, when given,
/// is aligned with `windows`. The return needs interval t-1 of the same day to be
/// non-missing.
[[nodiscard]] std::vector<IntervalRecord> build_interval_records(
    std::span<const IntervalWindow> windows, const EstimatePanel& panel, const CurveConfig& config,
    std::optional<std::span<const WindowVolumes>> volumes = std::nullopt);

/// Values of one (stock, day) indexed by interval: values[i] belongs to t = i + 1.
struct DaySeries {
    std::string stock_id;
    std::string day_id;
    std::vector<std::optional<double>> values;
};

/// log c per (stock, day) for one side; unusable estimates (see usable_log_c) are gaps.
[[nodiscard]] std::vector<DaySeries> log_convexity_series(std::span<const ConvexityEstimate> panel, Side side,
                                                          int intervals_per_day = 48,
                                                          bool include_degenerate = false);

/// c itself per (stock, day) for one side; degenerate estimates are gaps unless included.
[[nodiscard]] std::vector<DaySeries> convexity_series(std::span<const ConvexityEstimate> panel, Side side,
                                                      int intervals_per_day = 48, bool include_degenerate = false);

/// kappa_t = x_t - x_{t-1} within each day; a gap at t leaves kappa undefined at t and t+1.
[[nodiscard]] std::vector<DaySeries> kappa_series(std::span<const DaySeries> log_c);

/// Cross-sectional mean of per-(stock, day) lag correlations.
/// values[i] is the coefficient at lags[i] = i + 1, NaN when no series contributed.
struct AcfCurve {
    std::vector<int> lags;
    std::vector<double> values;
    std::vector<std::size_t> n_contributing;
    std::size_t n_series = 0;
};

/// For every series and lag, the Pearson correlation of (x_t, x_{t-lag}) over the
/// pairs where both are present. A series contributes to a lag only with at least
/// `min_pairs` pairs and non-zero variance on both legs. Throws Error(NoSeries) on
/// an empty panel and Error(InvalidArgument) if max_lag < 1.
[[nodiscard]] AcfCurve panel_acf(std::span<const DaySeries> series, int max_lag, std::size_t min_pairs = 5);

/// Power-law decay fit v = a * lag^(-b) through log v + log lag = alpha - beta * log lag.
struct LongMemoryFit {
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double alpha_p = 0.0;
    double beta_p = 0.0;
    double r_squared = 0.0;
    std::size_t n_lags_used = 0;
    std::size_t n_lags_dropped = 0;  // non-positive or undefined coefficients
    [[nodiscard]] bool long_memory() const { return b < 1.0; }
};

/// Throws Error(InsufficientPositiveLags) with fewer than `min_lags` positive values.
[[nodiscard]] LongMemoryFit fit_long_memory(const AcfCurve& acf, std::size_t min_lags = 5);

/// Divides each value by the day mean tau.
[[nodiscard]] std::vector<double> normalize_day(std::span<const double> values);

struct IntradayProfile {
    std::vector<double> values;  // values[i] belongs to t = i + 1
    std::size_t n_days = 0;
};

/// Mean across complete days of c_t / tau, tau the day mean. Days with any gap
/// (or tau = 0) are skipped. Throws Error(NoCompleteDays) when nothing is left.
[[nodiscard]] IntradayProfile intraday_profile(std::span<const DaySeries> c_series);

}  // namespace lobconvex
