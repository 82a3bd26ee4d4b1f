#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lobconvex/error.hpp"
#include "lobconvex/lob_model.hpp"
#include "lobconvex/stats.hpp"

namespace lobconvex {

/// Fitted shape law w = W * D^c for one side of one interval.
struct ConvexityEstimate {
    std::string stock_id;
    std::string day_id;
    int t = 0;
    Side side = Side::Bid;
    double W = 0.0;
    double c = 0.0;
    double rho = 0.0;        // initial density, 1 / W
    double r_squared = 0.0;  // in log-log space
    std::size_t n_points = 0;
    bool degenerate = false;  // c < 0, i.e. the non-negativity constraint is violated
};

/// OLS of log w on log D (log D centred before solving). Throws
/// Error(InsufficientData) below `min_points` points and Error(SingularFit) when
/// every D is equal. Only `side` and the fit fields are filled in.
[[nodiscard]] ConvexityEstimate fit_power_law(const SideCurve& curve, std::size_t min_points = 2);

/// A window (or one side of it) that produced no estimate.
struct GapRecord {
    std::string stock_id;
    std::string day_id;
    int t = 0;
    std::optional<Side> side;  // empty when the whole window is missing
    ErrorCode reason = ErrorCode::InsufficientData;
    std::string detail;
};

struct EstimatePanel {
    std::vector<ConvexityEstimate> estimates;  // sorted by (stock, day, t, side) with bid before ask
    std::vector<GapRecord> gaps;               // same order
};

/// Fits both sides of every window. Per-window failures become gap records and
/// never abort the panel.
[[nodiscard]] EstimatePanel estimate_panel(std::span<const IntervalWindow> windows, const CurveConfig& config = {});

/// log c usable downstream: c must be positive, and degenerate fits are skipped
/// unless `include_degenerate` is set.
[[nodiscard]] std::optional<double> usable_log_c(const ConvexityEstimate& e, bool include_degenerate = false);

struct LogConvexitySummary {
    stats::Description log_c_bid;
    stats::Description log_c_ask;
    stats::Description difference;  // log c_bid - log c_ask over windows with both sides
};

/// Mean, standard deviation, median, extremes and zero-mean t-test p-value for
/// log c per side and for the bid-ask difference. Throws Error(EmptyPanel) if any
/// of the three samples is empty.
[[nodiscard]] LogConvexitySummary summarize_log_convexity(std::span<const ConvexityEstimate> panel,
                                                          bool include_degenerate = false);

}  // namespace lobconvex
