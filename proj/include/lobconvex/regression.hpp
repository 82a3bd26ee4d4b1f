#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lobconvex/ols.hpp"
#include "lobconvex/timeseries_stats.hpp"

namespace lobconvex {

struct StockRegression {
    std::string stock_id;
    RegressionResult result;
};

struct CoefficientSummary {
    std::string name;
    double mean = 0.0;
    std::size_t n_sig_neg_5 = 0;
    std::size_t n_sig_neg_10 = 0;
    std::size_t n_sig_pos_5 = 0;
    std::size_t n_sig_pos_10 = 0;
};

struct SkippedStock {
    std::string stock_id;
    std::size_t n_obs = 0;
    std::string reason;
};

/// Cross-stock view of one equation: per-stock fits, mean coefficients,
/// sign-conditioned significance counts at 5% and 10%, and mean R^2.
struct PanelRegressionSummary {
    std::vector<StockRegression> per_stock;  // sorted by stock_id
    std::vector<CoefficientSummary> coefficients;
    double mean_r_squared = 0.0;
    std::vector<SkippedStock> skipped;
};

/// Per-stock design for one equation.
struct RegressionDataset {
    std::string stock_id;
    std::vector<double> y;
    std::vector<Regressor> regressors;
};

/// Fits every dataset (intercept named `intercept`), skipping those with fewer
/// than `min_obs` rows. OLS failures other than the row count propagate.
[[nodiscard]] PanelRegressionSummary fit_panel(std::span<const RegressionDataset> datasets,
                                               const std::string& intercept, std::size_t min_obs);

[[nodiscard]] PanelRegressionSummary summarize_panel(std::vector<StockRegression> per_stock,
                                                     std::vector<SkippedStock> skipped);

/// kappa_t = a + b kappa_{t-1} per stock, pairs pooled over that stock's days
/// (never across a day boundary or a gap).
[[nodiscard]] std::vector<RegressionDataset> ar1_kappa_design(std::span<const DaySeries> kappa);
[[nodiscard]] PanelRegressionSummary ar1_kappa(std::span<const DaySeries> kappa, std::size_t min_pairs = 100);

struct DynamicOptions {
    /// Use r_{t-1} and g_{t-1} instead of the contemporaneous r_t and g_t.
    bool lag_exogenous = false;
    /// Stocks with fewer rows are skipped; 0 means the number of coefficients + 2.
    std::size_t min_obs = 0;
};

/// log c_t = alpha + beta log c_{t-1} + gamma kappa_{t-1} + lambda r_t + eta g_t,
/// with kappa_{t-1} = log c_{t-1} - log c_{t-2}. Rows need intervals t-2, t-1, t of
/// one day with positive c on `side`.
[[nodiscard]] std::vector<RegressionDataset> dynamic_adjustment_design(std::span<const IntervalRecord> records,
                                                                       Side side, const DynamicOptions& options = {});
[[nodiscard]] PanelRegressionSummary dynamic_adjustment(std::span<const IntervalRecord> records, Side side,
                                                        const DynamicOptions& options = {});

/// W_ask * V_buy^c_ask - W_bid * V_sell^c_bid; a zero volume contributes zero.
/// Throws Error(MissingVolumes) or Error(DegenerateEstimate) (missing fit or c < 0).
[[nodiscard]] double book_return(const IntervalRecord& record);

/// log p_t = alpha + beta log p_{t-1} + gamma r_book_{t-1} + lambda r_{t-1}, p the window mid.
[[nodiscard]] std::vector<RegressionDataset> price_discovery_design(std::span<const IntervalRecord> records);
[[nodiscard]] PanelRegressionSummary price_discovery(std::span<const IntervalRecord> records,
                                                     std::size_t min_obs = 0);

}  // namespace lobconvex
