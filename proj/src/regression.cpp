#include "lobconvex/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include <Eigen/Dense>

#include "lobconvex/error.hpp"
#include "lobconvex/stats.hpp"

namespace lobconvex {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Pivot threshold of the column-scaled QR below which the design is rank deficient.
constexpr double kRankTolerance = 1e-10;
}  // namespace

std::size_t RegressionResult::index_of(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error(ErrorCode::InvalidArgument, "no coefficient named " + name);
    return static_cast<std::size_t>(it - names.begin());
}

RegressionResult ols(std::span<const double> y, std::span<const Regressor> regressors,
                     const std::optional<std::string>& intercept) {
    const std::size_t n = y.size();
    const std::size_t k = regressors.size() + (intercept ? 1 : 0);
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "no regressors");
    for (const auto& r : regressors) {
        if (r.values.size() != n)
            throw Error(ErrorCode::InvalidArgument, "regressor " + r.name + " has " + std::to_string(r.values.size()) +
                                                        " rows, y has " + std::to_string(n));
    }
    if (n <= k) {
        throw Error(ErrorCode::TooFewObservations,
                    std::to_string(n) + " observations for " + std::to_string(k) + " coefficients");
    }

    RegressionResult res;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    Eigen::Index col = 0;
    if (intercept) {
        X.col(col++).setOnes();
        res.names.push_back(*intercept);
    }
    for (const auto& r : regressors) {
        X.col(col++) = Eigen::Map<const Eigen::VectorXd>(r.values.data(), static_cast<Eigen::Index>(n));
        res.names.push_back(r.name);
    }
    const Eigen::Map<const Eigen::VectorXd> Y(y.data(), static_cast<Eigen::Index>(n));

    // Unit-norm columns so the rank test does not depend on regressor units.
    Eigen::VectorXd scale = X.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j) {
        if (!(scale(j) > 0.0) || !std::isfinite(scale(j)))
            throw Error(ErrorCode::RankDeficient, "column " + res.names[static_cast<std::size_t>(j)] + " is zero");
    }
    const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < static_cast<Eigen::Index>(k)) {
        throw Error(ErrorCode::RankDeficient,
                    "design has rank " + std::to_string(qr.rank()) + " < " + std::to_string(k));
    }

    const Eigen::VectorXd beta_scaled = qr.solve(Y);
    const Eigen::VectorXd beta = beta_scaled.cwiseQuotient(scale);

    // (Xs'Xs)^-1 = P R^-1 R^-T P'
    const auto ki = static_cast<Eigen::Index>(k);
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(ki, ki).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd R_inv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(ki, ki));
    const Eigen::MatrixXd unpermuted = R_inv * R_inv.transpose();
    const Eigen::MatrixXd cov_scaled = qr.colsPermutation() * unpermuted * qr.colsPermutation().transpose();

    const Eigen::VectorXd resid = Y - X * beta;
    res.rss = resid.squaredNorm();
    if (intercept) {
        const double y_mean = Y.mean();
        res.tss = (Y.array() - y_mean).square().sum();
    } else {
        res.tss = Y.squaredNorm();
    }
    res.r_squared = res.tss > 0.0 ? std::clamp(1.0 - res.rss / res.tss, 0.0, 1.0) : 0.0;
    res.n_obs = n;
    res.df_resid = n - k;

    const double sigma2 = res.rss / static_cast<double>(res.df_resid);
    for (std::size_t j = 0; j < k; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double est = beta(jj);
        const double se = std::sqrt(sigma2 * cov_scaled(jj, jj)) / scale(jj);
        double t = 0.0;
        if (se > 0.0) {
            t = est / se;
        } else {
            t = est == 0.0 ? kNaN : std::copysign(std::numeric_limits<double>::infinity(), est);
        }
        res.estimates.push_back(est);
        res.std_errors.push_back(se);
        res.t_stats.push_back(t);
        res.p_values.push_back(stats::two_sided_t_pvalue(t, static_cast<double>(res.df_resid)));
    }
    return res;
}

PanelRegressionSummary summarize_panel(std::vector<StockRegression> per_stock, std::vector<SkippedStock> skipped) {
    std::sort(per_stock.begin(), per_stock.end(),
              [](const auto& a, const auto& b) { return a.stock_id < b.stock_id; });
    std::sort(skipped.begin(), skipped.end(), [](const auto& a, const auto& b) { return a.stock_id < b.stock_id; });

    PanelRegressionSummary summary;
    if (!per_stock.empty()) {
        const auto& names = per_stock.front().result.names;
        for (std::size_t j = 0; j < names.size(); ++j) {
            CoefficientSummary c;
            c.name = names[j];
            double sum = 0.0;
            for (const auto& s : per_stock) {
                const double est = s.result.estimates[j];
                const double p = s.result.p_values[j];
                sum += est;
                if (est < 0.0 && p < 0.05) ++c.n_sig_neg_5;
                if (est < 0.0 && p < 0.10) ++c.n_sig_neg_10;
                if (est > 0.0 && p < 0.05) ++c.n_sig_pos_5;
                if (est > 0.0 && p < 0.10) ++c.n_sig_pos_10;
            }
            c.mean = sum / static_cast<double>(per_stock.size());
            summary.coefficients.push_back(std::move(c));
        }
        double r2 = 0.0;
        for (const auto& s : per_stock) r2 += s.result.r_squared;
        summary.mean_r_squared = r2 / static_cast<double>(per_stock.size());
    } else {
        summary.mean_r_squared = kNaN;
    }
    summary.per_stock = std::move(per_stock);
    summary.skipped = std::move(skipped);
    return summary;
}

PanelRegressionSummary fit_panel(std::span<const RegressionDataset> datasets, const std::string& intercept,
                                 std::size_t min_obs) {
    std::vector<StockRegression> fits;
    std::vector<SkippedStock> skipped;
    for (const auto& d : datasets) {
        const std::size_t k = d.regressors.size() + 1;
        const std::size_t needed = min_obs == 0 ? k + 2 : min_obs;
        if (d.y.size() < needed) {
            skipped.push_back({d.stock_id, d.y.size(), "fewer than " + std::to_string(needed) + " observations"});
            continue;
        }
        fits.push_back({d.stock_id, ols(d.y, d.regressors, intercept)});
    }
    return summarize_panel(std::move(fits), std::move(skipped));
}

std::vector<RegressionDataset> ar1_kappa_design(std::span<const DaySeries> kappa) {
    std::map<std::string, RegressionDataset> by_stock;
    for (const auto& day : kappa) {
        auto& d = by_stock[day.stock_id];
        if (d.regressors.empty()) {
            d.stock_id = day.stock_id;
            d.regressors.push_back({"b", {}});
        }
        for (std::size_t t = 1; t < day.values.size(); ++t) {
            if (day.values[t] && day.values[t - 1]) {
                d.y.push_back(*day.values[t]);
                d.regressors[0].values.push_back(*day.values[t - 1]);
            }
        }
    }
    std::vector<RegressionDataset> out;
    for (auto& [id, d] : by_stock) out.push_back(std::move(d));
    return out;
}

PanelRegressionSummary ar1_kappa(std::span<const DaySeries> kappa, std::size_t min_pairs) {
    const auto design = ar1_kappa_design(kappa);
    return fit_panel(design, "a", std::max<std::size_t>(min_pairs, 3));
}

namespace {

using RecordKey = std::tuple<std::string, std::string, int>;

std::map<RecordKey, const IntervalRecord*> index_records(std::span<const IntervalRecord> records) {
    std::map<RecordKey, const IntervalRecord*> index;
    for (const auto& r : records) index[{r.stock_id, r.day_id, r.t}] = &r;
    return index;
}

const IntervalRecord* find_record(const std::map<RecordKey, const IntervalRecord*>& index, const IntervalRecord& r,
                                  int t) {
    const auto it = index.find({r.stock_id, r.day_id, t});
    return it == index.end() ? nullptr : it->second;
}

std::optional<double> positive_log_c(const IntervalRecord& r, Side side) {
    const auto& c = side == Side::Bid ? r.c_bid : r.c_ask;
    if (!c || !(*c > 0.0)) return std::nullopt;
    return std::log(*c);
}

}  // namespace

std::vector<RegressionDataset> dynamic_adjustment_design(std::span<const IntervalRecord> records, Side side,
                                                         const DynamicOptions& options) {
    const auto index = index_records(records);
    std::map<std::string, RegressionDataset> by_stock;

    for (const auto& [key, rec] : index) {
        auto& d = by_stock[rec->stock_id];
        if (d.regressors.empty()) {
            d.stock_id = rec->stock_id;
            d.regressors = {{"beta", {}}, {"gamma", {}}, {"lambda", {}}, {"eta", {}}};
        }
        const auto* prev = find_record(index, *rec, rec->t - 1);
        const auto* prev2 = find_record(index, *rec, rec->t - 2);
        if (prev == nullptr || prev2 == nullptr) continue;
        const auto lc = positive_log_c(*rec, side);
        const auto lc1 = positive_log_c(*prev, side);
        const auto lc2 = positive_log_c(*prev2, side);
        if (!lc || !lc1 || !lc2) continue;
        const IntervalRecord& exog = options.lag_exogenous ? *prev : *rec;
        if (!exog.r) continue;

        d.y.push_back(*lc);
        d.regressors[0].values.push_back(*lc1);
        d.regressors[1].values.push_back(*lc1 - *lc2);
        d.regressors[2].values.push_back(*exog.r);
        d.regressors[3].values.push_back(exog.g);
    }
    std::vector<RegressionDataset> out;
    for (auto& [id, d] : by_stock) out.push_back(std::move(d));
    return out;
}

PanelRegressionSummary dynamic_adjustment(std::span<const IntervalRecord> records, Side side,
                                          const DynamicOptions& options) {
    const auto design = dynamic_adjustment_design(records, side, options);
    return fit_panel(design, "alpha", options.min_obs);
}

double book_return(const IntervalRecord& r) {
    if (!r.v_buy || !r.v_sell) throw Error(ErrorCode::MissingVolumes, "record has no initiative volumes");
    if (!r.W_bid || !r.W_ask || !r.c_bid || !r.c_ask)
        throw Error(ErrorCode::DegenerateEstimate, "record lacks a fitted book on one side");
    if (*r.c_bid < 0.0 || *r.c_ask < 0.0) throw Error(ErrorCode::DegenerateEstimate, "negative convexity");
    if (*r.v_buy < 0.0 || *r.v_sell < 0.0) throw Error(ErrorCode::InvalidArgument, "negative volume");

    const auto impact = [](double W, double volume, double c) { return volume == 0.0 ? 0.0 : W * std::pow(volume, c); };
    return impact(*r.W_ask, *r.v_buy, *r.c_ask) - impact(*r.W_bid, *r.v_sell, *r.c_bid);
}

std::vector<RegressionDataset> price_discovery_design(std::span<const IntervalRecord> records) {
    const auto index = index_records(records);
    std::map<std::string, RegressionDataset> by_stock;

    for (const auto& [key, rec] : index) {
        auto& d = by_stock[rec->stock_id];
        if (d.regressors.empty()) {
            d.stock_id = rec->stock_id;
            d.regressors = {{"beta", {}}, {"gamma", {}}, {"lambda", {}}};
        }
        const auto* prev = find_record(index, *rec, rec->t - 1);
        if (prev == nullptr || !prev->r) continue;
        double rbook = 0.0;
        try {
            rbook = book_return(*prev);
        } catch (const Error&) {
            continue;
        }
        d.y.push_back(std::log(rec->mid));
        d.regressors[0].values.push_back(std::log(prev->mid));
        d.regressors[1].values.push_back(rbook);
        d.regressors[2].values.push_back(*prev->r);
    }
    std::vector<RegressionDataset> out;
    for (auto& [id, d] : by_stock) out.push_back(std::move(d));
    return out;
}

PanelRegressionSummary price_discovery(std::span<const IntervalRecord> records, std::size_t min_obs) {
    const auto design = price_discovery_design(records);
    return fit_panel(design, "alpha", min_obs);
}

}  // namespace lobconvex
