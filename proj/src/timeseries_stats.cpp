#include "lobconvex/timeseries_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "lobconvex/error.hpp"
#include "lobconvex/ols.hpp"
#include "lobconvex/stats.hpp"

namespace lobconvex {

double realized_variance(std::span<const double> mids) {
    double g = 0.0;
    for (std::size_t i = 1; i < mids.size(); ++i) {
        const double step = std::log(mids[i] / mids[i - 1]);
        g += step * step;
    }
    return g;
}

IntervalStats interval_stats(const IntervalWindow& window, std::optional<double> prev_mid) {
    if (window.snapshots.empty()) throw Error(ErrorCode::InsufficientData, "interval_stats on an empty window");
    std::vector<double> mids;
    mids.reserve(window.snapshots.size());
    for (const auto& s : window.snapshots) mids.push_back(mid_quote(s));

    IntervalStats out;
    out.mid = stats::mean(mids);
    out.g = realized_variance(mids);
    if (prev_mid) out.r = std::log(out.mid / *prev_mid);
    return out;
}

std::vector<IntervalRecord> build_interval_records(std::span<const IntervalWindow> windows,
                                                   const EstimatePanel& panel, const CurveConfig& config,
                                                   std::optional<std::span<const WindowVolumes>> volumes) {
    if (volumes && volumes->size() != windows.size())
        throw Error(ErrorCode::InvalidArgument, "volume list is not aligned with the windows");

    using Key = std::tuple<std::string, std::string, int>;
    std::map<Key, std::pair<const ConvexityEstimate*, const ConvexityEstimate*>> fits;
    for (const auto& e : panel.estimates) {
        auto& slot = fits[{e.stock_id, e.day_id, e.t}];
        (e.side == Side::Bid ? slot.first : slot.second) = &e;
    }

    std::vector<IntervalRecord> records;
    // Previous window of the same (stock, day) and its mid, if it was usable.
    const IntervalWindow* prev_window = nullptr;
    std::optional<double> prev_mid;

    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto& w = windows[i];
        const bool same_day_successor = prev_window != nullptr && prev_window->stock_id == w.stock_id &&
                                        prev_window->day_id == w.day_id && prev_window->t + 1 == w.t;
        if (!same_day_successor) prev_mid.reset();
        prev_window = &w;

        if (is_missing(w, config)) {
            prev_mid.reset();
            continue;
        }

        const auto s = interval_stats(w, prev_mid);
        IntervalRecord rec;
        rec.stock_id = w.stock_id;
        rec.day_id = w.day_id;
        rec.t = w.t;
        rec.mid = s.mid;
        rec.r = s.r;
        rec.g = s.g;
        if (auto it = fits.find({w.stock_id, w.day_id, w.t}); it != fits.end()) {
            if (const auto* b = it->second.first) {
                rec.c_bid = b->c;
                rec.W_bid = b->W;
            }
            if (const auto* a = it->second.second) {
                rec.c_ask = a->c;
                rec.W_ask = a->W;
            }
        }
        if (volumes) {
            rec.v_buy = (*volumes)[i].buy;
            rec.v_sell = (*volumes)[i].sell;
        }
        records.push_back(std::move(rec));
        prev_mid = s.mid;
    }
    return records;
}

namespace {

template <typename ValueOf>
std::vector<DaySeries> series_by_day(std::span<const ConvexityEstimate> panel, Side side, int intervals_per_day,
                                     ValueOf value_of) {
    std::map<std::pair<std::string, std::string>, DaySeries> days;
    for (const auto& e : panel) {
        auto& d = days[{e.stock_id, e.day_id}];
        if (d.values.empty()) {
            d.stock_id = e.stock_id;
            d.day_id = e.day_id;
            d.values.assign(static_cast<std::size_t>(intervals_per_day), std::nullopt);
        }
        if (e.side != side || e.t < 1 || e.t > intervals_per_day) continue;
        d.values[static_cast<std::size_t>(e.t - 1)] = value_of(e);
    }
    std::vector<DaySeries> out;
    out.reserve(days.size());
    for (auto& [key, d] : days) out.push_back(std::move(d));
    return out;
}

}  // namespace

std::vector<DaySeries> log_convexity_series(std::span<const ConvexityEstimate> panel, Side side,
                                            int intervals_per_day, bool include_degenerate) {
    return series_by_day(panel, side, intervals_per_day,
                         [&](const ConvexityEstimate& e) { return usable_log_c(e, include_degenerate); });
}

std::vector<DaySeries> convexity_series(std::span<const ConvexityEstimate> panel, Side side, int intervals_per_day,
                                        bool include_degenerate) {
    return series_by_day(panel, side, intervals_per_day, [&](const ConvexityEstimate& e) -> std::optional<double> {
        if (e.degenerate && !include_degenerate) return std::nullopt;
        return e.c;
    });
}

std::vector<DaySeries> kappa_series(std::span<const DaySeries> log_c) {
    std::vector<DaySeries> out;
    out.reserve(log_c.size());
    for (const auto& day : log_c) {
        DaySeries k{day.stock_id, day.day_id, std::vector<std::optional<double>>(day.values.size())};
        for (std::size_t i = 1; i < day.values.size(); ++i) {
            if (day.values[i] && day.values[i - 1]) k.values[i] = *day.values[i] - *day.values[i - 1];
        }
        out.push_back(std::move(k));
    }
    return out;
}

AcfCurve panel_acf(std::span<const DaySeries> series, int max_lag, std::size_t min_pairs) {
    if (series.empty()) throw Error(ErrorCode::NoSeries, "panel_acf needs at least one series");
    if (max_lag < 1) throw Error(ErrorCode::InvalidArgument, "max_lag must be at least 1");

    AcfCurve acf;
    acf.n_series = series.size();
    std::vector<double> lead, lag_values;
    for (int lag = 1; lag <= max_lag; ++lag) {
        double sum = 0.0;
        std::size_t contributing = 0;
        for (const auto& s : series) {
            lead.clear();
            lag_values.clear();
            for (std::size_t t = static_cast<std::size_t>(lag); t < s.values.size(); ++t) {
                const auto& now = s.values[t];
                const auto& before = s.values[t - static_cast<std::size_t>(lag)];
                if (now && before) {
                    lead.push_back(*now);
                    lag_values.push_back(*before);
                }
            }
            if (lead.size() < std::max<std::size_t>(min_pairs, 2)) continue;
            const double rho = stats::pearson(lead, lag_values);
            if (std::isnan(rho)) continue;
            sum += rho;
            ++contributing;
        }
        acf.lags.push_back(lag);
        acf.values.push_back(contributing > 0 ? sum / static_cast<double>(contributing)
                                              : std::numeric_limits<double>::quiet_NaN());
        acf.n_contributing.push_back(contributing);
    }
    return acf;
}

LongMemoryFit fit_long_memory(const AcfCurve& acf, std::size_t min_lags) {
    std::vector<double> y;
    Regressor log_lag{"log_lag", {}};
    LongMemoryFit fit;
    for (std::size_t i = 0; i < acf.values.size(); ++i) {
        const double v = acf.values[i];
        if (!(v > 0.0)) {
            ++fit.n_lags_dropped;
            continue;
        }
        const double ll = std::log(static_cast<double>(acf.lags[i]));
        y.push_back(std::log(v) + ll);
        log_lag.values.push_back(ll);
    }
    fit.n_lags_used = y.size();
    if (y.size() < std::max<std::size_t>(min_lags, 3)) {
        throw Error(ErrorCode::InsufficientPositiveLags,
                    std::to_string(y.size()) + " positive lags, need " + std::to_string(min_lags));
    }

    const auto res = ols(y, std::span<const Regressor>(&log_lag, 1), std::string("alpha"));
    fit.alpha = res.estimates[0];
    fit.beta = -res.estimates[1];
    fit.alpha_p = res.p_values[0];
    fit.beta_p = res.p_values[1];
    fit.r_squared = res.r_squared;
    fit.a = std::exp(fit.alpha);
    fit.b = fit.beta + 1.0;
    return fit;
}

std::vector<double> normalize_day(std::span<const double> values) {
    const double tau = stats::mean(values);
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(v / tau);
    return out;
}

IntradayProfile intraday_profile(std::span<const DaySeries> c_series) {
    IntradayProfile profile;
    std::vector<double> day;
    for (const auto& s : c_series) {
        if (s.values.empty()) continue;
        if (!std::all_of(s.values.begin(), s.values.end(), [](const auto& v) { return v.has_value(); })) continue;
        day.clear();
        for (const auto& v : s.values) day.push_back(*v);
        if (stats::mean(day) == 0.0) continue;
        const auto normalized = normalize_day(day);
        if (profile.values.empty()) profile.values.assign(normalized.size(), 0.0);
        if (normalized.size() != profile.values.size())
            throw Error(ErrorCode::InvalidArgument, "day series of different lengths");
        for (std::size_t t = 0; t < normalized.size(); ++t) profile.values[t] += normalized[t];
        ++profile.n_days;
    }
    if (profile.n_days == 0) throw Error(ErrorCode::NoCompleteDays, "no gap-free day available");
    for (double& v : profile.values) v /= static_cast<double>(profile.n_days);
    return profile;
}

}  // namespace lobconvex
