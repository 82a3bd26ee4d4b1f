#include "lobconvex/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace lobconvex {

ConvexityEstimate fit_power_law(const SideCurve& curve, std::size_t min_points) {
    const std::size_t n = curve.points.size();
    if (n < std::max<std::size_t>(min_points, 2)) {
        throw Error(ErrorCode::InsufficientData, "power-law fit needs at least " +
                                                     std::to_string(std::max<std::size_t>(min_points, 2)) +
                                                     " points, got " + std::to_string(n));
    }

    std::vector<double> x(n), y(n);
    bool distinct = false;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = curve.points[i];
        if (!(p.depth > 0.0) || !(p.deviation > 0.0))
            throw Error(ErrorCode::InvalidArgument, "curve points must have D > 0 and w > 0");
        x[i] = std::log(p.depth);
        y[i] = std::log(p.deviation);
        if (p.depth != curve.points[0].depth) distinct = true;
    }
    if (!distinct) throw Error(ErrorCode::SingularFit, "all depths equal; log D has zero variance");

    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x_mean += x[i];
        y_mean += y[i];
    }
    x_mean /= static_cast<double>(n);
    y_mean /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - x_mean;
        sxx += dx * dx;
        sxy += dx * (y[i] - y_mean);
    }
    const double slope = sxy / sxx;
    const double intercept = y_mean - slope * x_mean;

    double rss = 0.0, tss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = y[i] - (intercept + slope * x[i]);
        rss += resid * resid;
        tss += (y[i] - y_mean) * (y[i] - y_mean);
    }

    ConvexityEstimate e;
    e.side = curve.side;
    e.W = std::exp(intercept);
    e.c = slope;
    e.rho = 1.0 / e.W;
    e.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 1.0;
    e.n_points = n;
    e.degenerate = slope < 0.0;
    return e;
}

EstimatePanel estimate_panel(std::span<const IntervalWindow> windows, const CurveConfig& config) {
    EstimatePanel panel;
    for (const auto& window : windows) {
        if (is_missing(window, config)) {
            panel.gaps.push_back({window.stock_id, window.day_id, window.t, std::nullopt, ErrorCode::InsufficientData,
                                  std::to_string(window.snapshots.size()) + " snapshots"});
            continue;
        }
        for (Side side : {Side::Bid, Side::Ask}) {
            try {
                auto e = fit_power_law(build_side_curve(window, side, config), config.min_points);
                e.stock_id = window.stock_id;
                e.day_id = window.day_id;
                e.t = window.t;
                panel.estimates.push_back(std::move(e));
            } catch (const Error& err) {
                panel.gaps.push_back({window.stock_id, window.day_id, window.t, side, err.code(), err.what()});
            }
        }
    }

    const auto side_rank = [](const std::optional<Side>& s) { return s ? (*s == Side::Bid ? 1 : 2) : 0; };
    std::stable_sort(panel.estimates.begin(), panel.estimates.end(), [&](const auto& a, const auto& b) {
        return std::tie(a.stock_id, a.day_id, a.t) < std::tie(b.stock_id, b.day_id, b.t) ||
               (std::tie(a.stock_id, a.day_id, a.t) == std::tie(b.stock_id, b.day_id, b.t) &&
                side_rank(a.side) < side_rank(b.side));
    });
    std::stable_sort(panel.gaps.begin(), panel.gaps.end(), [&](const auto& a, const auto& b) {
        const auto ra = side_rank(a.side);
        const auto rb = side_rank(b.side);
        return std::tie(a.stock_id, a.day_id, a.t, ra) < std::tie(b.stock_id, b.day_id, b.t, rb);
    });
    return panel;
}

std::optional<double> usable_log_c(const ConvexityEstimate& e, bool include_degenerate) {
    if (e.degenerate && !include_degenerate) return std::nullopt;
    if (!(e.c > 0.0)) return std::nullopt;
    return std::log(e.c);
}

LogConvexitySummary summarize_log_convexity(std::span<const ConvexityEstimate> panel, bool include_degenerate) {
    std::vector<double> bid, ask, diff;
    using Key = std::tuple<std::string, std::string, int>;
    std::map<Key, std::pair<std::optional<double>, std::optional<double>>> by_window;

    for (const auto& e : panel) {
        const auto lc = usable_log_c(e, include_degenerate);
        if (!lc) continue;
        auto& slot = by_window[{e.stock_id, e.day_id, e.t}];
        if (e.side == Side::Bid) {
            bid.push_back(*lc);
            slot.first = lc;
        } else {
            ask.push_back(*lc);
            slot.second = lc;
        }
    }
    for (const auto& [key, pair] : by_window) {
        if (pair.first && pair.second) diff.push_back(*pair.first - *pair.second);
    }
    if (bid.empty() || ask.empty() || diff.empty())
        throw Error(ErrorCode::EmptyPanel, "no usable log convexity values on one side");

    return {stats::describe(bid), stats::describe(ask), stats::describe(diff)};
}

}  // namespace lobconvex
