#include "lobconvex/lob_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "lobconvex/error.hpp"

namespace lobconvex {

std::string_view to_string(Side side) noexcept { return side == Side::Bid ? "bid" : "ask"; }

std::optional<Side> parse_side(std::string_view text) noexcept {
    if (text == "bid") return Side::Bid;
    if (text == "ask") return Side::Ask;
    return std::nullopt;
}

std::string_view to_string(SnapshotDefect defect) noexcept {
    switch (defect) {
        case SnapshotDefect::None: return "None";
        case SnapshotDefect::NonPositivePrice: return "NonPositivePrice";
        case SnapshotDefect::NonPositiveDepth: return "NonPositiveDepth";
        case SnapshotDefect::NonMonotoneBid: return "NonMonotoneBid";
        case SnapshotDefect::NonMonotoneAsk: return "NonMonotoneAsk";
        case SnapshotDefect::CrossedBook: return "CrossedBook";
    }
    return "Unknown";
}

SnapshotDefect validate(const BookSnapshot& s) noexcept {
    for (std::size_t i = 0; i < kBookLevels; ++i) {
        // Written as !(x > 0) so NaN is rejected too.
        if (!(s.bid_quotes[i] > 0.0) || !(s.ask_quotes[i] > 0.0) || !std::isfinite(s.bid_quotes[i]) ||
            !std::isfinite(s.ask_quotes[i]))
            return SnapshotDefect::NonPositivePrice;
    }
    for (std::size_t i = 0; i < kBookLevels; ++i) {
        if (!(s.bid_depths[i] > 0.0) || !(s.ask_depths[i] > 0.0)) return SnapshotDefect::NonPositiveDepth;
    }
    for (std::size_t i = 1; i < kBookLevels; ++i) {
        if (!(s.bid_quotes[i] < s.bid_quotes[i - 1])) return SnapshotDefect::NonMonotoneBid;
    }
    for (std::size_t i = 1; i < kBookLevels; ++i) {
        if (!(s.ask_quotes[i] > s.ask_quotes[i - 1])) return SnapshotDefect::NonMonotoneAsk;
    }
    if (!(s.bid_quotes[0] < s.ask_quotes[0])) return SnapshotDefect::CrossedBook;
    return SnapshotDefect::None;
}

double mid_quote(const BookSnapshot& s) noexcept { return (s.bid_quotes[0] + s.ask_quotes[0]) / 2.0; }

std::vector<CurvePoint> side_deviations(const BookSnapshot& s, Side side) {
    const auto& quotes = side == Side::Bid ? s.bid_quotes : s.ask_quotes;
    const auto& depths = side == Side::Bid ? s.bid_depths : s.ask_depths;
    const double mid = mid_quote(s);

    std::vector<CurvePoint> points;
    points.reserve(kBookLevels);
    double cumulative = 0.0;
    for (std::size_t i = 0; i < kBookLevels; ++i) {
        cumulative += depths[i];
        // log1p of the relative gap keeps full precision when q is close to mid.
        const double w = std::fabs(std::log1p((quotes[i] - mid) / mid));
        if (w == 0.0) continue;
        points.push_back({cumulative, w});
    }
    return points;
}

int WindowingConfig::slots_per_interval() const {
    return static_cast<int>(std::lround(interval_sec / snapshot_spacing_sec));
}

void WindowingConfig::check() const {
    if (!(interval_sec > 0.0) || !(snapshot_spacing_sec > 0.0) || intervals_per_day <= 0)
        throw Error(ErrorCode::InvalidConfig, "interval length, spacing and interval count must be positive");
    const double ratio = interval_sec / snapshot_spacing_sec;
    if (std::fabs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0)
        throw Error(ErrorCode::InvalidConfig, "interval length must be a multiple of the snapshot spacing");
}

Session session_of(int interval_index, int intervals_per_day) noexcept {
    return interval_index <= intervals_per_day / 2 ? Session::Morning : Session::Afternoon;
}

std::optional<int> interval_of(double timestamp, const WindowingConfig& config) noexcept {
    if (!(timestamp >= 0.0) || !(timestamp < config.day_length_sec())) return std::nullopt;
    const int t = static_cast<int>(std::floor(timestamp / config.interval_sec)) + 1;
    return std::min(t, config.intervals_per_day);
}

std::vector<IntervalWindow> assemble_windows(std::span<const BookSnapshot> snapshots,
                                             const WindowingConfig& config) {
    config.check();
    const int slots = config.slots_per_interval();

    // (stock, day) -> per-interval slot table. Input order is preserved inside
    // each slot decision so the "later wins" rule is deterministic.
    using Key = std::pair<std::string, std::string>;
    struct SlotEntry {
        const BookSnapshot* snapshot = nullptr;
    };
    std::map<Key, std::vector<std::vector<SlotEntry>>> table;

    for (const auto& s : snapshots) {
        auto& day = table[{s.stock_id, s.day_id}];
        if (day.empty()) day.assign(static_cast<std::size_t>(config.intervals_per_day),
                                    std::vector<SlotEntry>(static_cast<std::size_t>(slots)));
        const auto t = interval_of(s.timestamp, config);
        if (!t) continue;
        const double offset = s.timestamp - (*t - 1) * config.interval_sec;
        const int slot = std::clamp(static_cast<int>(std::floor(offset / config.snapshot_spacing_sec + 0.5)), 0,
                                    slots - 1);
        auto& entry = day[static_cast<std::size_t>(*t - 1)][static_cast<std::size_t>(slot)];
        if (entry.snapshot == nullptr || s.timestamp >= entry.snapshot->timestamp) entry.snapshot = &s;
    }

    std::vector<IntervalWindow> windows;
    windows.reserve(table.size() * static_cast<std::size_t>(config.intervals_per_day));
    for (const auto& [key, day] : table) {
        for (int t = 1; t <= config.intervals_per_day; ++t) {
            IntervalWindow w;
            w.stock_id = key.first;
            w.day_id = key.second;
            w.t = t;
            for (const auto& entry : day[static_cast<std::size_t>(t - 1)]) {
                if (entry.snapshot != nullptr) w.snapshots.push_back(*entry.snapshot);
            }
            windows.push_back(std::move(w));
        }
    }
    return windows;
}

bool is_missing(const IntervalWindow& window, const CurveConfig& config) noexcept {
    return window.snapshots.size() < config.min_snapshots;
}

SideCurve build_side_curve(const IntervalWindow& window, Side side, const CurveConfig& config) {
    if (is_missing(window, config)) {
        throw Error(ErrorCode::InsufficientData, "window has " + std::to_string(window.snapshots.size()) +
                                                     " snapshots, need " + std::to_string(config.min_snapshots));
    }
    SideCurve curve;
    curve.side = side;
    curve.points.reserve(window.snapshots.size() * kBookLevels);
    for (const auto& s : window.snapshots) {
        const auto pts = side_deviations(s, side);
        curve.points.insert(curve.points.end(), pts.begin(), pts.end());
    }
    if (curve.points.size() < config.min_points) {
        throw Error(ErrorCode::InsufficientData, std::to_string(curve.points.size()) + " pooled points, need " +
                                                     std::to_string(config.min_points));
    }
    return curve;
}

}  // namespace lobconvex
