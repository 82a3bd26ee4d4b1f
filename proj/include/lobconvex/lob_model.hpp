#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lobconvex {

inline constexpr std::size_t kBookLevels = 5;

enum class Side { Bid, Ask };

[[nodiscard]] std::string_view to_string(Side side) noexcept;
[[nodiscard]] std::optional<Side> parse_side(std::string_view text) noexcept;

/// One 5-level two-sided quote/depth observation. Level 0 is the best quote.
/// `timestamp` is seconds of trading time since the session open; the lunch
/// break is not counted, so a full day spans [0, 48 * 300).
struct BookSnapshot {
    std::string stock_id;
    std::string day_id;
    double timestamp = 0.0;
    std::array<double, kBookLevels> bid_quotes{};
    std::array<double, kBookLevels> bid_depths{};
    std::array<double, kBookLevels> ask_quotes{};
    std::array<double, kBookLevels> ask_depths{};
};

enum class SnapshotDefect {
    None,
    NonPositivePrice,
    NonPositiveDepth,
    NonMonotoneBid,
    NonMonotoneAsk,
    CrossedBook,
};

[[nodiscard]] std::string_view to_string(SnapshotDefect defect) noexcept;

/// First violated invariant, or SnapshotDefect::None for a valid book.
[[nodiscard]] SnapshotDefect validate(const BookSnapshot& snapshot) noexcept;

/// (best bid + best ask) / 2.
[[nodiscard]] double mid_quote(const BookSnapshot& snapshot) noexcept;

struct CurvePoint {
    double depth = 0.0;      // cumulative shares through this level
    double deviation = 0.0;  // |log q - log mid|
};

/// Up to five (cumulative depth, |log q_i - log mid|) pairs for one side.
/// Levels whose quote equals the mid are dropped.
[[nodiscard]] std::vector<CurvePoint> side_deviations(const BookSnapshot& snapshot, Side side);

struct WindowingConfig {
    double interval_sec = 300.0;
    double snapshot_spacing_sec = 10.0;
    int intervals_per_day = 48;

    [[nodiscard]] int slots_per_interval() const;
    [[nodiscard]] double day_length_sec() const { return interval_sec * intervals_per_day; }
    /// Throws Error(InvalidConfig) on non-positive sizes or a spacing that does not divide the interval.
    void check() const;
};

enum class Session { Morning, Afternoon };

/// Intervals 1..n/2 are the morning session, the rest the afternoon.
[[nodiscard]] Session session_of(int interval_index, int intervals_per_day = 48) noexcept;

/// Interval index (1-based) holding `timestamp`, using half-open [start, start + length)
/// windows; std::nullopt outside the trading day.
[[nodiscard]] std::optional<int> interval_of(double timestamp, const WindowingConfig& config) noexcept;

/// Snapshots of one (stock, day, t) window, at most one per sampling slot,
/// ordered by slot.
struct IntervalWindow {
    std::string stock_id;
    std::string day_id;
    int t = 0;
    std::vector<BookSnapshot> snapshots;
};

/// Partitions a snapshot stream into windows. Every (stock, day) present gets all
/// `intervals_per_day` windows, empty ones included, so downstream code sees gaps.
/// Each snapshot goes to the nearest sampling slot of its window; on a slot
/// collision the later snapshot wins (input order breaks timestamp ties).
/// Output is sorted by (stock_id, day_id, t).
[[nodiscard]] std::vector<IntervalWindow> assemble_windows(std::span<const BookSnapshot> snapshots,
                                                           const WindowingConfig& config = {});

struct SideCurve {
    Side side = Side::Bid;
    std::vector<CurvePoint> points;
};

struct CurveConfig {
    std::size_t min_snapshots = 20;
    std::size_t min_points = 50;
};

[[nodiscard]] bool is_missing(const IntervalWindow& window, const CurveConfig& config = {}) noexcept;

/// Pools side_deviations over every snapshot of the window, in snapshot order.
/// Throws Error(InsufficientData) when the window is missing or fewer than
/// `min_points` points survive.
[[nodiscard]] SideCurve build_side_curve(const IntervalWindow& window, Side side,
                                         const CurveConfig& config = {});

}  // namespace lobconvex
