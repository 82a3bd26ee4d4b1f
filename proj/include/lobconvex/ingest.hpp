#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "lobconvex/lob_model.hpp"
#include "lobconvex/timeseries_stats.hpp"

namespace lobconvex {

struct Rejection {
    std::size_t row = 0;  // 1-based data row (the header is row 0)
    std::string reason;   // ParseError, OutOfSession, or a SnapshotDefect name
    std::string detail;
};

struct IngestResult {
    std::vector<BookSnapshot> snapshots;  // sorted by (stock, day, timestamp), stable
    std::vector<Rejection> rejections;    // in row order
    std::size_t total_rows = 0;
};

/// Reads the snapshot CSV. Invalid rows are rejected with a reason, never fatal.
/// Throws Error(FileNotFound) or Error(BadHeader).
[[nodiscard]] IngestResult ingest_snapshots(const std::filesystem::path& path, const WindowingConfig& windowing = {});
[[nodiscard]] IngestResult ingest_snapshots(std::istream& in, const WindowingConfig& windowing = {});

/// Initiative buy/sell volume per window, aligned with `windows`, each window
/// covering [start, start + interval). Trades for windows not in the list are
/// ignored. Throws Error(FileNotFound), Error(BadHeader), Error(UnknownSide), and
/// Error(InvalidArgument) on an unparsable row.
[[nodiscard]] std::vector<WindowVolumes> assemble_trades(const std::filesystem::path& path,
                                                         std::span<const IntervalWindow> windows,
                                                         const WindowingConfig& windowing = {});
[[nodiscard]] std::vector<WindowVolumes> assemble_trades(std::istream& in, std::span<const IntervalWindow> windows,
                                                         const WindowingConfig& windowing = {});

}  // namespace lobconvex
