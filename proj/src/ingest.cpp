#include "lobconvex/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <tuple>

#include "lobconvex/csv.hpp"
#include "lobconvex/error.hpp"

namespace lobconvex {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<double> parse_quantity(std::string_view s) {
    s = trim(s);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || v < 0) return std::nullopt;
    return static_cast<double>(v);
}

void check_header(std::istream& in, std::string_view expected) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::BadHeader, "empty file");
    const auto got = csv::split_line(line);
    const auto want = csv::split_line(expected);
    bool ok = got.size() == want.size();
    for (std::size_t i = 0; ok && i < got.size(); ++i) ok = trim(got[i]) == want[i];
    if (!ok) throw Error(ErrorCode::BadHeader, "expected '" + std::string(expected) + "'");
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    return in;
}

}  // namespace

IngestResult ingest_snapshots(std::istream& in, const WindowingConfig& windowing) {
    check_header(in, csv::kSnapshotHeader);
    constexpr std::size_t kFields = 3 + 4 * kBookLevels;

    IngestResult result;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::size_t row = ++result.total_rows;
        const auto fields = csv::split_line(line);
        const auto reject = [&](std::string reason, std::string detail) {
            result.rejections.push_back({row, std::move(reason), std::move(detail)});
        };
        if (fields.size() != kFields) {
            reject("ParseError", "expected " + std::to_string(kFields) + " fields, got " + std::to_string(fields.size()));
            continue;
        }

        BookSnapshot s;
        s.stock_id = std::string(trim(fields[0]));
        s.day_id = std::string(trim(fields[1]));
        bool ok = !s.stock_id.empty() && !s.day_id.empty();
        const auto ts = parse_double(fields[2]);
        ok = ok && ts.has_value();
        if (ts) s.timestamp = *ts;
        const auto read_block = [&](std::size_t offset, auto& dest, auto parser) {
            for (std::size_t i = 0; i < kBookLevels; ++i) {
                const auto v = parser(fields[offset + i]);
                if (!v) {
                    ok = false;
                    return;
                }
                dest[i] = *v;
            }
        };
        read_block(3, s.bid_quotes, parse_double);
        read_block(3 + kBookLevels, s.bid_depths, parse_quantity);
        read_block(3 + 2 * kBookLevels, s.ask_quotes, parse_double);
        read_block(3 + 3 * kBookLevels, s.ask_depths, parse_quantity);
        if (!ok) {
            reject("ParseError", "unparsable field");
            continue;
        }
        if (!interval_of(s.timestamp, windowing)) {
            reject("OutOfSession", "ts_sec outside [0, " + csv::format_double(windowing.day_length_sec()) + ")");
            continue;
        }
        if (const auto defect = validate(s); defect != SnapshotDefect::None) {
            reject(std::string(to_string(defect)), {});
            continue;
        }
        result.snapshots.push_back(std::move(s));
    }

    std::stable_sort(result.snapshots.begin(), result.snapshots.end(), [](const auto& a, const auto& b) {
        return std::tie(a.stock_id, a.day_id, a.timestamp) < std::tie(b.stock_id, b.day_id, b.timestamp);
    });
    return result;
}

IngestResult ingest_snapshots(const std::filesystem::path& path, const WindowingConfig& windowing) {
    auto in = open_or_throw(path);
    return ingest_snapshots(in, windowing);
}

std::vector<WindowVolumes> assemble_trades(std::istream& in, std::span<const IntervalWindow> windows,
                                           const WindowingConfig& windowing) {
    check_header(in, csv::kTradeHeader);

    std::map<std::tuple<std::string, std::string, int>, std::size_t> slot;
    for (std::size_t i = 0; i < windows.size(); ++i) slot[{windows[i].stock_id, windows[i].day_id, windows[i].t}] = i;
    std::vector<WindowVolumes> volumes(windows.size());

    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto fields = csv::split_line(line);
        if (fields.size() != 6) throw Error(ErrorCode::InvalidArgument, "trades row " + std::to_string(row) + ": field count");
        const auto ts = parse_double(fields[2]);
        const auto volume = parse_quantity(fields[4]);
        if (!ts || !volume) throw Error(ErrorCode::InvalidArgument, "trades row " + std::to_string(row) + ": unparsable");
        const auto side = trim(fields[5]);
        if (side != "buy" && side != "sell")
            throw Error(ErrorCode::UnknownSide, "trades row " + std::to_string(row) + ": '" + std::string(side) + "'");

        const auto t = interval_of(*ts, windowing);
        if (!t) continue;
        const auto it = slot.find({std::string(trim(fields[0])), std::string(trim(fields[1])), *t});
        if (it == slot.end()) continue;
        auto& v = volumes[it->second];
        (side == "buy" ? v.buy : v.sell) += *volume;
    }
    return volumes;
}

std::vector<WindowVolumes> assemble_trades(const std::filesystem::path& path, std::span<const IntervalWindow> windows,
                                           const WindowingConfig& windowing) {
    auto in = open_or_throw(path);
    return assemble_trades(in, windows, windowing);
}

}  // namespace lobconvex
