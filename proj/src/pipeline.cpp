#include "lobconvex/pipeline.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lobconvex/convexity.hpp"
#include "lobconvex/csv.hpp"
#include "lobconvex/error.hpp"
#include "lobconvex/ingest.hpp"
#include "lobconvex/regression.hpp"
#include "lobconvex/timeseries_stats.hpp"

namespace lobconvex {

std::string_view to_string(Stage stage) noexcept {
    switch (stage) {
        case Stage::Estimate: return "estimate";
        case Stage::Acf: return "acf";
        case Stage::Intraday: return "intraday";
        case Stage::Dynamics: return "dynamics";
        case Stage::Discovery: return "discovery";
    }
    return "unknown";
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state) noexcept {
    for (unsigned char ch : bytes) {
        state ^= ch;
        state *= 0x100000001b3ULL;
    }
    return state;
}

void RunConfig::check() const {
    windowing.check();
    if (curve.min_snapshots == 0 || curve.min_points < 2)
        throw Error(ErrorCode::InvalidConfig, "min_snapshots must be positive and min_points at least 2");
    if (acf_max_lag < 1 || acf_max_lag >= windowing.intervals_per_day)
        throw Error(ErrorCode::InvalidConfig, "ACF max lag must lie in [1, intervals per day)");
    if (acf_min_pairs < 2 || min_positive_lags < 3 || ar1_min_pairs < 3)
        throw Error(ErrorCode::InvalidConfig, "pair and lag thresholds too small");
    if (min_days < 0) throw Error(ErrorCode::InvalidConfig, "min_days must be non-negative");
    if (output_dir.empty()) throw Error(ErrorCode::InvalidConfig, "output directory required");
}

std::string RunConfig::canonical() const {
    std::ostringstream out;
    out << "interval_sec=" << csv::format_double(windowing.interval_sec) << '\n'
        << "snapshot_spacing_sec=" << csv::format_double(windowing.snapshot_spacing_sec) << '\n'
        << "intervals_per_day=" << windowing.intervals_per_day << '\n'
        << "min_snapshots=" << curve.min_snapshots << '\n'
        << "min_points=" << curve.min_points << '\n'
        << "acf_max_lag=" << acf_max_lag << '\n'
        << "acf_min_pairs=" << acf_min_pairs << '\n'
        << "min_positive_lags=" << min_positive_lags << '\n'
        << "ar1_min_pairs=" << ar1_min_pairs << '\n'
        << "lag_exogenous=" << lag_exogenous << '\n'
        << "include_degenerate=" << include_degenerate << '\n'
        << "min_days=" << min_days << '\n'
        << "seed=" << seed << '\n'
        << "trades=" << trades.has_value() << '\n'
        << "stages=";
    for (Stage s : stages) out << to_string(s) << ';';
    out << '\n';
    return out.str();
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::string hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    std::uint64_t state = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        state = fnv1a(std::string_view(buf, static_cast<std::size_t>(in.gcount())), state);
    }
    return hex64(state);
}

/// Writes output files in order and remembers them for the manifest or cleanup.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
        files_.push_back(name);
        body(out);
        out.flush();
        if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
    }

    void remove_all() {
        for (const auto& f : files_) {
            std::error_code ec;
            std::filesystem::remove(dir_ / f, ec);
        }
        files_.clear();
    }

    [[nodiscard]] const std::vector<std::string>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
};

void write_manifest(OutputSet& out, const std::vector<std::pair<std::string, std::string>>& entries) {
    out.write("manifest.csv", [&](std::ostream& os) {
        os << "key,value\n";
        for (const auto& [k, v] : entries) os << k << ',' << v << '\n';
    });
}

}  // namespace

RunReport run_pipeline(const RunConfig& cfg) {
    cfg.check();
    std::filesystem::create_directories(cfg.output_dir);

    OutputSet out(cfg.output_dir);
    std::vector<std::pair<std::string, std::string>> manifest;
    const auto note = [&](std::string key, auto value) {
        std::ostringstream os;
        os << value;
        manifest.emplace_back(std::move(key), os.str());
    };
    const auto selected = [&](Stage s) { return cfg.stages.count(s) > 0; };

    std::string stage = "ingest";
    try {
        const std::string snapshot_hash = hash_file(cfg.snapshots);
        const std::string trades_hash = cfg.trades ? hash_file(*cfg.trades) : std::string("none");
        const std::string config_hash =
            hex64(fnv1a(snapshot_hash + trades_hash, fnv1a(cfg.canonical())));

        auto ingest = ingest_snapshots(cfg.snapshots, cfg.windowing);
        if (ingest.snapshots.size() + ingest.rejections.size() != ingest.total_rows)
            throw Error(ErrorCode::InvalidArgument, "row accounting mismatch in ingestion");
        out.write("rejections.csv", [&](std::ostream& os) {
            os << "row,reason,detail\n";
            for (const auto& r : ingest.rejections) os << r.row << ',' << r.reason << ',' << r.detail << '\n';
        });

        std::size_t filtered = 0;
        if (cfg.min_days > 0) {
            std::map<std::string, std::set<std::string>> days;
            for (const auto& s : ingest.snapshots) days[s.stock_id].insert(s.day_id);
            std::vector<BookSnapshot> kept;
            for (auto& s : ingest.snapshots) {
                if (static_cast<int>(days[s.stock_id].size()) >= cfg.min_days) kept.push_back(std::move(s));
                else ++filtered;
            }
            ingest.snapshots = std::move(kept);
        }

        stage = "window";
        const auto windows = assemble_windows(ingest.snapshots, cfg.windowing);

        std::optional<std::vector<WindowVolumes>> volumes;
        if (cfg.trades) {
            stage = "trades";
            volumes = assemble_trades(*cfg.trades, windows, cfg.windowing);
        }

        stage = "estimate";
        const auto panel = estimate_panel(windows, cfg.curve);
        std::optional<std::span<const WindowVolumes>> volume_view;
        if (volumes) volume_view = std::span<const WindowVolumes>(*volumes);
        const auto records = build_interval_records(windows, panel, cfg.curve, volume_view);
        out.write("intervals.csv", [&](std::ostream& os) { csv::write_records(os, records); });
        out.write("convexity_panel.csv", [&](std::ostream& os) { csv::write_panel(os, panel.estimates); });
        out.write("gaps.csv", [&](std::ostream& os) { csv::write_gaps(os, panel.gaps); });
        const auto summary = summarize_log_convexity(panel.estimates, cfg.include_degenerate);
        out.write("summary_log_convexity.csv",
                  [&](std::ostream& os) { csv::write_log_convexity_summary(os, summary); });

        std::set<std::pair<std::string, std::string>> stock_days;
        std::set<std::string> stocks;
        std::size_t missing = 0, degenerate = 0;
        for (const auto& w : windows) {
            stock_days.insert({w.stock_id, w.day_id});
            stocks.insert(w.stock_id);
            if (is_missing(w, cfg.curve)) ++missing;
        }
        for (const auto& e : panel.estimates) degenerate += e.degenerate ? 1 : 0;

        const int n_per_day = cfg.windowing.intervals_per_day;
        std::vector<std::pair<std::string, std::string>> analysis_notes;

        if (selected(Stage::Acf)) {
            stage = "acf";
            std::map<Side, std::vector<DaySeries>> kappa;
            for (Side side : {Side::Bid, Side::Ask}) {
                const auto logc = log_convexity_series(panel.estimates, side, n_per_day, cfg.include_degenerate);
                const auto acf = panel_acf(logc, cfg.acf_max_lag, cfg.acf_min_pairs);
                out.write("acf_logc_" + std::string(to_string(side)) + ".csv",
                          [&](std::ostream& os) { csv::write_acf(os, acf); });
                kappa[side] = kappa_series(logc);
            }
            for (Side side : {Side::Bid, Side::Ask}) {
                const auto logc = log_convexity_series(panel.estimates, side, n_per_day, cfg.include_degenerate);
                const auto fit = fit_long_memory(panel_acf(logc, cfg.acf_max_lag, cfg.acf_min_pairs),
                                                 cfg.min_positive_lags);
                out.write("long_memory_" + std::string(to_string(side)) + ".csv",
                          [&](std::ostream& os) { csv::write_long_memory(os, fit); });
                analysis_notes.emplace_back("long_memory_b_" + std::string(to_string(side)),
                                            csv::format_double(fit.b));
            }
            for (Side side : {Side::Bid, Side::Ask}) {
                const auto acf = panel_acf(kappa[side], cfg.acf_max_lag, cfg.acf_min_pairs);
                out.write("acf_kappa_" + std::string(to_string(side)) + ".csv",
                          [&](std::ostream& os) { csv::write_acf(os, acf); });
            }
            for (Side side : {Side::Bid, Side::Ask}) {
                const auto ar1 = ar1_kappa(kappa[side], cfg.ar1_min_pairs);
                const std::string base = "kappa_ar1_" + std::string(to_string(side));
                out.write(base + ".csv", [&](std::ostream& os) { csv::write_regression_summary(os, ar1); });
                out.write(base + "_per_stock.csv", [&](std::ostream& os) { csv::write_regression_per_stock(os, ar1); });
                analysis_notes.emplace_back(base + "_stocks", std::to_string(ar1.per_stock.size()));
            }
        }

        if (selected(Stage::Intraday)) {
            stage = "intraday";
            for (Side side : {Side::Bid, Side::Ask}) {
                const auto c = convexity_series(panel.estimates, side, n_per_day, cfg.include_degenerate);
                const auto profile = intraday_profile(c);
                out.write("intraday_" + std::string(to_string(side)) + ".csv",
                          [&](std::ostream& os) { csv::write_profile(os, profile); });
                analysis_notes.emplace_back("intraday_days_" + std::string(to_string(side)),
                                            std::to_string(profile.n_days));
            }
        }

        if (selected(Stage::Dynamics)) {
            stage = "dynamics";
            DynamicOptions options;
            options.lag_exogenous = cfg.lag_exogenous;
            for (Side side : {Side::Bid, Side::Ask}) {
                const auto fit = dynamic_adjustment(records, side, options);
                const std::string base = "dynamics_" + std::string(to_string(side));
                out.write(base + ".csv", [&](std::ostream& os) { csv::write_regression_summary(os, fit); });
                out.write(base + "_per_stock.csv", [&](std::ostream& os) { csv::write_regression_per_stock(os, fit); });
                analysis_notes.emplace_back(base + "_stocks", std::to_string(fit.per_stock.size()));
            }
        }

        std::string discovery_status = "not selected";
        if (selected(Stage::Discovery)) {
            if (!cfg.trades) {
                discovery_status = "skipped (no trades)";
            } else {
                stage = "discovery";
                const auto fit = price_discovery(records);
                out.write("discovery.csv", [&](std::ostream& os) { csv::write_regression_summary(os, fit); });
                out.write("discovery_per_stock.csv",
                          [&](std::ostream& os) { csv::write_regression_per_stock(os, fit); });
                discovery_status = "done (" + std::to_string(fit.per_stock.size()) + " stocks)";
            }
        }

        stage = "manifest";
        note("status", "complete");
        note("config_hash", config_hash);
        note("snapshots_hash", snapshot_hash);
        note("trades_hash", trades_hash);
        note("rows_total", ingest.total_rows);
        note("rows_accepted", ingest.total_rows - ingest.rejections.size());
        note("rows_rejected", ingest.rejections.size());
        note("rows_filtered_min_days", filtered);
        note("stocks", stocks.size());
        note("stock_days", stock_days.size());
        note("windows", windows.size());
        note("windows_missing", missing);
        note("estimates", panel.estimates.size());
        note("degenerate_estimates", degenerate);
        note("gaps", panel.gaps.size());
        note("interval_records", records.size());
        for (const auto& [k, v] : analysis_notes) note(k, v);
        note("discovery", discovery_status);
        std::string stage_list;
        for (Stage s : cfg.stages) stage_list += std::string(to_string(s)) + ";";
        note("stages", stage_list);
        write_manifest(out, manifest);
    } catch (const std::exception& e) {
        out.remove_all();
        std::vector<std::pair<std::string, std::string>> failed{{"status", "incomplete"}, {"failed_stage", stage}};
        std::string msg = e.what();
        for (char& ch : msg) {
            if (ch == ',' || ch == '\n') ch = ';';
        }
        failed.emplace_back("message", msg);
        try {
            write_manifest(out, failed);
        } catch (const std::exception&) {
        }
        throw StageError(stage, e.what());
    }

    return {out.files(), manifest};
}

}  // namespace lobconvex
