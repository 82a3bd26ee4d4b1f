#include "lobconvex/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "lobconvex/error.hpp"

namespace lobconvex::csv {

std::string format_double(double value) {
    if (!std::isfinite(value)) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string{};
}

std::vector<std::string_view> split_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

namespace {

// Quantities are whole shares; print them without an exponent or fraction.
std::string format_quantity(double q) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", q);
    return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

}  // namespace

void write_snapshots(std::ostream& out, std::span<const BookSnapshot> snapshots) {
    out << kSnapshotHeader << '\n';
    for (const auto& s : snapshots) {
        out << s.stock_id << ',' << s.day_id << ',' << format_double(s.timestamp);
        for (double q : s.bid_quotes) out << ',' << format_double(q);
        for (double d : s.bid_depths) out << ',' << format_quantity(d);
        for (double q : s.ask_quotes) out << ',' << format_double(q);
        for (double d : s.ask_depths) out << ',' << format_quantity(d);
        out << '\n';
    }
}

void write_trades(std::ostream& out, std::span<const synth::Trade> trades) {
    out << kTradeHeader << '\n';
    for (const auto& t : trades) {
        out << t.stock_id << ',' << t.day_id << ',' << format_double(t.timestamp) << ',' << format_double(t.price)
            << ',' << format_quantity(t.volume) << ',' << (t.aggressor == synth::Aggressor::Buy ? "buy" : "sell")
            << '\n';
    }
}

void write_truth(std::ostream& out, std::span<const synth::TruthRow> truth) {
    out << kTruthHeader << '\n';
    for (const auto& r : truth) {
        out << r.stock_id << ',' << r.day_id << ',' << r.t << ',' << to_string(r.side) << ','
            << format_double(r.W) << ',' << format_double(r.c) << '\n';
    }
}

void write_panel(std::ostream& out, std::span<const ConvexityEstimate> estimates) {
    out << kPanelHeader << '\n';
    for (const auto& e : estimates) {
        out << e.stock_id << ',' << e.day_id << ',' << e.t << ',' << to_string(e.side) << ','
            << format_double(e.W) << ',' << format_double(e.c) << ',' << format_double(e.rho) << ','
            << format_double(e.r_squared) << ',' << e.n_points << ',' << (e.degenerate ? 1 : 0) << '\n';
    }
}

void write_gaps(std::ostream& out, std::span<const GapRecord> gaps) {
    out << kGapHeader << '\n';
    for (const auto& g : gaps) {
        std::string detail = g.detail;
        for (char& ch : detail) {
            if (ch == ',' || ch == '\n') ch = ';';
        }
        out << g.stock_id << ',' << g.day_id << ',' << g.t << ',' << (g.side ? to_string(*g.side) : "both") << ','
            << to_string(g.reason) << ',' << detail << '\n';
    }
}

void write_records(std::ostream& out, std::span<const IntervalRecord> records) {
    out << kRecordHeader << '\n';
    for (const auto& r : records) {
        out << r.stock_id << ',' << r.day_id << ',' << r.t << ',' << format_optional(r.c_bid) << ','
            << format_optional(r.c_ask) << ',' << format_optional(r.W_bid) << ',' << format_optional(r.W_ask) << ','
            << format_double(r.mid) << ',' << format_optional(r.r) << ',' << format_double(r.g) << ','
            << format_optional(r.v_buy) << ',' << format_optional(r.v_sell) << '\n';
    }
}

void write_log_convexity_summary(std::ostream& out, const LogConvexitySummary& summary) {
    out << "variable,mean,std_dev,median,min,max,p_value,n\n";
    const auto row = [&](std::string_view name, const stats::Description& d) {
        out << name << ',' << format_double(d.mean) << ',' << format_double(d.std_dev) << ','
            << format_double(d.median) << ',' << format_double(d.min) << ',' << format_double(d.max) << ','
            << format_double(d.p_value) << ',' << d.n << '\n';
    };
    row("log_c_bid", summary.log_c_bid);
    row("log_c_ask", summary.log_c_ask);
    row("log_c_bid_minus_log_c_ask", summary.difference);
}

void write_acf(std::ostream& out, const AcfCurve& acf) {
    out << "lag,value\n";
    for (std::size_t i = 0; i < acf.lags.size(); ++i) out << acf.lags[i] << ',' << format_double(acf.values[i]) << '\n';
}

void write_long_memory(std::ostream& out, const LongMemoryFit& fit) {
    out << "term,estimate,p_value,r_squared\n";
    out << "alpha," << format_double(fit.alpha) << ',' << format_double(fit.alpha_p) << ",\n";
    out << "beta," << format_double(fit.beta) << ',' << format_double(fit.beta_p) << ",\n";
    out << "equation,,," << format_double(fit.r_squared) << '\n';
    out << "a," << format_double(fit.a) << ",,\n";
    out << "b," << format_double(fit.b) << ",,\n";
    out << "long_memory," << (fit.long_memory() ? 1 : 0) << ",,\n";
    out << "lags_used," << fit.n_lags_used << ",,\n";
    out << "lags_dropped," << fit.n_lags_dropped << ",,\n";
}

void write_profile(std::ostream& out, const IntradayProfile& profile) {
    out << "t,value\n";
    for (std::size_t i = 0; i < profile.values.size(); ++i) out << i + 1 << ',' << format_double(profile.values[i]) << '\n';
}

void write_regression_summary(std::ostream& out, const PanelRegressionSummary& summary) {
    out << kSummaryHeader << '\n';
    for (const auto& c : summary.coefficients) {
        out << c.name << ',' << format_double(c.mean) << ',' << c.n_sig_neg_5 << ',' << c.n_sig_neg_10 << ','
            << c.n_sig_pos_5 << ',' << c.n_sig_pos_10 << '\n';
    }
    out << "mean_r2," << format_double(summary.mean_r_squared) << ",,,,\n";
}

void write_regression_per_stock(std::ostream& out, const PanelRegressionSummary& summary) {
    out << "stock_id,coef,estimate,std_error,t_stat,p_value,r_squared,n_obs\n";
    for (const auto& s : summary.per_stock) {
        const auto& r = s.result;
        for (std::size_t j = 0; j < r.names.size(); ++j) {
            out << s.stock_id << ',' << r.names[j] << ',' << format_double(r.estimates[j]) << ','
                << format_double(r.std_errors[j]) << ',' << format_double(r.t_stats[j]) << ','
                << format_double(r.p_values[j]) << ',' << format_double(r.r_squared) << ',' << r.n_obs << '\n';
        }
    }
}

void write_dataset(const synth::SynthDataset& data, const std::filesystem::path& dir, bool always_write_trades) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_for_write(dir / "snapshots.csv");
        write_snapshots(out, data.snapshots);
    }
    if (!data.trades.empty() || always_write_trades) {
        auto out = open_for_write(dir / "trades.csv");
        write_trades(out, data.trades);
    }
    {
        auto out = open_for_write(dir / "truth.csv");
        write_truth(out, data.truth);
    }
}

}  // namespace lobconvex::csv
