#include <CLI11.hpp>

#include <set>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lobconvex/csv.hpp"
#include "lobconvex/error.hpp"
#include "lobconvex/pipeline.hpp"
#include "lobconvex/synthetic.hpp"

namespace {

using lobconvex::RunConfig;
using lobconvex::Stage;
using lobconvex::synth::SynthConfig;

struct SynthFlags {
    SynthConfig config;
    bool exact = false;
    bool no_trades = false;
    double c_level = 0.55;
    double c_coefficient = 0.6;
    double c_innovation = 0.15;
    double c_slope = 0.0;
    std::string c_kind = "ar1";
};

void add_synth_flags(CLI::App& app, SynthFlags& f) {
    auto& c = f.config;
    app.add_option("--seed", c.seed, "Generator seed")->capture_default_str();
    app.add_option("--stocks", c.n_stocks, "Number of stocks")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--days", c.n_days, "Days per stock")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--c-process", f.c_kind, "Convexity process for both sides")
        ->check(CLI::IsMember({"constant", "ar1", "drift"}))
        ->capture_default_str();
    app.add_option("--c-level", f.c_level, "Convexity level")->capture_default_str();
    app.add_option("--c-coefficient", f.c_coefficient, "AR(1) coefficient of log c")->capture_default_str();
    app.add_option("--c-innovation", f.c_innovation, "Innovation std of log c")->capture_default_str();
    app.add_option("--c-slope", f.c_slope, "Per-interval slope for the drift process")->capture_default_str();
    app.add_option("--W", c.W.level, "Ask-side scale W")->capture_default_str();
    app.add_option("--initial-mid", c.initial_mid, "Opening mid price")->capture_default_str();
    app.add_option("--sigma", c.sigma, "Per-snapshot log-mid volatility")->capture_default_str();
    app.add_option("--noise", c.noise_std, "Log-normal noise on deviations")->capture_default_str();
    app.add_option("--tick", c.tick, "Tick size for rounded prices")->capture_default_str();
    app.add_flag("--exact", f.exact, "Write unrounded prices (exact recovery)");
    app.add_option("--trades-per-window", c.trades_per_window, "Poisson mean trade count")->capture_default_str();
    app.add_option("--mean-trade-size", c.mean_trade_size, "Mean trade size in shares")->capture_default_str();
    app.add_flag("--no-trades", f.no_trades, "Do not generate trades");
}

SynthConfig finish_synth(SynthFlags f) {
    using lobconvex::synth::ProcessKind;
    ProcessKind kind = ProcessKind::AR1;
    if (f.c_kind == "constant") kind = ProcessKind::Constant;
    if (f.c_kind == "drift") kind = ProcessKind::LinearDrift;
    const lobconvex::synth::ProcessSpec spec{kind, f.c_level, f.c_coefficient, f.c_innovation, f.c_slope};
    f.config.c_bid = spec;
    f.config.c_ask = spec;
    f.config.tick_rounding = !f.exact;
    if (f.no_trades) f.config.trades_per_window = 0.0;
    f.config.check();
    return f.config;
}

struct RunFlags {
    RunConfig config;
    std::string snapshots;
    std::string trades;
    std::string output;
};

void add_run_flags(CLI::App& app, RunFlags& f, bool snapshots_required) {
    auto& c = f.config;
    auto* snap = app.add_option("--snapshots", f.snapshots, "Snapshot CSV");
    if (snapshots_required) snap->required()->check(CLI::ExistingFile);
    app.add_option("--trades", f.trades, "Trades CSV (enables price discovery)")->check(CLI::ExistingFile);
    app.add_option("--out", f.output, "Output directory")->required();
    app.add_option("--interval-sec", c.windowing.interval_sec, "Window length in seconds")->capture_default_str();
    app.add_option("--spacing-sec", c.windowing.snapshot_spacing_sec, "Snapshot spacing in seconds")
        ->capture_default_str();
    app.add_option("--intervals-per-day", c.windowing.intervals_per_day, "Windows per trading day")
        ->capture_default_str();
    app.add_option("--min-snapshots", c.curve.min_snapshots, "Snapshots needed for a window")->capture_default_str();
    app.add_option("--min-points", c.curve.min_points, "Pooled points needed per side")->capture_default_str();
    app.add_option("--acf-max-lag", c.acf_max_lag, "Largest ACF lag")->capture_default_str();
    app.add_option("--acf-min-pairs", c.acf_min_pairs, "Pairs a day needs to enter a lag")->capture_default_str();
    app.add_option("--min-positive-lags", c.min_positive_lags, "Positive lags needed for the power-law fit")
        ->capture_default_str();
    app.add_option("--ar1-min-pairs", c.ar1_min_pairs, "Pairs a stock needs for the kappa AR(1)")
        ->capture_default_str();
    app.add_flag("--lag-exogenous", c.lag_exogenous, "Use r_{t-1} and g_{t-1} in the dynamic regression");
    app.add_flag("--include-degenerate", c.include_degenerate, "Keep c < 0 fits in non-log statistics");
    app.add_option("--min-days", c.min_days, "Drop stocks with fewer days")->capture_default_str();
    app.add_option("--seed", c.seed, "Seed recorded in the manifest and used by --synth")->capture_default_str();
}

RunConfig finish_run(const RunFlags& f, std::set<Stage> stages) {
    RunConfig c = f.config;
    c.snapshots = f.snapshots;
    if (!f.trades.empty()) c.trades = f.trades;
    c.output_dir = f.output;
    c.stages = std::move(stages);
    return c;
}

int run_and_report(const RunConfig& config) {
    const auto report = lobconvex::run_pipeline(config);
    for (const auto& file : report.files) std::cout << (config.output_dir / file).string() << '\n';
    for (const auto& [k, v] : report.manifest) {
        if (k == "discovery" && v.rfind("skipped", 0) == 0) std::cerr << "discovery: " << v << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Limit-order-book convexity estimation and panel statistics"};
    app.require_subcommand(1);

    SynthFlags synth_flags;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Write a synthetic snapshot/trade/truth dataset");
    add_synth_flags(*synth, synth_flags);
    synth->add_option("--out", synth_out, "Output directory")->required();

    struct Verb {
        const char* name;
        const char* help;
        std::set<Stage> stages;
    };
    const Verb verbs[] = {
        {"estimate", "Fit per-window convexity and write the panel and summary", {Stage::Estimate}},
        {"acf", "Estimate, then log-convexity ACF, long-memory fit and kappa AR(1)", {Stage::Estimate, Stage::Acf}},
        {"intraday", "Estimate, then the normalized intraday profile", {Stage::Estimate, Stage::Intraday}},
        {"dynamics", "Estimate, then the dynamic-adjustment regression", {Stage::Estimate, Stage::Dynamics}},
        {"discovery", "Estimate, then the price-discovery regression (needs --trades)",
         {Stage::Estimate, Stage::Discovery}},
    };
    std::vector<RunFlags> verb_flags(std::size(verbs));
    std::vector<CLI::App*> verb_apps;
    for (std::size_t i = 0; i < std::size(verbs); ++i) {
        auto* sub = app.add_subcommand(verbs[i].name, verbs[i].help);
        add_run_flags(*sub, verb_flags[i], true);
        verb_apps.push_back(sub);
    }
    verb_apps[4]->get_option("--trades")->required();

    RunFlags run_flags;
    SynthFlags run_synth_flags;
    bool run_with_synth = false;
    auto* run = app.add_subcommand("run", "Full pipeline; --synth generates the input into <out>/input first");
    add_run_flags(*run, run_flags, false);
    run->add_flag("--synth", run_with_synth, "Generate a synthetic dataset as input");
    {
        // Generator options under a prefix so they do not clash with the run flags.
        auto* g = run->add_option_group("synthetic", "Generator settings used with --synth");
        g->add_option("--synth-stocks", run_synth_flags.config.n_stocks, "Number of stocks")->capture_default_str();
        g->add_option("--synth-days", run_synth_flags.config.n_days, "Days per stock")->capture_default_str();
        g->add_flag("--synth-exact", run_synth_flags.exact, "Write unrounded prices");
        g->add_flag("--synth-no-trades", run_synth_flags.no_trades, "Do not generate trades");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            const auto data = lobconvex::synth::generate(finish_synth(synth_flags));
            lobconvex::csv::write_dataset(data, synth_out, !synth_flags.no_trades);
            std::cout << "snapshots: " << data.snapshots.size() << "\ntrades: " << data.trades.size()
                      << "\ntruth rows: " << data.truth.size() << '\n';
            return 0;
        }
        for (std::size_t i = 0; i < verb_apps.size(); ++i) {
            if (verb_apps[i]->parsed()) return run_and_report(finish_run(verb_flags[i], verbs[i].stages));
        }
        if (run->parsed()) {
            RunFlags flags = run_flags;
            if (run_with_synth) {
                run_synth_flags.config.seed = flags.config.seed;
                const auto data = lobconvex::synth::generate(finish_synth(run_synth_flags));
                const auto input = std::filesystem::path(flags.output) / "input";
                lobconvex::csv::write_dataset(data, input, !run_synth_flags.no_trades);
                flags.snapshots = (input / "snapshots.csv").string();
                if (!run_synth_flags.no_trades) flags.trades = (input / "trades.csv").string();
            } else if (flags.snapshots.empty()) {
                std::cerr << "run: --snapshots or --synth is required\n";
                return 2;
            }
            return run_and_report(finish_run(flags, RunConfig{}.stages));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
