#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lobconvex/lob_model.hpp"
#include "lobconvex/timeseries_stats.hpp"

namespace lobconvex::synth {

/// Random source used by every generator in this namespace.
///
/// Engine: std::mt19937_64 (its output sequence is fixed by the C++ standard).
/// Seeding: each (seed, stock index, day index, stream tag) substream is seeded
/// with splitmix64(seed ^ splitmix64(stock) ^ splitmix64(day << 20) ^ splitmix64(tag << 40)).
/// Uniforms take the top 53 bits; normals use Box-Muller; Poisson draws use
/// Knuth's multiplication method. None of the std distributions are used, since
/// their algorithms differ between standard libraries.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stock, std::uint64_t day, std::uint64_t tag);

    double uniform();        // [0, 1)
    double normal();         // N(0, 1)
    long poisson(double mean);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

enum class ProcessKind { Constant, AR1, LinearDrift };

/// Per-interval positive process x_t, t = 1..48, restarted every day.
///  - Constant:    x_t = level
///  - AR1:         log x_t = log level + coefficient (log x_{t-1} - log level) + innovation_std e_t,
///                 started from its stationary distribution
///  - LinearDrift: x_t = (level + slope (t - 1)) exp(innovation_std e_t)
struct ProcessSpec {
    ProcessKind kind = ProcessKind::Constant;
    double level = 1.0;
    double coefficient = 0.0;
    double innovation_std = 0.0;
    double slope = 0.0;
};

struct SynthConfig {
    std::uint64_t seed = 42;
    int n_stocks = 2;
    int n_days = 5;

    ProcessSpec c_bid{ProcessKind::AR1, 0.55, 0.6, 0.15, 0.0};
    ProcessSpec c_ask{ProcessKind::AR1, 0.55, 0.6, 0.15, 0.0};
    /// Drives the ask-side scale. The bid-side scale is implied: the best-quote
    /// deviations of both sides must average to the quoted mid, which pins W_bid
    /// given the ask book and c_bid.
    ProcessSpec W{ProcessKind::Constant, 1.3e-5, 0.0, 0.0, 0.0};

    double initial_mid = 10.0;
    double sigma = 5e-4;  // per-snapshot log-mid volatility

    double depth_total_bid = 50000.0;
    double depth_total_ask = 50000.0;
    std::array<double, kBookLevels> depth_fractions{0.10, 0.25, 0.45, 0.70, 1.00};

    double noise_std = 0.0;  // multiplicative log-normal noise on every w
    bool tick_rounding = true;
    double tick = 0.01;

    double trades_per_window = 20.0;  // Poisson mean; 0 disables trades
    double mean_trade_size = 500.0;   // shares, rounded up to 100-share lots

    WindowingConfig windowing;

    /// Throws Error(InvalidConfig).
    void check() const;
};

enum class Aggressor { Buy, Sell };

struct Trade {
    std::string stock_id;
    std::string day_id;
    double timestamp = 0.0;
    double price = 0.0;
    double volume = 0.0;
    Aggressor aggressor = Aggressor::Buy;
};

struct TruthRow {
    std::string stock_id;
    std::string day_id;
    int t = 0;
    Side side = Side::Bid;
    double W = 0.0;
    double c = 0.0;
};

struct SynthDataset {
    std::vector<BookSnapshot> snapshots;  // sorted by (stock, day, timestamp)
    std::vector<Trade> trades;            // sorted by (stock, day, timestamp)
    std::vector<TruthRow> truth;          // sorted by (stock, day, t, side)
};

[[nodiscard]] std::string stock_name(int index);
[[nodiscard]] std::string day_name(int index);

/// Books and trades with known per-window (W, c). Level depths sit at
/// `depth_fractions` of the side total; prices invert w = W D^c around a
/// geometric random-walk mid.
[[nodiscard]] SynthDataset generate(const SynthConfig& config);

/// The ground-truth rows of generate(config) without building any book.
[[nodiscard]] std::vector<TruthRow> generate_truth(const SynthConfig& config);

/// Coefficients of log c_t = alpha + beta log c_{t-1} + gamma kappa_{t-1} + lambda r_t + eta g_t + e.
struct DynamicTruth {
    double alpha = -0.3311;
    double beta = 0.4386;
    double gamma = -0.114;
    double lambda = 7.4308;
    double eta = -1647.9664;
    double noise_std = 0.1;
};

/// Coefficients of log p_t = alpha + beta log p_{t-1} + gamma r_book_{t-1} + lambda r_{t-1} + e.
struct DiscoveryTruth {
    double alpha = 0.0001;
    double beta = 0.9999;
    double gamma = 0.297;
    double lambda = 0.1511;
    double noise_std = 0.001;
};

/// Interval-record panels drawn directly from the two regression equations.
/// Exogenous inputs: g_t log-normal around 29 * snapshot_sigma^2, W log-normal
/// around `W_level`, volumes log-normal around `mean_volume`. Each day opens at a
/// log-normal level around `initial_mid`. Large log c noise can make the
/// c -> r_book -> r -> c loop explode; generate_records then throws
/// Error(InvalidConfig).
struct RecordSynthConfig {
    std::uint64_t seed = 7;
    int n_stocks = 3;
    int n_days = 20;
    int intervals_per_day = 48;
    DynamicTruth bid{};
    DynamicTruth ask{-0.2928, 0.4557, -0.1341, -6.8807, -2012.1898, 0.1};
    DiscoveryTruth discovery{};
    double initial_mid = 10.0;
    double day_level_std = 0.3;
    double snapshot_sigma = 1e-3;
    double W_level = 1.3e-5;
    double mean_volume = 5000.0;
};

[[nodiscard]] std::vector<IntervalRecord> generate_records(const RecordSynthConfig& config);

}  // namespace lobconvex::synth
