#include "lobconvex/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "lobconvex/error.hpp"

namespace lobconvex::synth {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stock, std::uint64_t day, std::uint64_t tag)
    : engine_(splitmix64(seed ^ splitmix64(stock) ^ splitmix64(day << 20) ^ splitmix64(tag << 40))) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

long Rng::poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean > 500.0) return std::max(0L, std::lround(mean + std::sqrt(mean) * normal()));
    // Knuth, in chunks so exp(-mean) does not underflow.
    long k = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double step = std::min(remaining, 50.0);
        remaining -= step;
        const double limit = std::exp(-step);
        double p = uniform();
        while (p > limit) {
            ++k;
            p *= uniform();
        }
    }
    return k;
}

std::string stock_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "S%03d", index + 1);
    return buf;
}

std::string day_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "D%03d", index + 1);
    return buf;
}

namespace {

void check_process(const ProcessSpec& p, const char* what, int n_intervals) {
    const auto fail = [&](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, std::string(what) + ": " + msg); };
    if (!std::isfinite(p.level) || !std::isfinite(p.coefficient) || !std::isfinite(p.innovation_std) ||
        !std::isfinite(p.slope))
        fail("parameters must be finite");
    if (!(p.level > 0.0)) fail("level must be positive");
    if (p.innovation_std < 0.0) fail("innovation std must be non-negative");
    if (p.kind == ProcessKind::AR1 && !(std::fabs(p.coefficient) < 1.0)) fail("AR(1) coefficient must lie in (-1, 1)");
    if (p.kind == ProcessKind::LinearDrift && !(p.level + p.slope * (n_intervals - 1) > 0.0))
        fail("linear drift must stay positive over the day");
}

std::vector<double> draw_process(const ProcessSpec& p, Rng& rng, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    switch (p.kind) {
        case ProcessKind::Constant:
            std::fill(x.begin(), x.end(), p.level);
            break;
        case ProcessKind::AR1: {
            const double center = std::log(p.level);
            const double stationary_std = p.innovation_std / std::sqrt(1.0 - p.coefficient * p.coefficient);
            double dev = stationary_std * rng.normal();
            for (int t = 0; t < n; ++t) {
                if (t > 0) dev = p.coefficient * dev + p.innovation_std * rng.normal();
                x[static_cast<std::size_t>(t)] = std::exp(center + dev);
            }
            break;
        }
        case ProcessKind::LinearDrift:
            for (int t = 0; t < n; ++t) {
                const double noise = p.innovation_std > 0.0 ? std::exp(p.innovation_std * rng.normal()) : 1.0;
                x[static_cast<std::size_t>(t)] = (p.level + p.slope * t) * noise;
            }
            break;
    }
    return x;
}

/// Cumulative integer depths at the configured fractions, strictly increasing.
std::array<double, kBookLevels> depth_ladder(double total, const std::array<double, kBookLevels>& fractions) {
    std::array<double, kBookLevels> cumulative{};
    double prev = 0.0;
    for (std::size_t i = 0; i < kBookLevels; ++i) {
        cumulative[i] = std::max(prev + 1.0, std::round(fractions[i] * total));
        prev = cumulative[i];
    }
    return cumulative;
}

struct WindowTruth {
    double c_bid, c_ask, W_bid, W_ask;
};

struct Ladders {
    std::array<double, kBookLevels> bid, ask;
};

Ladders ladders_of(const SynthConfig& cfg) {
    return {depth_ladder(cfg.depth_total_bid, cfg.depth_fractions), depth_ladder(cfg.depth_total_ask, cfg.depth_fractions)};
}

std::vector<WindowTruth> day_truth(const SynthConfig& cfg, int stock, int day, const Ladders& ladders) {
    const int n = cfg.windowing.intervals_per_day;
    Rng rng(cfg.seed, static_cast<std::uint64_t>(stock), static_cast<std::uint64_t>(day), 0);
    const auto c_bid = draw_process(cfg.c_bid, rng, n);
    const auto c_ask = draw_process(cfg.c_ask, rng, n);
    const auto W_ask = draw_process(cfg.W, rng, n);

    std::vector<WindowTruth> out(static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < out.size(); ++t) {
        const double w_ask_1 = W_ask[t] * std::pow(ladders.ask[0], c_ask[t]);
        if (!(w_ask_1 < std::numbers::ln2))
            throw Error(ErrorCode::InvalidConfig, "best-ask deviation too large to keep the quoted mid");
        // exp(w_ask_1) + exp(-w_bid_1) = 2 keeps (best bid + best ask) / 2 on the anchor mid.
        const double w_bid_1 = -std::log1p(-std::expm1(w_ask_1));
        out[t] = {c_bid[t], c_ask[t], w_bid_1 / std::pow(ladders.bid[0], c_bid[t]), W_ask[t]};
    }
    return out;
}

double round_to_tick(double price, double tick, bool up) {
    const double inv = std::round(1.0 / tick);
    const double units = price * inv;
    const double k = up ? std::ceil(units - 1e-7) : std::floor(units + 1e-7);
    return k / inv;
}

}  // namespace

void SynthConfig::check() const {
    windowing.check();
    if (n_stocks <= 0 || n_days <= 0) throw Error(ErrorCode::InvalidConfig, "stock and day counts must be positive");
    const int n = windowing.intervals_per_day;
    check_process(c_bid, "c_bid", n);
    check_process(c_ask, "c_ask", n);
    check_process(W, "W", n);
    if (!std::isfinite(initial_mid) || !(initial_mid > 0.0)) throw Error(ErrorCode::InvalidConfig, "initial mid must be positive");
    if (!std::isfinite(sigma) || sigma < 0.0) throw Error(ErrorCode::InvalidConfig, "sigma must be non-negative");
    if (!(depth_total_bid >= static_cast<double>(kBookLevels)) || !(depth_total_ask >= static_cast<double>(kBookLevels)))
        throw Error(ErrorCode::InvalidConfig, "depth totals must cover one share per level");
    for (std::size_t i = 0; i < kBookLevels; ++i) {
        if (!(depth_fractions[i] > 0.0) || (i > 0 && !(depth_fractions[i] > depth_fractions[i - 1])))
            throw Error(ErrorCode::InvalidConfig, "depth fractions must be positive and increasing");
    }
    if (!std::isfinite(noise_std) || noise_std < 0.0) throw Error(ErrorCode::InvalidConfig, "noise std must be non-negative");
    if (tick_rounding) {
        const double inv = 1.0 / tick;
        if (!(tick > 0.0) || std::fabs(inv - std::round(inv)) > 1e-9)
            throw Error(ErrorCode::InvalidConfig, "tick must be 1/k for an integer k");
    }
    if (!std::isfinite(trades_per_window) || trades_per_window < 0.0 || !(mean_trade_size > 0.0))
        throw Error(ErrorCode::InvalidConfig, "trade intensity and size must be non-negative");
}

std::vector<TruthRow> generate_truth(const SynthConfig& cfg) {
    cfg.check();
    const auto ladders = ladders_of(cfg);
    std::vector<TruthRow> rows;
    for (int s = 0; s < cfg.n_stocks; ++s) {
        for (int d = 0; d < cfg.n_days; ++d) {
            const auto truth = day_truth(cfg, s, d, ladders);
            for (std::size_t t = 0; t < truth.size(); ++t) {
                const int ti = static_cast<int>(t) + 1;
                rows.push_back({stock_name(s), day_name(d), ti, Side::Bid, truth[t].W_bid, truth[t].c_bid});
                rows.push_back({stock_name(s), day_name(d), ti, Side::Ask, truth[t].W_ask, truth[t].c_ask});
            }
        }
    }
    return rows;
}

SynthDataset generate(const SynthConfig& cfg) {
    cfg.check();
    const auto ladders = ladders_of(cfg);
    const auto& win = cfg.windowing;
    const int slots = win.slots_per_interval();

    SynthDataset out;
    out.truth = generate_truth(cfg);
    out.snapshots.reserve(static_cast<std::size_t>(cfg.n_stocks) * static_cast<std::size_t>(cfg.n_days) *
                          static_cast<std::size_t>(win.intervals_per_day * slots));

    std::array<double, kBookLevels> bid_depths{}, ask_depths{};
    for (std::size_t i = 0; i < kBookLevels; ++i) {
        bid_depths[i] = ladders.bid[i] - (i > 0 ? ladders.bid[i - 1] : 0.0);
        ask_depths[i] = ladders.ask[i] - (i > 0 ? ladders.ask[i - 1] : 0.0);
    }

    for (int s = 0; s < cfg.n_stocks; ++s) {
        for (int d = 0; d < cfg.n_days; ++d) {
            const auto truth = day_truth(cfg, s, d, ladders);
            Rng mid_rng(cfg.seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(d), 1);
            Rng noise_rng(cfg.seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(d), 2);
            Rng trade_rng(cfg.seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(d), 3);
            double mid = cfg.initial_mid;
            bool first = true;

            for (int t = 1; t <= win.intervals_per_day; ++t) {
                const auto& wt = truth[static_cast<std::size_t>(t - 1)];
                const double start = (t - 1) * win.interval_sec;
                const double window_open_mid = mid;

                for (int theta = 0; theta < slots; ++theta) {
                    if (!first) mid *= std::exp(cfg.sigma * mid_rng.normal());
                    first = false;

                    BookSnapshot snap;
                    snap.stock_id = stock_name(s);
                    snap.day_id = day_name(d);
                    snap.timestamp = start + theta * win.snapshot_spacing_sec;
                    snap.bid_depths = bid_depths;
                    snap.ask_depths = ask_depths;

                    double prev_bid_w = 0.0, prev_ask_w = 0.0;
                    for (std::size_t i = 0; i < kBookLevels; ++i) {
                        double wb = wt.W_bid * std::pow(ladders.bid[i], wt.c_bid);
                        double wa = wt.W_ask * std::pow(ladders.ask[i], wt.c_ask);
                        if (cfg.noise_std > 0.0) {
                            wb *= std::exp(cfg.noise_std * noise_rng.normal());
                            wa *= std::exp(cfg.noise_std * noise_rng.normal());
                            // Noise must not reorder the levels.
                            wb = std::max(wb, prev_bid_w * (1.0 + 1e-6));
                            wa = std::max(wa, prev_ask_w * (1.0 + 1e-6));
                        }
                        prev_bid_w = wb;
                        prev_ask_w = wa;
                        snap.bid_quotes[i] = mid * std::exp(-wb);
                        snap.ask_quotes[i] = mid * std::exp(wa);
                    }

                    if (cfg.tick_rounding) {
                        const double inv = std::round(1.0 / cfg.tick);
                        for (std::size_t i = 0; i < kBookLevels; ++i) {
                            double b = round_to_tick(snap.bid_quotes[i], cfg.tick, false);
                            double a = round_to_tick(snap.ask_quotes[i], cfg.tick, true);
                            if (i > 0) {
                                b = std::min(b, std::round((snap.bid_quotes[i - 1]) * inv - 1.0) / inv);
                                a = std::max(a, std::round((snap.ask_quotes[i - 1]) * inv + 1.0) / inv);
                            }
                            snap.bid_quotes[i] = b;
                            snap.ask_quotes[i] = a;
                        }
                        if (!(snap.bid_quotes[kBookLevels - 1] > 0.0))
                            throw Error(ErrorCode::InvalidConfig, "tick rounding drove a bid price to zero");
                    }
                    out.snapshots.push_back(std::move(snap));
                }

                if (cfg.trades_per_window > 0.0) {
                    const long n_trades = trade_rng.poisson(cfg.trades_per_window);
                    std::vector<Trade> window_trades;
                    for (long k = 0; k < n_trades; ++k) {
                        Trade tr;
                        tr.stock_id = stock_name(s);
                        tr.day_id = day_name(d);
                        tr.timestamp = start + std::floor(trade_rng.uniform() * win.interval_sec);
                        const double lots = std::ceil(-std::log(1.0 - trade_rng.uniform()) * cfg.mean_trade_size / 100.0);
                        tr.volume = 100.0 * std::max(1.0, lots);
                        tr.aggressor = trade_rng.uniform() < 0.5 ? Aggressor::Buy : Aggressor::Sell;
                        const double w1 = tr.aggressor == Aggressor::Buy
                                              ? wt.W_ask * std::pow(ladders.ask[0], wt.c_ask)
                                              : -wt.W_bid * std::pow(ladders.bid[0], wt.c_bid);
                        tr.price = window_open_mid * std::exp(w1);
                        if (cfg.tick_rounding) tr.price = round_to_tick(tr.price, cfg.tick, w1 > 0.0);
                        window_trades.push_back(std::move(tr));
                    }
                    std::stable_sort(window_trades.begin(), window_trades.end(),
                                     [](const Trade& a, const Trade& b) { return a.timestamp < b.timestamp; });
                    for (auto& tr : window_trades) out.trades.push_back(std::move(tr));
                }
            }
        }
    }
    return out;
}

std::vector<IntervalRecord> generate_records(const RecordSynthConfig& cfg) {
    if (cfg.n_stocks <= 0 || cfg.n_days <= 0 || cfg.intervals_per_day < 3)
        throw Error(ErrorCode::InvalidConfig, "need positive stock/day counts and at least 3 intervals");

    const auto stationary_log_c = [](const DynamicTruth& d) {
        const double persistence = d.beta;
        return std::fabs(persistence) < 1.0 ? d.alpha / (1.0 - persistence) : 0.0;
    };

    std::vector<IntervalRecord> out;
    for (int s = 0; s < cfg.n_stocks; ++s) {
        for (int d = 0; d < cfg.n_days; ++d) {
            Rng rng(cfg.seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(d), 7);
            const auto n = static_cast<std::size_t>(cfg.intervals_per_day);
            std::vector<double> log_p(n), log_cb(n), log_ca(n), g(n), Wb(n), Wa(n), vb(n), vs(n), rbook(n);
            std::vector<std::optional<double>> r(n);

            const auto draw_exogenous = [&](std::size_t t) {
                g[t] = 29.0 * cfg.snapshot_sigma * cfg.snapshot_sigma * std::exp(0.5 * rng.normal());
                Wb[t] = cfg.W_level * std::exp(0.2 * rng.normal());
                Wa[t] = cfg.W_level * std::exp(0.2 * rng.normal());
                vb[t] = std::round(cfg.mean_volume * std::exp(0.5 * rng.normal()));
                vs[t] = std::round(cfg.mean_volume * std::exp(0.5 * rng.normal()));
            };
            const auto book_ret = [&](std::size_t t) {
                return Wa[t] * std::pow(vb[t], std::exp(log_ca[t])) - Wb[t] * std::pow(vs[t], std::exp(log_cb[t]));
            };
            const auto dynamic_step = [&](const DynamicTruth& truth, const std::vector<double>& lc, std::size_t t) {
                return truth.alpha + truth.beta * lc[t - 1] + truth.gamma * (lc[t - 1] - lc[t - 2]) +
                       truth.lambda * *r[t] + truth.eta * g[t] + truth.noise_std * rng.normal();
            };

            const auto& disc = cfg.discovery;
            for (std::size_t t = 0; t < n; ++t) {
                if (t == 0) {
                    log_p[t] = std::log(cfg.initial_mid) + cfg.day_level_std * rng.normal();
                } else {
                    log_p[t] = disc.alpha + disc.beta * log_p[t - 1] + disc.gamma * rbook[t - 1] +
                               (r[t - 1] ? disc.lambda * *r[t - 1] : 0.0) + disc.noise_std * rng.normal();
                    r[t] = log_p[t] - log_p[t - 1];
                }
                draw_exogenous(t);
                if (t < 2) {
                    log_cb[t] = stationary_log_c(cfg.bid) + cfg.bid.noise_std * rng.normal();
                    log_ca[t] = stationary_log_c(cfg.ask) + cfg.ask.noise_std * rng.normal();
                } else {
                    log_cb[t] = dynamic_step(cfg.bid, log_cb, t);
                    log_ca[t] = dynamic_step(cfg.ask, log_ca, t);
                }
                rbook[t] = book_ret(t);
                if (!std::isfinite(log_p[t]) || !std::isfinite(rbook[t]) || std::fabs(log_cb[t]) > 20.0 ||
                    std::fabs(log_ca[t]) > 20.0)
                    throw Error(ErrorCode::InvalidConfig, "record generator diverged; lower the log c noise or volumes");
            }

            for (std::size_t t = 0; t < n; ++t) {
                IntervalRecord rec;
                rec.stock_id = stock_name(s);
                rec.day_id = day_name(d);
                rec.t = static_cast<int>(t) + 1;
                rec.c_bid = std::exp(log_cb[t]);
                rec.c_ask = std::exp(log_ca[t]);
                rec.W_bid = Wb[t];
                rec.W_ask = Wa[t];
                rec.mid = std::exp(log_p[t]);
                rec.r = r[t];
                rec.g = g[t];
                rec.v_buy = vb[t];
                rec.v_sell = vs[t];
                out.push_back(std::move(rec));
            }
        }
    }
    return out;
}

}  // namespace lobconvex::synth
