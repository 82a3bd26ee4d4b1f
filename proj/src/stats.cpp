#include "lobconvex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "lobconvex/error.hpp"

namespace lobconvex {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::SingularFit: return "SingularFit";
        case ErrorCode::EmptyPanel: return "EmptyPanel";
        case ErrorCode::NoSeries: return "NoSeries";
        case ErrorCode::InsufficientPositiveLags: return "InsufficientPositiveLags";
        case ErrorCode::NoCompleteDays: return "NoCompleteDays";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::TooFewObservations: return "TooFewObservations";
        case ErrorCode::MissingVolumes: return "MissingVolumes";
        case ErrorCode::DegenerateEstimate: return "DegenerateEstimate";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::BadHeader: return "BadHeader";
        case ErrorCode::UnknownSide: return "UnknownSide";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

namespace stats {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double two_sided_t_pvalue(double t, double df) {
    if (std::isnan(t) || !(df > 0.0)) return kNaN;
    if (std::isinf(t)) return 0.0;
    const boost::math::students_t dist(df);
    // cdf(complement) keeps precision in the far tail.
    const double tail = boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
    return std::clamp(2.0 * tail, 0.0, 1.0);
}

double mean(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptyPanel, "mean of empty sample");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

Description describe(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptyPanel, "no values to summarize");

    Description d;
    d.n = values.size();
    d.mean = mean(values);

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    d.min = sorted.front();
    d.max = sorted.back();
    const std::size_t mid = d.n / 2;
    d.median = (d.n % 2 == 1) ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

    if (d.n < 2) {
        d.std_dev = kNaN;
        d.t_stat = kNaN;
        d.p_value = kNaN;
        return d;
    }

    double ss = 0.0;
    for (double v : values) ss += (v - d.mean) * (v - d.mean);
    d.std_dev = (d.min == d.max) ? 0.0 : std::sqrt(ss / static_cast<double>(d.n - 1));
    if (d.std_dev == 0.0) {
        d.t_stat = kNaN;
        d.p_value = kNaN;
        return d;
    }
    d.t_stat = d.mean / (d.std_dev / std::sqrt(static_cast<double>(d.n)));
    d.p_value = two_sided_t_pvalue(d.t_stat, static_cast<double>(d.n - 1));
    return d;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return kNaN;
    const auto constant = [n](std::span<const double> v) {
        return std::all_of(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n),
                           [&](double e) { return e == v[0]; });
    };
    if (constant(x) || constant(y)) return kNaN;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return kNaN;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace stats
}  // namespace lobconvex
