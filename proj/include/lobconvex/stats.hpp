#pragma once

#include <cstddef>
#include <span>

namespace lobconvex::stats {

/// Two-sided p-value of a Student t statistic with `df` degrees of freedom.
/// Infinite |t| gives 0; NaN t gives NaN.
[[nodiscard]] double two_sided_t_pvalue(double t, double df);

struct Description {
    std::size_t n = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // sample (n - 1) standard deviation, NaN when n < 2
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double t_stat = 0.0;   // mean / (std_dev / sqrt(n)); NaN when std_dev is 0 or undefined
    double p_value = 0.0;  // two-sided one-sample test of zero mean; NaN when t_stat is NaN
};

/// Throws Error(EmptyPanel) on empty input.
[[nodiscard]] Description describe(std::span<const double> values);

[[nodiscard]] double mean(std::span<const double> values);

/// Pearson correlation of two equal-length samples; NaN if either has zero variance
/// or fewer than two elements.
[[nodiscard]] double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace lobconvex::stats
