#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lobconvex {

struct Regressor {
    std::string name;
    std::vector<double> values;
};

/// Classical OLS output. Coefficients are in design order, intercept first when present.
struct RegressionResult {
    std::vector<std::string> names;
    std::vector<double> estimates;
    std::vector<double> std_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values;
    double r_squared = 0.0;
    double rss = 0.0;
    double tss = 0.0;
    std::size_t n_obs = 0;
    std::size_t df_resid = 0;

    /// Index of a named coefficient; throws Error(InvalidArgument) if absent.
    [[nodiscard]] std::size_t index_of(const std::string& name) const;
};

/// Least squares of y on the regressors, with an intercept column named
/// `intercept` prepended when given. Standard errors use the homoskedastic
/// estimator s^2 (X'X)^-1 with s^2 = RSS / (n - k); p-values are two-sided from
/// the t distribution with n - k degrees of freedom. R^2 is centred with an
/// intercept and uncentred without one.
///
/// A zero standard error gives t = +-inf (p = 0), or NaN t and p when the
/// estimate is itself zero.
///
/// Throws Error(TooFewObservations) unless n > k, Error(RankDeficient) when the
/// design lacks full column rank, Error(InvalidArgument) on length mismatch.
[[nodiscard]] RegressionResult ols(std::span<const double> y, std::span<const Regressor> regressors,
                                   const std::optional<std::string>& intercept = std::string("const"));

}  // namespace lobconvex
