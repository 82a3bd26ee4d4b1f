#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lobconvex {

enum class ErrorCode {
    InsufficientData,
    SingularFit,
    EmptyPanel,
    NoSeries,
    InsufficientPositiveLags,
    NoCompleteDays,
    RankDeficient,
    TooFewObservations,
    MissingVolumes,
    DegenerateEstimate,
    InvalidConfig,
    InvalidArgument,
    FileNotFound,
    BadHeader,
    UnknownSide,
    IoError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the panel estimator, the pipeline) can record it as a reason.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace lobconvex
