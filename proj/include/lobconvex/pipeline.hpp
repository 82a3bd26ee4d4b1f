#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lobconvex/lob_model.hpp"

namespace lobconvex {

enum class Stage { Estimate, Acf, Intraday, Dynamics, Discovery };

[[nodiscard]] std::string_view to_string(Stage stage) noexcept;

struct RunConfig {
    std::filesystem::path snapshots;
    std::optional<std::filesystem::path> trades;
    std::filesystem::path output_dir;

    WindowingConfig windowing;
    CurveConfig curve;

    int acf_max_lag = 40;
    std::size_t acf_min_pairs = 5;
    std::size_t min_positive_lags = 5;
    std::size_t ar1_min_pairs = 100;
    bool lag_exogenous = false;
    bool include_degenerate = false;
    int min_days = 0;  // stocks with fewer distinct days are dropped; 0 keeps all
    std::uint64_t seed = 42;

    std::set<Stage> stages{Stage::Estimate, Stage::Acf, Stage::Intraday, Stage::Dynamics, Stage::Discovery};

    /// Throws Error(InvalidConfig).
    void check() const;
    /// Canonical text of every result-relevant setting (paths excluded).
    [[nodiscard]] std::string canonical() const;
};

/// Raised when a stage fails; what() is "<stage>: <cause>".
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& cause)
        : std::runtime_error(stage + ": " + cause), stage_(std::move(stage)) {}
    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

struct RunReport {
    std::vector<std::string> files;                               // in write order, manifest last
    std::vector<std::pair<std::string, std::string>> manifest;   // key, value in file order
};

/// Runs ingestion, windowing and estimation, then every selected analysis stage,
/// writing plain CSV into `output_dir`. On failure the files written so far are
/// removed, manifest.csv records status=incomplete with the failing stage, and a
/// StageError is thrown.
RunReport run_pipeline(const RunConfig& config);

/// 64-bit FNV-1a, used for the manifest's config and input hashes.
[[nodiscard]] std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL) noexcept;

}  // namespace lobconvex
