#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adjrisk/backtest.hpp"

namespace adjrisk::cli {

struct PriceSource {
    std::optional<std::string> path;
    std::size_t synthetic_observations = 0;
    double synthetic_volatility = 0.012;
};

// Benchmark profile calibrated once on a date range.
struct FrameProfile {
    Date start;
    Date end;
    std::optional<RiskFamilySpec> family;
    bool use_benchmark_series = true;
};

using ProfileSpec = std::variant<TargetRiskProfile, ReevaluatedProfile, FrameProfile>;

struct MeasureSpec {
    std::string name;
    RiskFamilySpec family;
    ProfileSpec profile;
};

struct RunConfig {
    std::size_t window = 60;
    double grid_step = 0.02;
    double level_lower = 1e-4;
    double level_upper = 0.9999;
    std::vector<MeasureSpec> measures;
    std::vector<std::pair<std::string, std::string>> reldiffs;
    PriceSource prices;
    std::optional<PriceSource> benchmark_prices;
    std::optional<std::string> output;
    std::uint64_t seed = 42;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> window;
    std::optional<double> grid_step;
    std::optional<std::string> out;
};

// Parses and validates a JSON run configuration. Relative paths resolve
// against the configuration file's directory. Throws UsageError listing
// every problem found.
RunConfig load_run_config(const std::string& path, const Overrides& overrides);

PriceSeries load_price_source(const PriceSource& src, std::uint64_t seed,
                              std::vector<std::string>& warnings);

// Turns frame profiles into fixed ones using the given return series.
BacktestConfig resolve_backtest_config(const RunConfig& cfg, const ReturnSeries& prices,
                                       const ReturnSeries* benchmark);

}  // namespace adjrisk::cli
