#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "adjrisk/adjusted.hpp"
#include "adjrisk/families.hpp"
#include "adjrisk/profiles.hpp"

namespace adjrisk {

using Date = std::chrono::year_month_day;

// Strict ISO-8601 calendar date "YYYY-MM-DD".
Date parse_date(std::string_view text);
std::string format_date(const Date& d);

struct PricePoint {
    Date date;
    double price;
};

// Positive prices on strictly increasing dates.
class PriceSeries {
public:
    explicit PriceSeries(std::vector<PricePoint> rows);

    [[nodiscard]] const std::vector<PricePoint>& rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }

private:
    std::vector<PricePoint> rows_;
};

struct LoadedPrices {
    PriceSeries series;
    std::vector<std::string> warnings;
};

// CSV with header "date,price"; '#' lines ignored. Out-of-order rows are
// sorted with a warning; malformed rows, duplicate dates and non-positive
// prices throw std::runtime_error naming the line.
LoadedPrices read_prices(std::istream& in, const std::string& source = "<stream>");
LoadedPrices load_prices(const std::string& path);
void write_prices(std::ostream& out, const PriceSeries& s);

// Geometric random walk on consecutive weekdays from 2000-01-03.
PriceSeries synthetic_prices(std::size_t n, std::uint64_t seed, double daily_vol = 0.012,
                             double start_price = 100.0);

struct ReturnSeries {
    std::vector<Date> dates;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

// -ln(p_t / p_{t-1}), dated at t.
ReturnSeries neg_log_returns(const PriceSeries& s);

// Returns on dates present in both series, in date order.
std::pair<ReturnSeries, ReturnSeries> intersect_dates(const ReturnSeries& a,
                                                      const ReturnSeries& b);

// Profile recalibrated each date from the trailing `lookback` benchmark
// returns ending at that date.
struct ReevaluatedProfile {
    std::size_t lookback = 60;
    // Defaults to the measure's own family.
    std::optional<RiskFamilySpec> benchmark_family;
};

using ProfileSource = std::variant<TargetRiskProfile, ReevaluatedProfile>;

struct MeasureConfig {
    std::string name;
    RiskFamilySpec family;
    ProfileSource profile;
};

struct BacktestConfig {
    std::size_t window = 60;
    double grid_step = 0.02;
    double level_lower = 1e-4;
    double level_upper = 0.9999;
    double limit_offset = 1e-9;
    std::vector<MeasureConfig> measures;
    // (A, B) pairs reported as (A - B) / B.
    std::vector<std::pair<std::string, std::string>> reldiffs;

    [[nodiscard]] LevelGrid level_grid() const;
    [[nodiscard]] BenchmarkProfileOptions benchmark_options() const;
    // Every problem found, empty when valid.
    [[nodiscard]] std::vector<std::string> validate() const;
};

class BacktestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

TargetRiskProfile calibrate_frame_profile(const ReturnSeries& returns, const Date& start,
                                          const Date& end, const RiskFamilySpec& family,
                                          const BenchmarkProfileOptions& opts = {},
                                          std::size_t min_observations = 60);

struct BacktestRow {
    Date date;
    std::vector<AdjustedResult> results;
    // Empty when B = 0 or either side is infinite.
    std::vector<std::optional<double>> reldiffs;
};

struct BacktestOutput {
    std::vector<std::string> measure_names;
    std::vector<std::pair<std::string, std::string>> reldiff_pairs;
    std::vector<BacktestRow> rows;
};

// Profiles in reevaluated mode are calibrated on `data` itself.
BacktestOutput run_backtest(const ReturnSeries& data, const BacktestConfig& cfg);
// Measures on series a, reevaluated profiles on series b, aligned by date.
BacktestOutput compare_indices(const ReturnSeries& a, const ReturnSeries& b,
                               const BacktestConfig& cfg);

// Row count for n observations under cfg.
std::size_t expected_rows(std::size_t observations, const BacktestConfig& cfg);

void write_output(std::ostream& out, const BacktestOutput& o);
void export_output(const BacktestOutput& o, const std::string& path);

struct ColumnSummary {
    std::string column;
    std::size_t defined = 0;
    double mean = 0.0;
    double lower_median = 0.0;
};

// Mean and lower median of each relative-difference column.
std::vector<ColumnSummary> summarize_reldiffs(const BacktestOutput& o);

}  // namespace adjrisk
