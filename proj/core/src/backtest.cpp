#include "adjrisk/backtest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace adjrisk {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

int parse_int(std::string_view s) {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad integer");
    }
    return v;
}

}  // namespace

Date parse_date(std::string_view text) {
    text = trim(text);
    const bool shape = text.size() == 10 && text[4] == '-' && text[7] == '-' &&
                       std::all_of(text.begin(), text.end(),
                                   [](char c) { return c == '-' || (c >= '0' && c <= '9'); });
    if (shape) {
        const Date d{std::chrono::year{parse_int(text.substr(0, 4))},
                     std::chrono::month{static_cast<unsigned>(parse_int(text.substr(5, 2)))},
                     std::chrono::day{static_cast<unsigned>(parse_int(text.substr(8, 2)))}};
        if (d.ok()) {
            return d;
        }
    }
    throw std::invalid_argument("not an ISO date (YYYY-MM-DD): '" + std::string(text) + "'");
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

PriceSeries::PriceSeries(std::vector<PricePoint> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) {
        throw std::invalid_argument("PriceSeries: empty series");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!(rows_[i].price > 0.0) || !std::isfinite(rows_[i].price)) {
            throw std::invalid_argument("PriceSeries: price on " + format_date(rows_[i].date) +
                                        " must be positive");
        }
        if (i > 0 && !(rows_[i - 1].date < rows_[i].date)) {
            throw std::invalid_argument("PriceSeries: dates must be strictly increasing at " +
                                        format_date(rows_[i].date));
        }
    }
}

LoadedPrices read_prices(std::istream& in, const std::string& source) {
    struct Row {
        PricePoint point;
        std::size_t line;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error(source + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        if (!header_seen) {
            if (text != "date,price") {
                fail("expected header 'date,price'");
            }
            header_seen = true;
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
            fail("expected two fields 'date,price'");
        }
        Date date;
        try {
            date = parse_date(text.substr(0, comma));
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        const std::string_view price_text = trim(text.substr(comma + 1));
        double price = 0.0;
        auto res = std::from_chars(price_text.data(), price_text.data() + price_text.size(), price);
        if (price_text.empty() || res.ec != std::errc() ||
            res.ptr != price_text.data() + price_text.size() || !std::isfinite(price)) {
            fail("missing or malformed price '" + std::string(price_text) + "'");
        }
        if (!(price > 0.0)) {
            fail("non-positive price " + std::string(price_text));
        }
        rows.push_back({{date, price}, line_no});
    }
    if (!header_seen || rows.empty()) {
        throw std::runtime_error(source + ": no price rows");
    }
    std::vector<std::string> warnings;
    const bool sorted = std::is_sorted(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.point.date < b.point.date;
    });
    if (!sorted) {
        warnings.push_back(source + ": rows were not in date order and have been sorted");
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            return a.point.date < b.point.date;
        });
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].point.date == rows[i - 1].point.date) {
            throw std::runtime_error(source + ":" + std::to_string(rows[i].line) +
                                     ": duplicate date " + format_date(rows[i].point.date) +
                                     " (also on line " + std::to_string(rows[i - 1].line) + ")");
        }
    }
    std::vector<PricePoint> points;
    points.reserve(rows.size());
    for (const Row& r : rows) {
        points.push_back(r.point);
    }
    return LoadedPrices{PriceSeries(std::move(points)), std::move(warnings)};
}

LoadedPrices load_prices(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open price file '" + path + "'");
    }
    return read_prices(in, path);
}

void write_prices(std::ostream& out, const PriceSeries& s) {
    out << "date,price\n";
    char buf[64];
    for (const PricePoint& p : s.rows()) {
        std::snprintf(buf, sizeof buf, "%.17g", p.price);
        out << format_date(p.date) << ',' << buf << '\n';
    }
}

PriceSeries synthetic_prices(std::size_t n, std::uint64_t seed, double daily_vol,
                             double start_price) {
    using std::chrono::days;
    using std::chrono::sys_days;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> shock(0.0, daily_vol);
    std::vector<PricePoint> rows;
    rows.reserve(n);
    sys_days day{std::chrono::year{2000} / std::chrono::January / 3};
    double price = start_price;
    for (std::size_t i = 0; i < n; ++i) {
        rows.push_back({Date{day}, price});
        price *= std::exp(shock(rng));
        do {
            day += days{1};
        } while (std::chrono::weekday{day} == std::chrono::Saturday ||
                 std::chrono::weekday{day} == std::chrono::Sunday);
    }
    return PriceSeries(std::move(rows));
}

ReturnSeries neg_log_returns(const PriceSeries& s) {
    if (s.size() < 2) {
        throw std::invalid_argument("neg_log_returns: need at least two prices");
    }
    ReturnSeries out;
    const auto& rows = s.rows();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        out.dates.push_back(rows[i].date);
        out.values.push_back(-std::log(rows[i].price / rows[i - 1].price));
    }
    return out;
}

std::pair<ReturnSeries, ReturnSeries> intersect_dates(const ReturnSeries& a,
                                                      const ReturnSeries& b) {
    ReturnSeries ra;
    ReturnSeries rb;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a.dates[i] < b.dates[j]) {
            ++i;
        } else if (b.dates[j] < a.dates[i]) {
            ++j;
        } else {
            ra.dates.push_back(a.dates[i]);
            ra.values.push_back(a.values[i]);
            rb.dates.push_back(b.dates[j]);
            rb.values.push_back(b.values[j]);
            ++i;
            ++j;
        }
    }
    return {std::move(ra), std::move(rb)};
}

LevelGrid BacktestConfig::level_grid() const {
    return LevelGrid{grid_step, level_lower, level_upper, limit_offset, {}};
}

BenchmarkProfileOptions BacktestConfig::benchmark_options() const {
    return BenchmarkProfileOptions{default_benchmark_grid(grid_step, level_lower, level_upper),
                                   true};
}

std::vector<std::string> BacktestConfig::validate() const {
    std::vector<std::string> errors;
    if (window < 2) {
        errors.push_back("window must be at least 2");
    }
    if (!(grid_step > 0.0 && grid_step < 0.5)) {
        errors.push_back("grid_step must lie in (0, 0.5)");
    }
    if (!(level_lower > 0.0 && level_lower < level_upper && level_upper < 1.0)) {
        errors.push_back("level bounds must satisfy 0 < lower < upper < 1");
    }
    if (!(limit_offset >= 0.0 && limit_offset < 0.01)) {
        errors.push_back("limit_offset must lie in [0, 0.01)");
    }
    if (measures.empty()) {
        errors.push_back("at least one measure is required");
    }
    std::set<std::string> names;
    for (const MeasureConfig& m : measures) {
        if (m.name.empty() || m.name.find_first_of(",\"\n\r") != std::string::npos) {
            errors.push_back("measure name '" + m.name +
                             "' must be non-empty without commas, quotes or newlines");
        }
        if (!names.insert(m.name).second) {
            errors.push_back("duplicate measure name '" + m.name + "'");
        }
        if (const auto* re = std::get_if<ReevaluatedProfile>(&m.profile)) {
            if (re->lookback < 1) {
                errors.push_back("measure '" + m.name + "': lookback must be positive");
            }
        }
    }
    for (const auto& [a, b] : reldiffs) {
        for (const std::string& n : {a, b}) {
            if (names.count(n) == 0) {
                errors.push_back("relative difference refers to unknown measure '" + n + "'");
            }
        }
    }
    return errors;
}

TargetRiskProfile calibrate_frame_profile(const ReturnSeries& returns, const Date& start,
                                          const Date& end, const RiskFamilySpec& family,
                                          const BenchmarkProfileOptions& opts,
                                          std::size_t min_observations) {
    if (end < start) {
        throw std::invalid_argument("calibrate_frame_profile: frame ends before it starts");
    }
    std::vector<double> frame;
    for (std::size_t i = 0; i < returns.size(); ++i) {
        if (!(returns.dates[i] < start) && !(end < returns.dates[i])) {
            frame.push_back(returns.values[i]);
        }
    }
    if (frame.size() < std::max<std::size_t>(min_observations, 1)) {
        throw BacktestError("calibrate_frame_profile: frame " + format_date(start) + " to " +
                            format_date(end) + " has " + std::to_string(frame.size()) +
                            " observations, need " + std::to_string(min_observations));
    }
    return benchmark_profile(family, SampleWindow(std::move(frame)), opts);
}

std::size_t expected_rows(std::size_t observations, const BacktestConfig& cfg) {
    std::size_t need = cfg.window;
    for (const MeasureConfig& m : cfg.measures) {
        if (const auto* re = std::get_if<ReevaluatedProfile>(&m.profile)) {
            need = std::max(need, re->lookback);
        }
    }
    return observations >= need ? observations - need + 1 : 0;
}

namespace {

BacktestOutput run_aligned(const ReturnSeries& data, const ReturnSeries& bench,
                           const BacktestConfig& cfg) {
    const std::vector<std::string> errors = cfg.validate();
    if (!errors.empty()) {
        std::string msg = "invalid backtest configuration:";
        for (const std::string& e : errors) {
            msg += "\n  " + e;
        }
        throw std::invalid_argument(msg);
    }
    const std::size_t n = data.size();
    const std::size_t rows = expected_rows(n, cfg);
    if (rows == 0) {
        throw BacktestError("backtest: " + std::to_string(n) +
                            " observations are not enough for the window/lookback");
    }
    const std::size_t first = n - rows;

    BacktestOutput out;
    for (const MeasureConfig& m : cfg.measures) {
        out.measure_names.push_back(m.name);
    }
    out.reldiff_pairs = cfg.reldiffs;
    std::vector<std::pair<std::size_t, std::size_t>> pair_idx;
    for (const auto& [a, b] : cfg.reldiffs) {
        auto idx = [&](const std::string& name) {
            return static_cast<std::size_t>(
                std::find(out.measure_names.begin(), out.measure_names.end(), name) -
                out.measure_names.begin());
        };
        pair_idx.emplace_back(idx(a), idx(b));
    }

    const LevelGrid grid = cfg.level_grid();
    const BenchmarkProfileOptions bench_opts = cfg.benchmark_options();
    out.rows.reserve(rows);
    for (std::size_t t = first; t < n; ++t) {
        BacktestRow row;
        row.date = data.dates[t];
        try {
            const SampleWindow window(std::vector<double>(
                data.values.begin() + static_cast<std::ptrdiff_t>(t + 1 - cfg.window),
                data.values.begin() + static_cast<std::ptrdiff_t>(t + 1)));
            for (const MeasureConfig& m : cfg.measures) {
                if (const auto* fixed = std::get_if<TargetRiskProfile>(&m.profile)) {
                    row.results.push_back(adjusted_value_hat(m.family, *fixed, window, grid));
                    continue;
                }
                const auto& re = std::get<ReevaluatedProfile>(m.profile);
                const SampleWindow trailing(std::vector<double>(
                    bench.values.begin() + static_cast<std::ptrdiff_t>(t + 1 - re.lookback),
                    bench.values.begin() + static_cast<std::ptrdiff_t>(t + 1)));
                const TargetRiskProfile g = benchmark_profile(
                    re.benchmark_family.value_or(m.family), trailing, bench_opts);
                row.results.push_back(adjusted_value_hat(m.family, g, window, grid));
            }
        } catch (const std::exception& e) {
            throw BacktestError("backtest failed on " + format_date(row.date) + ": " + e.what());
        }
        for (const auto& [ia, ib] : pair_idx) {
            const ExtReal& a = row.results[ia].value;
            const ExtReal& b = row.results[ib].value;
            if (a.is_finite() && b.is_finite() && b.value() != 0.0) {
                row.reldiffs.emplace_back((a.value() - b.value()) / b.value());
            } else {
                row.reldiffs.emplace_back(std::nullopt);
            }
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace

BacktestOutput run_backtest(const ReturnSeries& data, const BacktestConfig& cfg) {
    return run_aligned(data, data, cfg);
}

BacktestOutput compare_indices(const ReturnSeries& a, const ReturnSeries& b,
                               const BacktestConfig& cfg) {
    auto [ra, rb] = intersect_dates(a, b);
    if (ra.size() == 0) {
        throw BacktestError("compare_indices: the two series share no dates");
    }
    return run_aligned(ra, rb, cfg);
}

void write_output(std::ostream& out, const BacktestOutput& o) {
    if (o.rows.empty()) {
        throw std::invalid_argument("write_output: no rows");
    }
    out << "date";
    for (const std::string& name : o.measure_names) {
        out << ',' << name << ',' << name << "_level";
    }
    for (const auto& [a, b] : o.reldiff_pairs) {
        out << ",reldiff_" << a << '_' << b;
    }
    out << '\n';
    for (const BacktestRow& row : o.rows) {
        out << format_date(row.date);
        for (const AdjustedResult& r : row.results) {
            out << ',' << format_significant(r.value, 10) << ','
                << format_significant(ExtReal(r.argmax_level), 10);
        }
        for (const auto& d : row.reldiffs) {
            out << ',';
            if (d) {
                out << format_significant(ExtReal(*d), 10);
            }
        }
        out << '\n';
    }
}

void export_output(const BacktestOutput& o, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write output file '" + path + "'");
    }
    write_output(out, o);
    out.flush();
    if (!out) {
        throw std::runtime_error("error while writing output file '" + path + "'");
    }
}

std::vector<ColumnSummary> summarize_reldiffs(const BacktestOutput& o) {
    std::vector<ColumnSummary> out;
    for (std::size_t k = 0; k < o.reldiff_pairs.size(); ++k) {
        ColumnSummary s;
        s.column = "reldiff_" + o.reldiff_pairs[k].first + "_" + o.reldiff_pairs[k].second;
        std::vector<double> vals;
        for (const BacktestRow& row : o.rows) {
            if (row.reldiffs[k]) {
                vals.push_back(*row.reldiffs[k]);
            }
        }
        s.defined = vals.size();
        if (!vals.empty()) {
            double sum = 0.0;
            for (double v : vals) {
                sum += v;
            }
            s.mean = sum / static_cast<double>(vals.size());
            const std::size_t mid = (vals.size() - 1) / 2;
            std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(mid),
                             vals.end());
            s.lower_median = vals[mid];
        } else {
            s.mean = std::nan("");
            s.lower_median = std::nan("");
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace adjrisk
