#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using adjrisk::BacktestConfig;
using adjrisk::BacktestError;
using adjrisk::BacktestOutput;
using adjrisk::Date;
using adjrisk::MeasureConfig;
using adjrisk::ReevaluatedProfile;
using adjrisk::ReturnSeries;
using adjrisk::RiskFamilySpec;
using adjrisk::TargetRiskProfile;

namespace {

TargetRiskProfile two_step() {
    return adjrisk::step_profile(std::vector<double>{0.95, 0.99}, std::vector<double>{0.0, 0.01});
}

ReturnSeries dated(std::vector<double> values) {
    ReturnSeries r;
    std::chrono::sys_days day{std::chrono::year{2010} / std::chrono::January / 1};
    for (std::size_t i = 0; i < values.size(); ++i) {
        r.dates.emplace_back(day + std::chrono::days{static_cast<int>(i)});
    }
    r.values = std::move(values);
    return r;
}

ReturnSeries synthetic_returns(std::size_t n, std::uint64_t seed, double vol = 0.012) {
    return adjrisk::neg_log_returns(adjrisk::synthetic_prices(n + 1, seed, vol));
}

BacktestConfig dominance_config() {
    BacktestConfig cfg;
    cfg.measures.push_back({"adjES", RiskFamilySpec::es(), two_step()});
    cfg.measures.push_back({"SCRM", RiskFamilySpec::scrm(0.95), two_step()});
    cfg.reldiffs.emplace_back("SCRM", "adjES");
    return cfg;
}

std::string render(const BacktestOutput& o) {
    std::ostringstream os;
    adjrisk::write_output(os, o);
    return os.str();
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) {
            fields.push_back(field);
        }
        if (!line.empty() && line.back() == ',') {
            fields.emplace_back();
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

TEST(Prices, TwoRowFile) {
    std::istringstream in("date,price\n2020-01-02,100\n2020-01-03,90\n");
    const auto loaded = adjrisk::read_prices(in);
    EXPECT_EQ(loaded.series.size(), 2U);
    EXPECT_TRUE(loaded.warnings.empty());
    EXPECT_DOUBLE_EQ(loaded.series.rows()[1].price, 90.0);
}

TEST(Prices, OutOfOrderRowsAreSortedWithWarning) {
    std::istringstream in("date,price\n2020-01-03,90\n2020-01-02,100\n");
    const auto loaded = adjrisk::read_prices(in);
    ASSERT_EQ(loaded.series.size(), 2U);
    EXPECT_EQ(loaded.warnings.size(), 1U);
    EXPECT_EQ(adjrisk::format_date(loaded.series.rows()[0].date), "2020-01-02");
    EXPECT_DOUBLE_EQ(loaded.series.rows()[0].price, 100.0);
}

TEST(Prices, NonPositivePriceNamesTheLine) {
    std::istringstream in("date,price\n2020-01-02,100\n2020-01-03,0\n");
    try {
        (void)adjrisk::read_prices(in, "prices.csv");
        FAIL() << "expected an error";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("prices.csv:3"), std::string::npos) << e.what();
    }
}

TEST(Prices, MalformedInputs) {
    for (const char* text : {"date,price\n", "date,price\n2020-13-01,1\n",
                             "date,price\n2020-01-02,abc\n",
                             "date,price\n2020-01-02,1\n2020-01-02,2\n"}) {
        std::istringstream in(text);
        EXPECT_THROW((void)adjrisk::read_prices(in), std::runtime_error) << text;
    }
    EXPECT_THROW((void)adjrisk::load_prices("/nonexistent/prices.csv"), std::runtime_error);
}

TEST(Prices, WriteReadRoundTrip) {
    const auto s = adjrisk::synthetic_prices(50, 3);
    std::stringstream io;
    adjrisk::write_prices(io, s);
    const auto back = adjrisk::read_prices(io).series;
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(back.rows()[i].date, s.rows()[i].date);
        EXPECT_EQ(back.rows()[i].price, s.rows()[i].price);
    }
}

TEST(Dates, StrictIsoFormat) {
    EXPECT_EQ(adjrisk::format_date(adjrisk::parse_date("2024-02-08")), "2024-02-08");
    EXPECT_THROW((void)adjrisk::parse_date("2024-2-8"), std::invalid_argument);
    EXPECT_THROW((void)adjrisk::parse_date("2023-02-29"), std::invalid_argument);
}

TEST(Returns, Examples) {
    using adjrisk::PriceSeries;
    const Date d1 = adjrisk::parse_date("2020-01-02");
    const Date d2 = adjrisk::parse_date("2020-01-03");
    const Date d3 = adjrisk::parse_date("2020-01-06");

    const auto r1 = adjrisk::neg_log_returns(PriceSeries({{d1, 100.0}, {d2, 90.0}}));
    ASSERT_EQ(r1.size(), 1U);
    EXPECT_NEAR(r1.values[0], 0.10536051565782628, 1e-15);
    EXPECT_EQ(r1.dates[0], d2);

    const auto r2 = adjrisk::neg_log_returns(PriceSeries({{d1, 50.0}, {d2, 50.0}, {d3, 50.0}}));
    EXPECT_EQ(r2.values, (std::vector<double>{0.0, 0.0}));

    const auto r3 = adjrisk::neg_log_returns(PriceSeries({{d1, 100.0}, {d2, 100.0 * std::exp(1.0)}}));
    EXPECT_NEAR(r3.values[0], -1.0, 1e-15);

    EXPECT_THROW((void)adjrisk::neg_log_returns(PriceSeries({{d1, 100.0}})),
                 std::invalid_argument);
}

TEST(Returns, IntersectionKeepsCommonDates) {
    ReturnSeries a = dated({1, 2, 3, 4});
    ReturnSeries b = dated({10, 20, 30});
    b.dates = {a.dates[1], a.dates[2], Date{std::chrono::sys_days{a.dates[3]} + std::chrono::days{5}}};
    const auto [ra, rb] = adjrisk::intersect_dates(a, b);
    ASSERT_EQ(ra.size(), 2U);
    EXPECT_EQ(ra.values, (std::vector<double>{2, 3}));
    EXPECT_EQ(rb.values, (std::vector<double>{10, 20}));
}

TEST(FrameProfile, FlatReturnsGiveZeroProfile) {
    const ReturnSeries r = dated(std::vector<double>(80, -0.001));
    const auto g = adjrisk::calibrate_frame_profile(r, r.dates.front(), r.dates.back(),
                                                    RiskFamilySpec::es());
    for (double p : {0.0, 0.01, 0.3, 0.5, 0.9, 0.99, 0.9999}) {
        EXPECT_EQ(g(p).to_double(), 0.0) << p;
    }
}

TEST(FrameProfile, ScaledUpFrameDominates) {
    const ReturnSeries low = synthetic_returns(300, 11);
    ReturnSeries high = low;
    for (double& v : high.values) {
        v *= 3.0;
    }
    const auto g_low = adjrisk::calibrate_frame_profile(low, low.dates.front(), low.dates.back(),
                                                        RiskFamilySpec::es());
    const auto g_high = adjrisk::calibrate_frame_profile(
        high, high.dates.front(), high.dates.back(), RiskFamilySpec::es());
    for (int i = 0; i <= 1000; ++i) {
        const double p = i / 1000.0;
        if (g_low(p).is_pos_inf()) {
            continue;
        }
        EXPECT_GE(g_high(p).to_double(), g_low(p).to_double()) << p;
    }
}

TEST(FrameProfile, BoundaryAndInsufficientData) {
    const ReturnSeries r = synthetic_returns(200, 5);
    EXPECT_NO_THROW((void)adjrisk::calibrate_frame_profile(r, r.dates[10], r.dates[69],
                                                           RiskFamilySpec::es()));
    EXPECT_THROW((void)adjrisk::calibrate_frame_profile(r, r.dates[10], r.dates[68],
                                                        RiskFamilySpec::es()),
                 BacktestError);
    EXPECT_THROW((void)adjrisk::calibrate_frame_profile(r, r.dates[20], r.dates[10],
                                                        RiskFamilySpec::es()),
                 std::invalid_argument);
}

TEST(Backtest, RowCountFixedAndReevaluated) {
    const ReturnSeries r = synthetic_returns(300, 1);
    BacktestConfig cfg = dominance_config();
    EXPECT_EQ(adjrisk::expected_rows(r.size(), cfg), r.size() - cfg.window + 1);
    EXPECT_EQ(adjrisk::run_backtest(r, cfg).rows.size(), r.size() - cfg.window + 1);

    cfg.measures.push_back({"reeval", RiskFamilySpec::es(), ReevaluatedProfile{200, {}}});
    EXPECT_EQ(adjrisk::expected_rows(r.size(), cfg), r.size() - 200 + 1);
    const auto o = adjrisk::run_backtest(r, cfg);
    ASSERT_EQ(o.rows.size(), r.size() - 200 + 1);
    EXPECT_EQ(o.rows.front().date, r.dates[199]);
    EXPECT_EQ(o.rows.back().date, r.dates.back());
}

TEST(Backtest, NotEnoughObservations) {
    const ReturnSeries r = synthetic_returns(59, 1);
    EXPECT_EQ(adjrisk::expected_rows(r.size(), dominance_config()), 0U);
    EXPECT_THROW((void)adjrisk::run_backtest(r, dominance_config()), BacktestError);
}

TEST(Backtest, InvalidConfigListsEveryProblem) {
    BacktestConfig cfg = dominance_config();
    cfg.window = 1;
    cfg.grid_step = 0.7;
    cfg.reldiffs.emplace_back("X", "adjES");
    EXPECT_EQ(cfg.validate().size(), 3U);
    EXPECT_THROW((void)adjrisk::run_backtest(synthetic_returns(100, 1), cfg),
                 std::invalid_argument);
}

TEST(Backtest, ScrmNeverExceedsAdjustedEs) {
    const ReturnSeries r = synthetic_returns(800, 2024, 0.015);
    const auto o = adjrisk::run_backtest(r, dominance_config());
    for (const auto& row : o.rows) {
        EXPECT_LE(row.results[1].value.to_double(), row.results[0].value.to_double())
            << adjrisk::format_date(row.date);
        ASSERT_TRUE(row.reldiffs[0].has_value());
        EXPECT_LE(*row.reldiffs[0], 0.0);
    }
}

TEST(Backtest, ConstantSeries) {
    const double c = 0.004;
    BacktestConfig cfg = dominance_config();
    cfg.measures.push_back({"expectile", RiskFamilySpec::expectile(), two_step()});
    const auto o = adjrisk::run_backtest(dated(std::vector<double>(90, c)), cfg);
    ASSERT_EQ(o.rows.size(), 31U);
    for (const auto& row : o.rows) {
        for (const auto& res : row.results) {
            EXPECT_NEAR(res.value.to_double(), c, 1e-15);
            EXPECT_EQ(res.argmax_level, cfg.level_lower);
        }
    }
}

TEST(Backtest, SelfBenchmarkIsNonPositive) {
    const ReturnSeries r = synthetic_returns(400, 9);
    BacktestConfig cfg;
    cfg.measures.push_back({"es", RiskFamilySpec::es(), ReevaluatedProfile{60, {}}});
    cfg.measures.push_back({"var", RiskFamilySpec::var(), ReevaluatedProfile{60, {}}});
    cfg.measures.push_back({"scrm", RiskFamilySpec::scrm(0.95), ReevaluatedProfile{60, {}}});
    const auto o = adjrisk::run_backtest(r, cfg);
    for (const auto& row : o.rows) {
        for (const auto& res : row.results) {
            EXPECT_LE(res.value.to_double(), 1e-15) << adjrisk::format_date(row.date);
        }
    }
}

TEST(Backtest, CashAdditivityEndToEnd) {
    const ReturnSeries r = synthetic_returns(200, 77);
    BacktestConfig cfg = dominance_config();
    cfg.measures.push_back({"expectile", RiskFamilySpec::expectile(), two_step()});
    cfg.measures.push_back({"ces", RiskFamilySpec::conditional_es(), two_step()});
    const double m = 0.0375;
    ReturnSeries shifted = r;
    for (double& v : shifted.values) {
        v += m;
    }
    const auto a = adjrisk::run_backtest(r, cfg);
    const auto b = adjrisk::run_backtest(shifted, cfg);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        for (std::size_t k = 0; k < cfg.measures.size(); ++k) {
            EXPECT_NEAR(b.rows[i].results[k].value.to_double(),
                        a.rows[i].results[k].value.to_double() + m, 1e-10);
        }
    }
}

TEST(Backtest, Deterministic) {
    const ReturnSeries r = synthetic_returns(300, 4);
    BacktestConfig cfg = dominance_config();
    cfg.measures.push_back({"reeval", RiskFamilySpec::es(), ReevaluatedProfile{100, {}}});
    const std::string first = render(adjrisk::run_backtest(r, cfg));
    const std::string second = render(adjrisk::run_backtest(r, cfg));
    EXPECT_EQ(first, second);
}

TEST(Compare, IdenticalSeriesNearZero) {
    const ReturnSeries r = synthetic_returns(300, 8);
    BacktestConfig cfg;
    cfg.measures.push_back({"es", RiskFamilySpec::es(), ReevaluatedProfile{60, {}}});
    const auto o = adjrisk::compare_indices(r, r, cfg);
    EXPECT_EQ(o.rows.size(), r.size() - 60 + 1);
    for (const auto& row : o.rows) {
        EXPECT_LE(row.results[0].value.to_double(), 1e-15);
    }
}

TEST(Compare, ConstantSpreadIsTracked) {
    std::mt19937_64 rng(testing_support::suite_seed());
    std::uniform_real_distribution<double> u(0.001, 0.02);
    std::vector<double> base(150);
    for (double& v : base) {
        v = u(rng);
    }
    const ReturnSeries b = dated(base);
    const double m = 0.0125;
    ReturnSeries a = b;
    for (double& v : a.values) {
        v += m;
    }
    BacktestConfig cfg;
    cfg.measures.push_back({"scrm", RiskFamilySpec::scrm(0.95), ReevaluatedProfile{60, {}}});
    const auto o = adjrisk::compare_indices(a, b, cfg);
    for (const auto& row : o.rows) {
        EXPECT_NEAR(row.results[0].value.to_double(), m, 1e-10);
    }
}

TEST(Compare, DisjointDatesThrow) {
    const ReturnSeries a = dated(std::vector<double>(100, 0.01));
    ReturnSeries b = a;
    for (Date& d : b.dates) {
        d = Date{std::chrono::sys_days{d} + std::chrono::days{1000}};
    }
    BacktestConfig cfg;
    cfg.measures.push_back({"es", RiskFamilySpec::es(), ReevaluatedProfile{60, {}}});
    EXPECT_THROW((void)adjrisk::compare_indices(a, b, cfg), BacktestError);
}

TEST(Export, SingleRowAndEmptyReldiff) {
    BacktestConfig cfg = dominance_config();
    cfg.window = 5;
    // A window of zeros gives B = 0, so the relative difference is undefined.
    const auto o = adjrisk::run_backtest(dated(std::vector<double>(5, 0.0)), cfg);
    ASSERT_EQ(o.rows.size(), 1U);
    EXPECT_FALSE(o.rows[0].reldiffs[0].has_value());
    const auto rows = split_csv(render(o));
    ASSERT_EQ(rows.size(), 2U);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"date", "adjES", "adjES_level", "SCRM",
                                                 "SCRM_level", "reldiff_SCRM_adjES"}));
    ASSERT_EQ(rows[1].size(), 6U);
    EXPECT_EQ(rows[1][5], "");
}

TEST(Export, RoundTripWithinTextPrecision) {
    const auto o = adjrisk::run_backtest(synthetic_returns(120, 6), dominance_config());
    const auto path = std::filesystem::temp_directory_path() / "adjrisk_export_test.csv";
    adjrisk::export_output(o, path.string());
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    std::filesystem::remove(path);
    const auto rows = split_csv(text.str());
    ASSERT_EQ(rows.size(), o.rows.size() + 1);
    for (std::size_t i = 0; i < o.rows.size(); ++i) {
        const auto& f = rows[i + 1];
        EXPECT_EQ(f[0], adjrisk::format_date(o.rows[i].date));
        for (std::size_t k = 0; k < 2; ++k) {
            const double v = o.rows[i].results[k].value.to_double();
            EXPECT_NEAR(std::stod(f[1 + 2 * k]), v, 1e-9 * std::max(1.0, std::abs(v)));
            EXPECT_NEAR(std::stod(f[2 + 2 * k]), o.rows[i].results[k].argmax_level, 1e-9);
        }
        EXPECT_NEAR(std::stod(f[5]), *o.rows[i].reldiffs[0], 1e-9);
    }
    EXPECT_THROW(adjrisk::export_output(o, "/nonexistent/dir/out.csv"), std::runtime_error);
    EXPECT_THROW(adjrisk::export_output(BacktestOutput{}, path.string()), std::invalid_argument);
}

TEST(Summary, MeanAndLowerMedian) {
    BacktestOutput o;
    o.measure_names = {"A", "B"};
    o.reldiff_pairs = {{"A", "B"}};
    for (std::optional<double> v : {std::optional<double>(-0.4), std::optional<double>(),
                                    std::optional<double>(-0.1), std::optional<double>(-0.2),
                                    std::optional<double>(0.3)}) {
        adjrisk::BacktestRow row;
        row.reldiffs.push_back(v);
        o.rows.push_back(row);
    }
    const auto s = adjrisk::summarize_reldiffs(o);
    ASSERT_EQ(s.size(), 1U);
    EXPECT_EQ(s[0].column, "reldiff_A_B");
    EXPECT_EQ(s[0].defined, 4U);
    EXPECT_NEAR(s[0].mean, -0.1, 1e-15);
    EXPECT_DOUBLE_EQ(s[0].lower_median, -0.2);
}
