#include "cli/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adjrisk/adjrisk.hpp"
#include "cli/config.hpp"
#include "cli/inputs.hpp"

namespace adjrisk::cli {
namespace {

struct GlobalOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<double> grid_step;
    std::optional<std::size_t> window;
    std::optional<std::string> out;
};

struct EstimateOptions {
    std::string window_file;
    std::string dist_file;
    std::string family = "es";
    std::optional<double> level;
    std::string step;
    std::string profile;
};

struct ProfileOptions {
    std::string step;
    std::string profile;
    std::string family = "es";
    std::string window_file;
    std::string dist_file;
    std::string prices;
    std::string start;
    std::string end;
};

// Runs f, turning library argument errors on user input into usage errors.
template <class F>
auto user_input(const std::string& what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const UsageError&) {
        throw;
    } catch (const std::logic_error& e) {
        throw UsageError(what + ": " + e.what());
    }
}

// Printed values carry 12 significant digits.
std::string fmt(const ExtReal& x) { return format_significant(x, 12); }

std::ostream& open_output(const std::optional<std::string>& path, std::ofstream& file,
                          std::ostream& fallback) {
    if (!path) {
        return fallback;
    }
    file.open(*path, std::ios::binary);
    if (!file) {
        throw UsageError("cannot write '" + *path + "'");
    }
    return file;
}

// ---------------------------------------------------------------- estimate

int cmd_estimate(const GlobalOptions& g, const EstimateOptions& o, std::ostream& out) {
    if (o.window_file.empty() == o.dist_file.empty()) {
        throw UsageError("estimate: give exactly one of --window-file or --dist-file");
    }
    const int profile_inputs = (o.level ? 1 : 0) + (o.step.empty() ? 0 : 1) +
                               (o.profile.empty() ? 0 : 1);
    if (profile_inputs != 1) {
        throw UsageError("estimate: give exactly one of --level, --step or --profile");
    }
    const RiskFamilySpec spec = user_input("--family", [&] { return parse_family(o.family); });

    std::optional<SampleWindow> window;
    std::optional<DiscreteDistribution> law;
    if (!o.window_file.empty()) {
        window = read_window_file(o.window_file);
    } else {
        law = read_distribution_file(o.dist_file);
    }

    std::ofstream file;
    std::ostream& os = open_output(g.out, file, out);
    os << "family,value,level\n";
    if (o.level) {
        const double p = *o.level;
        const double v = user_input("--level", [&] {
            return window ? rho_p_hat(spec, *window, p) : rho_p(spec, *law, p);
        });
        os << to_string(spec) << ',' << fmt(v) << ',' << fmt(p) << '\n';
        return kExitOk;
    }

    const TargetRiskProfile profile = user_input("profile", [&] {
        if (!o.step.empty()) {
            return parse_step_spec(o.step);
        }
        try {
            return load_profile_table(o.profile);
        } catch (const std::runtime_error& e) {
            throw UsageError(e.what());
        }
    });
    AdjustedResult r;
    if (window) {
        LevelGrid grid = LevelGrid::estimator_default();
        grid.step = g.grid_step.value_or(grid.step);
        r = adjusted_value_hat(spec, profile, *window, grid);
    } else {
        LevelGrid grid;
        grid.step = g.grid_step.value_or(grid.step);
        r = adjusted_value(spec, profile, *law, grid);
    }
    os << to_string(spec) << ',' << fmt(r.value) << ',' << fmt(r.argmax_level) << '\n';
    return kExitOk;
}

// --------------------------------------------------------------- backtest

struct LoadedRun {
    RunConfig cfg;
    ReturnSeries returns;
    std::optional<ReturnSeries> benchmark;
};

LoadedRun load_run(const GlobalOptions& g, std::ostream& err) {
    if (g.config.empty()) {
        throw UsageError("--config is required");
    }
    LoadedRun run{load_run_config(g.config, {g.seed, g.window, g.grid_step, g.out}), {}, {}};
    std::vector<std::string> warnings;
    run.returns = neg_log_returns(load_price_source(run.cfg.prices, run.cfg.seed, warnings));
    if (run.cfg.benchmark_prices) {
        run.benchmark = neg_log_returns(
            load_price_source(*run.cfg.benchmark_prices, run.cfg.seed + 1, warnings));
    }
    for (const std::string& w : warnings) {
        err << "warning: " << w << '\n';
    }
    return run;
}

void check_lengths(const BacktestConfig& cfg, std::size_t observations) {
    std::size_t need = cfg.window;
    for (const MeasureConfig& m : cfg.measures) {
        if (const auto* re = std::get_if<ReevaluatedProfile>(&m.profile)) {
            need = std::max(need, re->lookback);
        }
    }
    if (observations < need) {
        throw UsageError("window of " + std::to_string(need) + " returns exceeds the " +
                         std::to_string(observations) + " available observations");
    }
}

int write_backtest(const BacktestOutput& result, const RunConfig& cfg, std::ostream& out,
                   std::ostream& err) {
    std::ostream* summary = &out;
    if (cfg.output) {
        export_output(result, *cfg.output);
    } else {
        write_output(out, result);
        summary = &err;
    }
    *summary << "rows," << result.rows.size() << '\n';
    for (const ColumnSummary& c : summarize_reldiffs(result)) {
        *summary << c.column << ",defined=" << c.defined
                 << ",mean=" << format_significant(ExtReal(c.mean), 6)
                 << ",lower_median=" << format_significant(ExtReal(c.lower_median), 6) << '\n';
    }
    return kExitOk;
}

int cmd_backtest(const GlobalOptions& g, bool compare, std::ostream& out, std::ostream& err) {
    LoadedRun run = load_run(g, err);
    if (compare && !run.benchmark) {
        throw UsageError("compare: the configuration needs 'benchmark_prices'");
    }
    const BacktestConfig cfg = user_input("configuration", [&] {
        return resolve_backtest_config(run.cfg, run.returns,
                                       run.benchmark ? &*run.benchmark : nullptr);
    });
    BacktestOutput result;
    if (compare) {
        const auto aligned = intersect_dates(run.returns, *run.benchmark);
        check_lengths(cfg, aligned.first.size());
        result = compare_indices(run.returns, *run.benchmark, cfg);
    } else {
        check_lengths(cfg, run.returns.size());
        result = run_backtest(run.returns, cfg);
    }
    return write_backtest(result, run.cfg, out, err);
}

// ---------------------------------------------------------------- profile

std::string describe(const FinitenessReport& report) {
    if (const auto* ok = std::get_if<FinitenessLevels>(&report)) {
        return "finiteness assumption holds: p1=" + fmt(ok->p1) + " p2=" + fmt(ok->p2);
    }
    const auto& bad = std::get<FinitenessViolation>(report);
    return "finiteness assumption fails: " + bad.detail;
}

int cmd_profile(const GlobalOptions& g, const ProfileOptions& o, std::ostream& out) {
    const int sources = (o.step.empty() ? 0 : 1) + (o.profile.empty() ? 0 : 1) +
                        (o.window_file.empty() ? 0 : 1) + (o.dist_file.empty() ? 0 : 1) +
                        (o.prices.empty() ? 0 : 1);
    if (sources != 1) {
        throw UsageError(
            "profile: give exactly one of --step, --profile, --window-file, --dist-file or "
            "--prices");
    }
    const RiskFamilySpec family = user_input("--family", [&] { return parse_family(o.family); });
    BenchmarkProfileOptions opts;
    opts.grid = default_benchmark_grid(g.grid_step.value_or(0.02));

    const TargetRiskProfile profile = user_input("profile", [&]() -> TargetRiskProfile {
        if (!o.step.empty()) {
            return parse_step_spec(o.step);
        }
        if (!o.profile.empty()) {
            try {
                return load_profile_table(o.profile);
            } catch (const std::runtime_error& e) {
                throw UsageError(e.what());
            }
        }
        if (!o.window_file.empty()) {
            return benchmark_profile(family, read_window_file(o.window_file), opts);
        }
        if (!o.dist_file.empty()) {
            return benchmark_profile(family, read_distribution_file(o.dist_file), opts);
        }
        if (o.start.empty() || o.end.empty()) {
            throw UsageError("profile: --prices needs --start and --end");
        }
        LoadedPrices loaded = [&] {
            try {
                return load_prices(o.prices);
            } catch (const std::runtime_error& e) {
                throw UsageError(e.what());
            }
        }();
        return calibrate_frame_profile(neg_log_returns(loaded.series), parse_date(o.start),
                                       parse_date(o.end), family, opts, g.window.value_or(60));
    });

    std::ofstream file;
    std::ostream& os = open_output(g.out, file, out);
    if (profile.is_left_continuous()) {
        write_profile_table(os, profile);
    } else {
        for (std::size_t i = 0; i < profile.knots().size(); ++i) {
            os << "# g(" << fmt(profile.knots()[i]) << ") = " << to_string(profile.point_values()[i])
               << '\n';
            if (i < profile.interval_values().size()) {
                os << "# g on (" << fmt(profile.knots()[i]) << ", " << fmt(profile.knots()[i + 1])
                   << ") = " << to_string(profile.interval_values()[i]) << '\n';
            }
        }
    }
    out << "# " << describe(validate_finiteness_assumption(profile)) << '\n';
    return kExitOk;
}

// ----------------------------------------------------------------- verify

struct CheckRow {
    std::string name;
    std::string relation;
    std::string lhs;
    std::string rhs;
    bool pass;
};

DiscreteDistribution random_law(std::mt19937_64& rng, std::size_t max_atoms) {
    std::uniform_int_distribution<std::size_t> count(1, max_atoms);
    std::uniform_real_distribution<double> value(-5.0, 5.0);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    const std::size_t n = count(rng);
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) {
        x = weight(rng);
        total += x;
    }
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < n; ++i) {
        atoms.push_back({value(rng), w[i] / total});
    }
    return DiscreteDistribution(std::move(atoms));
}

std::vector<CheckRow> fixture_rows() {
    std::vector<CheckRow> rows;
    for (const CounterexampleFixture& f : counterexample_fixtures()) {
        const FixtureReport r = run_fixture(f);
        rows.push_back({r.name, r.claim, fmt(r.lhs), fmt(r.rhs), r.pass});
    }
    return rows;
}

std::vector<CheckRow> dual_example_rows() {
    std::vector<CheckRow> rows;
    const ExtReal inf = ExtReal::pos_inf();

    // g = 0 on [0, 0.95], +inf above; X fair coin on {0, 1}.
    const DiscreteDistribution coin({{0.0, 0.5}, {1.0, 0.5}});
    const TargetRiskProfile g39 = TargetRiskProfile::left_continuous(
        std::vector<double>{0.0, 0.95, 1.0}, std::vector<ExtReal>{ExtReal(0.0), ExtReal(0.0), inf});
    const AermDualResult dual = aerm_dual(coin, g39);
    const bool weights_ok = dual.weights.size() == 2 && std::abs(dual.weights[0] - 0.1) < 1e-9 &&
                            std::abs(dual.weights[1] - 1.9) < 1e-9;
    std::string w = "(";
    for (std::size_t i = 0; i < dual.weights.size(); ++i) {
        w += (i ? "; " : "") + format_significant(ExtReal(dual.weights[i]), 10);
    }
    w += ")";
    rows.push_back({"dual_attaining_density", "weights on (0, 1) = (0.1; 1.9)", w, "(0.1; 1.9)",
                    weights_ok});
    const Density q(coin, {0.1, 1.9});
    const double level = 1.0 - c_of(q);
    rows.push_back({"dual_attaining_level", "1 - c(Q) = 0.95", format_significant(ExtReal(level), 12),
                    "0.95", std::abs(level - 0.95) < 1e-12 && dual.branch == 2});
    const double primal = expectile(coin, 0.95);
    rows.push_back({"dual_equals_primal", "dual value = e_0.95(X)", to_string(dual.value),
                    fmt(primal), std::abs(dual.value.to_double() - primal) < 1e-9});

    // g = 0 at 0, 1 on (0, 1/2], +inf above; X = +-1 fair.
    const DiscreteDistribution sign({{-1.0, 0.5}, {1.0, 0.5}});
    const TargetRiskProfile g310 = TargetRiskProfile::left_continuous(
        std::vector<double>{0.0, 0.5, 1.0}, std::vector<ExtReal>{ExtReal(0.0), ExtReal(1.0), inf});
    const MinimaxGap gap = minimax_gap(sign, g310);
    rows.push_back({"minimax_gap", "(sup inf, inf sup) = (-1, 0)",
                    "(" + to_string(gap.sup_inf) + ", " + to_string(gap.inf_sup) + ")", "(-1, 0)",
                    gap.sup_inf == ExtReal(-1.0) && gap.inf_sup == ExtReal(0.0)});
    return rows;
}

std::vector<CheckRow> random_dual_rows(std::uint64_t seed) {
    std::vector<CheckRow> rows;
    std::mt19937_64 rng(seed);
    const std::vector<double> levels{0.05, 0.2, 0.5, 0.7, 0.9, 0.99};
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const DiscreteDistribution d = random_law(rng, 6);
        for (double q : levels) {
            const double gap = std::abs(expectile(d, q) - expectile_dual_value(d, q).to_double());
            worst = std::max(worst, gap);
        }
    }
    rows.push_back({"expectile_primal_dual", "max |primal - dual| <= 1e-6 (600 cases)",
                    format_significant(ExtReal(worst), 3), "1e-06", worst <= 1e-6});

    std::uniform_real_distribution<double> lo(0.55, 0.75);
    std::uniform_real_distribution<double> hi(0.8, 0.97);
    std::uniform_real_distribution<double> bump(0.0, 0.5);
    worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const DiscreteDistribution d = random_law(rng, 5);
        const double v1 = bump(rng);
        const TargetRiskProfile g = TargetRiskProfile::left_continuous(
            std::vector<double>{0.0, 0.5, lo(rng), hi(rng), 1.0},
            std::vector<ExtReal>{ExtReal(0.0), ExtReal(0.0), ExtReal(v1), ExtReal(v1 + bump(rng)),
                                 ExtReal::pos_inf()});
        const ExtReal primal = adjusted_value(RiskFamilySpec::expectile(), g, d).value;
        const ExtReal dual = aerm_dual_value(d, g);
        worst = std::max(worst, std::abs(primal.to_double() - dual.to_double()));
    }
    rows.push_back({"aerm_primal_dual", "max |primal - dual| <= 1e-5 (20 cases)",
                    format_significant(ExtReal(worst), 3), "1e-05", worst <= 1e-5});
    return rows;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + "  " : s + std::string(width - s.size(), ' ');
}

int cmd_verify(const GlobalOptions& g, std::ostream& out) {
    std::vector<CheckRow> rows = fixture_rows();
    for (auto& group : {dual_example_rows(), random_dual_rows(g.seed.value_or(42))}) {
        rows.insert(rows.end(), group.begin(), group.end());
    }
    std::ofstream file;
    std::ostream& os = open_output(g.out, file, out);
    os << pad("check", 28) << pad("relation", 42) << pad("lhs", 22) << pad("rhs", 18) << "result\n";
    bool all = true;
    for (const CheckRow& r : rows) {
        os << pad(r.name, 28) << pad(r.relation, 42) << pad(r.lhs, 22) << pad(r.rhs, 18)
           << (r.pass ? "pass" : "FAIL") << '\n';
        all = all && r.pass;
    }
    os << (all ? "all checks passed" : "some checks failed") << '\n';
    return all ? kExitOk : kExitFailure;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adjusted risk measures: estimation, verification and backtesting", "adjrisk"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--config", g.config, "JSON run configuration");
    app.add_option("--seed", g.seed, "Seed for randomized checks and synthetic data");
    app.add_option("--grid-step", g.grid_step, "Level grid spacing")->check(CLI::PositiveNumber);
    app.add_option("--window", g.window, "Rolling window length")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output path");

    EstimateOptions est;
    CLI::App* estimate = app.add_subcommand("estimate", "Risk measure of a window or a law");
    estimate->add_option("--window-file", est.window_file, "One observation per line");
    estimate->add_option("--dist-file", est.dist_file, "'value prob' per line");
    estimate->add_option("--family", est.family, "Family: es, var, scrm:r, crm:a,b, ...");
    estimate->add_option("--level", est.level, "Evaluate the family at this level");
    estimate->add_option("--step", est.step, "Step profile 'level:value,...'");
    estimate->add_option("--profile", est.profile, "Profile table file");

    CLI::App* backtest = app.add_subcommand("backtest", "Rolling-window backtest");
    CLI::App* compare = app.add_subcommand("compare", "Measures on one index, profiles on another");

    ProfileOptions prof;
    CLI::App* profile = app.add_subcommand("profile", "Build or calibrate a target profile");
    profile->add_option("--step", prof.step, "Step profile 'level:value,...'");
    profile->add_option("--profile", prof.profile, "Profile table file");
    profile->add_option("--family", prof.family, "Benchmark family");
    profile->add_option("--window-file", prof.window_file, "Benchmark window");
    profile->add_option("--dist-file", prof.dist_file, "Benchmark law");
    profile->add_option("--prices", prof.prices, "Benchmark price CSV");
    profile->add_option("--start", prof.start, "Frame start date");
    profile->add_option("--end", prof.end, "Frame end date");

    CLI::App* verify = app.add_subcommand("verify", "Counterexample and duality checks");

    for (CLI::App* sub : {estimate, backtest, compare, profile, verify}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (estimate->parsed()) {
            return cmd_estimate(g, est, out);
        }
        if (backtest->parsed() || compare->parsed()) {
            return cmd_backtest(g, compare->parsed(), out, err);
        }
        if (profile->parsed()) {
            return cmd_profile(g, prof, out);
        }
        return cmd_verify(g, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace adjrisk::cli
