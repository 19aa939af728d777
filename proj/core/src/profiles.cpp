#include "adjrisk/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace adjrisk {

TargetRiskProfile TargetRiskProfile::piecewise(std::vector<double> knots,
                                               std::vector<ExtReal> point_values,
                                               std::vector<ExtReal> interval_values, Kind kind) {
    const std::size_t m = knots.size();
    if (m < 2) {
        throw std::invalid_argument("TargetRiskProfile: need knots 0 and 1 at least");
    }
    if (point_values.size() != m || interval_values.size() != m - 1) {
        throw std::invalid_argument("TargetRiskProfile: value counts do not match knots");
    }
    if (knots.front() != 0.0 || knots.back() != 1.0) {
        throw std::invalid_argument("TargetRiskProfile: knots must start at 0 and end at 1");
    }
    for (std::size_t j = 1; j < m; ++j) {
        if (!(knots[j] > knots[j - 1])) {
            throw std::invalid_argument("TargetRiskProfile: knots must be strictly increasing");
        }
    }
    // Walk the values in level order: g(t_0), g on (t_0,t_1), g(t_1), ...
    ExtReal prev = point_values[0];
    bool finite_somewhere = false;
    auto visit = [&](const ExtReal& v, bool at_zero) {
        if (v.is_neg_inf()) {
            throw std::invalid_argument("TargetRiskProfile: -inf values are not allowed");
        }
        if (!at_zero && v < ExtReal(0.0)) {
            throw std::invalid_argument(
                "TargetRiskProfile: negative values are only allowed at level 0");
        }
        if (v < prev) {
            throw std::invalid_argument("TargetRiskProfile: values must be nondecreasing");
        }
        if (!at_zero && v.is_finite()) {
            finite_somewhere = true;
        }
        prev = v;
    };
    visit(point_values[0], true);
    for (std::size_t j = 1; j < m; ++j) {
        visit(interval_values[j - 1], false);
        visit(point_values[j], false);
    }
    if (!finite_somewhere) {
        throw std::invalid_argument("TargetRiskProfile: g must be finite somewhere on (0,1]");
    }

    TargetRiskProfile g;
    g.kind_ = kind;
    g.knots_.push_back(knots[0]);
    g.point_.push_back(point_values[0]);
    for (std::size_t j = 1; j < m; ++j) {
        const bool last = j + 1 == m;
        if (!last && interval_values[j - 1] == point_values[j] &&
            point_values[j] == interval_values[j]) {
            continue;
        }
        g.interval_.push_back(interval_values[j - 1]);
        g.knots_.push_back(knots[j]);
        g.point_.push_back(point_values[j]);
    }
    return g;
}

TargetRiskProfile TargetRiskProfile::left_continuous(std::span<const double> levels,
                                                     std::span<const ExtReal> values, Kind kind) {
    if (levels.size() != values.size() || levels.size() < 2) {
        throw std::invalid_argument(
            "TargetRiskProfile: a table needs matching level/value rows, at least two");
    }
    std::vector<double> knots(levels.begin(), levels.end());
    std::vector<ExtReal> points(values.begin(), values.end());
    std::vector<ExtReal> intervals(values.begin() + 1, values.end());
    return piecewise(std::move(knots), std::move(points), std::move(intervals), kind);
}

ExtReal TargetRiskProfile::eval(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("TargetRiskProfile::eval: level must lie in [0,1]");
    }
    auto it = std::lower_bound(knots_.begin(), knots_.end(), p);
    const auto j = static_cast<std::size_t>(it - knots_.begin());
    if (*it == p) {
        return point_[j];
    }
    return interval_[j - 1];
}

bool TargetRiskProfile::is_left_continuous() const noexcept {
    for (std::size_t j = 1; j < knots_.size(); ++j) {
        if (!(point_[j] == interval_[j - 1])) {
            return false;
        }
    }
    return true;
}

namespace {

template <class Pred>
std::optional<double> sup_where(std::span<const double> knots, std::span<const ExtReal> point,
                                std::span<const ExtReal> interval, Pred pred) {
    std::optional<double> best;
    for (std::size_t j = 0; j < knots.size(); ++j) {
        if (pred(point[j])) {
            best = knots[j];
        }
        if (j + 1 < knots.size() && pred(interval[j])) {
            best = knots[j + 1];
        }
    }
    return best;
}

}  // namespace

std::optional<double> TargetRiskProfile::p1() const {
    return sup_where(knots_, point_, interval_, [](const ExtReal& v) { return v == ExtReal(0.0); });
}

double TargetRiskProfile::p2() const {
    return *sup_where(knots_, point_, interval_, [](const ExtReal& v) { return v.is_finite(); });
}

std::vector<ExtReal> TargetRiskProfile::image() const {
    std::vector<ExtReal> out(point_.begin(), point_.end());
    out.insert(out.end(), interval_.begin(), interval_.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TargetRiskProfile step_profile(std::span<const double> levels, std::span<const double> values) {
    if (levels.empty()) {
        throw std::invalid_argument("step_profile: at least one jump is required");
    }
    if (levels.size() != values.size()) {
        throw std::invalid_argument("step_profile: levels and values differ in length");
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0 && levels[i] < 1.0)) {
            throw std::invalid_argument("step_profile: levels must lie in (0,1)");
        }
        if (!std::isfinite(values[i])) {
            throw std::invalid_argument("step_profile: values must be finite");
        }
        if (i > 0 && !(levels[i] > levels[i - 1])) {
            throw std::invalid_argument("step_profile: levels must be strictly increasing");
        }
        if (i > 0 && !(values[i] > values[i - 1])) {
            throw std::invalid_argument("step_profile: values must be strictly increasing");
        }
    }
    if (!(values[0] >= 0.0)) {
        throw std::invalid_argument("step_profile: first value must be >= 0");
    }
    std::vector<double> knots{0.0};
    std::vector<ExtReal> table{ExtReal(values[0])};
    for (std::size_t i = 0; i < levels.size(); ++i) {
        knots.push_back(levels[i]);
        table.emplace_back(values[i]);
    }
    knots.push_back(1.0);
    table.push_back(ExtReal::pos_inf());
    return TargetRiskProfile::left_continuous(knots, table,
                                              TargetRiskProfile::Kind::StepFunction);
}

double left_inverse(const TargetRiskProfile& g, const ExtReal& u) {
    if (u < g.at_zero()) {
        throw std::domain_error("left_inverse: u is below g(0)");
    }
    auto knots = g.knots();
    auto point = g.point_values();
    auto interval = g.interval_values();
    double result = 0.0;
    for (std::size_t j = 0; j < knots.size(); ++j) {
        if (!(point[j] <= u)) {
            break;
        }
        result = knots[j];
        if (j + 1 == knots.size() || !(interval[j] <= u)) {
            break;
        }
        result = knots[j + 1];
    }
    return result;
}

std::vector<double> default_benchmark_grid(double step, double lower, double upper) {
    if (!(step > 0.0 && step < 1.0)) {
        throw std::invalid_argument("default_benchmark_grid: step must lie in (0,1)");
    }
    if (!(lower >= 0.0 && lower < upper && upper <= 1.0)) {
        throw std::invalid_argument("default_benchmark_grid: need 0 <= lower < upper <= 1");
    }
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::ceil(1.0 / step - 1e-9));
    for (std::size_t k = 0; k <= count; ++k) {
        const double p = std::clamp(std::min(static_cast<double>(k) * step, 1.0), lower, upper);
        if (grid.empty() || p > grid.back()) {
            grid.push_back(p);
        }
    }
    return grid;
}

namespace {

template <class Eval>
TargetRiskProfile build_benchmark(const BenchmarkProfileOptions& opts, Eval eval) {
    std::vector<double> grid = opts.grid.empty() ? default_benchmark_grid() : opts.grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
            throw std::invalid_argument("benchmark_profile: grid levels must lie in [0,1]");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("benchmark_profile: grid must be strictly increasing");
        }
    }
    std::vector<double> levels{0.0};
    std::vector<ExtReal> values{ExtReal(0.0)};
    double running = 0.0;
    for (double p : grid) {
        if (p == 0.0) {
            continue;
        }
        running = std::max(running, std::max(eval(p), 0.0));
        levels.push_back(p);
        values.emplace_back(running);
    }
    if (levels.size() == 1) {
        throw std::invalid_argument("benchmark_profile: grid has no positive level");
    }
    if (levels.back() < 1.0) {
        levels.push_back(1.0);
        values.push_back(opts.infinite_above ? ExtReal::pos_inf() : values.back());
    }
    return TargetRiskProfile::left_continuous(levels, values, TargetRiskProfile::Kind::Tabulated);
}

}  // namespace

TargetRiskProfile benchmark_profile(const RiskFamilySpec& family,
                                    const DiscreteDistribution& benchmark,
                                    const BenchmarkProfileOptions& opts) {
    return build_benchmark(opts, [&](double p) { return rho_p(family, benchmark, p); });
}

TargetRiskProfile benchmark_profile(const RiskFamilySpec& family, const SampleWindow& benchmark,
                                    const BenchmarkProfileOptions& opts) {
    return build_benchmark(opts, [&](double p) { return rho_p_hat(family, benchmark, p); });
}

FinitenessReport validate_finiteness_assumption(const TargetRiskProfile& g) {
    using Clause = FinitenessViolation::Clause;
    if (!g.in_g0()) {
        return FinitenessViolation{Clause::NotNormalized,
                                   "g(0) = " + to_string(g.at_zero()) + ", expected 0"};
    }
    if (!g.is_left_continuous()) {
        return FinitenessViolation{Clause::NotLowerSemicontinuous,
                                   "g is not left-continuous at some jump"};
    }
    const double p1 = *g.p1();
    const double p2 = g.p2();
    if (!(p1 > 0.0)) {
        return FinitenessViolation{Clause::P1NotPositive, "p1 = 0"};
    }
    if (!(p1 < p2)) {
        return FinitenessViolation{Clause::P1NotBelowP2, "p1 = " + to_string(ExtReal(p1)) +
                                                             " is not below p2 = " +
                                                             to_string(ExtReal(p2))};
    }
    if (!(p2 < 1.0)) {
        return FinitenessViolation{Clause::P2NotBelowOne, "p2 = 1"};
    }
    return FinitenessLevels{p1, p2};
}

void write_profile_table(std::ostream& os, const TargetRiskProfile& g) {
    if (!g.is_left_continuous()) {
        throw std::invalid_argument(
            "write_profile_table: only left-continuous profiles have a table form");
    }
    auto knots = g.knots();
    auto point = g.point_values();
    for (std::size_t j = 0; j < knots.size(); ++j) {
        os << to_string(ExtReal(knots[j])) << '\t' << to_string(point[j]) << '\n';
    }
}

std::string profile_table_string(const TargetRiskProfile& g) {
    std::ostringstream os;
    write_profile_table(os, g);
    return os.str();
}

TargetRiskProfile read_profile_table(std::istream& is) {
    std::vector<double> levels;
    std::vector<ExtReal> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::string level_text;
        std::string value_text;
        std::string extra;
        if (!(row >> level_text >> value_text) || (row >> extra)) {
            throw std::invalid_argument("profile table line " + std::to_string(line_no) +
                                        ": expected 'level<TAB>value'");
        }
        try {
            const ExtReal level = parse_ext_real(level_text);
            if (!level.is_finite()) {
                throw std::invalid_argument("level must be finite");
            }
            levels.push_back(level.value());
            values.push_back(parse_ext_real(value_text));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("profile table line " + std::to_string(line_no) + ": " +
                                        e.what());
        }
    }
    return TargetRiskProfile::left_continuous(levels, values);
}

TargetRiskProfile load_profile_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open profile file '" + path + "'");
    }
    return read_profile_table(in);
}

void save_profile_table(const std::string& path, const TargetRiskProfile& g) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write profile file '" + path + "'");
    }
    write_profile_table(out, g);
    if (!out) {
        throw std::runtime_error("error while writing profile file '" + path + "'");
    }
}

}  // namespace adjrisk
