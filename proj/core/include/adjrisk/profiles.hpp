#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "adjrisk/distributions.hpp"
#include "adjrisk/extreal.hpp"
#include "adjrisk/families.hpp"

namespace adjrisk {

// Nondecreasing piecewise-constant g: [0,1] -> (-inf, +inf].
//
// Stored on knots 0 = t_0 < ... < t_m = 1 with a value at every knot and
// a value on every open interval (t_j, t_{j+1}). Redundant knots are
// removed on construction, so every interior knot is a jump.
class TargetRiskProfile {
public:
    enum class Kind : std::uint8_t { StepFunction, Tabulated, Piecewise };

    // Throws std::invalid_argument unless the data describe a member of G:
    // knots as above, values nondecreasing in p, never -inf, negative only
    // at p = 0, and finite somewhere on (0, 1].
    static TargetRiskProfile piecewise(std::vector<double> knots,
                                       std::vector<ExtReal> point_values,
                                       std::vector<ExtReal> interval_values,
                                       Kind kind = Kind::Piecewise);

    // Left-continuous table: levels[0] must be 0 and carries g(0); row k
    // gives the value on (levels[k-1], levels[k]]. The last level must be 1.
    static TargetRiskProfile left_continuous(std::span<const double> levels,
                                             std::span<const ExtReal> values,
                                             Kind kind = Kind::Tabulated);

    [[nodiscard]] ExtReal operator()(double p) const { return eval(p); }
    [[nodiscard]] ExtReal eval(double p) const;

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::span<const double> knots() const noexcept { return knots_; }
    [[nodiscard]] std::span<const ExtReal> point_values() const noexcept { return point_; }
    [[nodiscard]] std::span<const ExtReal> interval_values() const noexcept { return interval_; }

    [[nodiscard]] ExtReal at_zero() const noexcept { return point_.front(); }
    [[nodiscard]] bool in_g0() const noexcept { return point_.front() == ExtReal(0.0); }
    [[nodiscard]] bool is_left_continuous() const noexcept;

    // sup{p | g(p) = 0}; empty when g never equals 0.
    [[nodiscard]] std::optional<double> p1() const;
    // sup{p | g(p) < inf}.
    [[nodiscard]] double p2() const;
    // Distinct values taken by g, ascending.
    [[nodiscard]] std::vector<ExtReal> image() const;

    friend bool operator==(const TargetRiskProfile& a, const TargetRiskProfile& b) {
        return a.knots_ == b.knots_ && a.point_ == b.point_ && a.interval_ == b.interval_;
    }

private:
    TargetRiskProfile() = default;

    Kind kind_ = Kind::Piecewise;
    std::vector<double> knots_;
    std::vector<ExtReal> point_;
    std::vector<ExtReal> interval_;
};

// g = r_1 on [0, p_1], r_i on (p_{i-1}, p_i], +inf on (p_n, 1].
TargetRiskProfile step_profile(std::span<const double> levels, std::span<const double> values);

// sup{p in [0,1] | g(p) <= u}; std::domain_error when u < g(0).
double left_inverse(const TargetRiskProfile& g, const ExtReal& u);

struct BenchmarkProfileOptions {
    // Empty means steps of 0.02 clamped to [1e-4, 0.9999].
    std::vector<double> grid;
    // +inf above the last grid level; otherwise the last value extends to 1.
    bool infinite_above = true;
};

std::vector<double> default_benchmark_grid(double step = 0.02, double lower = 1e-4,
                                           double upper = 0.9999);

// Left-continuous profile with g(0) = 0 and, on (l_{k-1}, l_k], the running
// maximum of max(rho_l(benchmark), 0) over grid levels up to l_k.
TargetRiskProfile benchmark_profile(const RiskFamilySpec& family,
                                    const DiscreteDistribution& benchmark,
                                    const BenchmarkProfileOptions& opts = {});
TargetRiskProfile benchmark_profile(const RiskFamilySpec& family, const SampleWindow& benchmark,
                                    const BenchmarkProfileOptions& opts = {});

struct FinitenessLevels {
    double p1;
    double p2;
};

struct FinitenessViolation {
    enum class Clause : std::uint8_t {
        NotNormalized,          // g(0) != 0
        NotLowerSemicontinuous,
        P1NotPositive,          // p1 = 0
        P1NotBelowP2,           // p1 >= p2
        P2NotBelowOne,          // p2 = 1
    };
    Clause clause;
    std::string detail;
};

using FinitenessReport = std::variant<FinitenessLevels, FinitenessViolation>;

FinitenessReport validate_finiteness_assumption(const TargetRiskProfile& g);

// Tab-separated "level<TAB>value" rows, first row at level 0, last at 1.
// Only left-continuous profiles can be written.
void write_profile_table(std::ostream& os, const TargetRiskProfile& g);
std::string profile_table_string(const TargetRiskProfile& g);
// Accepts '#' comment lines and blank lines. Malformed rows throw
// std::invalid_argument naming the line.
TargetRiskProfile read_profile_table(std::istream& is);
TargetRiskProfile load_profile_table(const std::string& path);
void save_profile_table(const std::string& path, const TargetRiskProfile& g);

}  // namespace adjrisk
