#include "adjrisk/families.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "adjrisk/extreal.hpp"
#include "adjrisk/measures.hpp"

namespace adjrisk {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_interior(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument(std::string(what) + ": level parameter must lie in (0,1)");
    }
}

void require_levels(const std::vector<double>& levels, const char* what) {
    if (levels.empty()) {
        throw std::invalid_argument(std::string(what) + ": at least one level is required");
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        require_interior(levels[i], what);
        if (i > 0 && !(levels[i] > levels[i - 1])) {
            throw std::invalid_argument(std::string(what) + ": levels must be strictly increasing");
        }
    }
}

std::string join_levels(const std::vector<double>& levels) {
    std::string out;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += to_string(ExtReal(levels[i]));
    }
    return out;
}

double parse_level(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("parse_family: bad level '" + std::string(s) + "'");
    }
    return v;
}

std::vector<double> parse_levels(std::string_view s) {
    std::vector<double> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(parse_level(s.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        s.remove_prefix(comma + 1);
    }
    return out;
}

// Index i of the segment (p_{i-1}, p_i] containing p, with p_0 = 0 and
// [0, p_1] as the first segment; levels.size() means "above p_n".
std::size_t segment_of(const std::vector<double>& levels, double p) {
    return static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), p) -
                                    levels.begin());
}

}  // namespace

RiskFamilySpec::RiskFamilySpec(FamilyVariant v) : v_(std::move(v)) {
    std::visit(Overloaded{
                   [](const ScrmSplit& s) { require_interior(s.r, "scrm"); },
                   [](const CrmLevels& s) { require_levels(s.levels, "crm"); },
                   [](const FcrmLevels& s) { require_levels(s.levels, "fcrm"); },
                   [](const SolvencyMix& s) { require_interior(s.split, "solvency"); },
                   [](const auto&) {},
               },
               v_);
}

std::vector<double> RiskFamilySpec::segment_endpoints() const {
    return std::visit(Overloaded{
                          [](const ScrmSplit& s) { return std::vector<double>{s.r}; },
                          [](const CrmLevels& s) { return s.levels; },
                          [](const FcrmLevels& s) { return s.levels; },
                          [](const SolvencyMix& s) { return std::vector<double>{s.split}; },
                          [](const auto&) { return std::vector<double>{}; },
                      },
                      v_);
}

bool RiskFamilySpec::ordered_by_construction() const noexcept {
    return !std::holds_alternative<SolvencyMix>(v_);
}

std::string to_string(const RiskFamilySpec& spec) {
    return std::visit(Overloaded{
                          [](const EsFamily&) { return std::string("es"); },
                          [](const VarFamily&) { return std::string("var"); },
                          [](const ScrmSplit& s) { return "scrm:" + to_string(ExtReal(s.r)); },
                          [](const CrmLevels& s) { return "crm:" + join_levels(s.levels); },
                          [](const FcrmLevels& s) { return "fcrm:" + join_levels(s.levels); },
                          [](const ExpectileFamily&) { return std::string("expectile"); },
                          [](const ConditionalEsFamily&) { return std::string("ces"); },
                          [](const SolvencyMix& s) {
                              return "solvency:" + to_string(ExtReal(s.split));
                          },
                      },
                      spec.variant());
}

RiskFamilySpec parse_family(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    const std::string_view args =
        colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    const bool has_args = colon != std::string_view::npos;
    auto no_args = [&](RiskFamilySpec s) {
        if (has_args) {
            throw std::invalid_argument("parse_family: '" + std::string(head) +
                                        "' takes no parameters");
        }
        return s;
    };
    auto need_args = [&]() {
        if (!has_args) {
            throw std::invalid_argument("parse_family: '" + std::string(head) +
                                        "' requires level parameters");
        }
    };
    if (head == "es") {
        return no_args(RiskFamilySpec::es());
    }
    if (head == "var") {
        return no_args(RiskFamilySpec::var());
    }
    if (head == "expectile") {
        return no_args(RiskFamilySpec::expectile());
    }
    if (head == "ces") {
        return no_args(RiskFamilySpec::conditional_es());
    }
    if (head == "scrm") {
        need_args();
        return RiskFamilySpec::scrm(parse_level(args));
    }
    if (head == "solvency") {
        need_args();
        return RiskFamilySpec::solvency(parse_level(args));
    }
    if (head == "crm") {
        need_args();
        return RiskFamilySpec::crm(parse_levels(args));
    }
    if (head == "fcrm") {
        need_args();
        return RiskFamilySpec::fcrm(parse_levels(args));
    }
    throw std::invalid_argument("parse_family: unknown family '" + std::string(text) + "'");
}

double rho_p(const RiskFamilySpec& spec, const DiscreteDistribution& d, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("rho_p: level must lie in [0,1]");
    }
    return std::visit(
        Overloaded{
            [&](const EsFamily&) { return es(d, p); },
            [&](const VarFamily&) { return var(d, p); },
            [&](const ScrmSplit& s) { return p <= s.r ? var(d, p) : es(d, p); },
            [&](const CrmLevels& s) {
                const std::size_t i = segment_of(s.levels, p);
                return i == s.levels.size() ? es(d, p) : rvar(d, p, s.levels[i]);
            },
            [&](const FcrmLevels& s) {
                const std::size_t i = segment_of(s.levels, p);
                if (i == s.levels.size()) {
                    return es(d, p);
                }
                return rvar(d, i == 0 ? 0.0 : s.levels[i - 1], s.levels[i]);
            },
            [&](const ExpectileFamily&) { return expectile(d, p); },
            [&](const ConditionalEsFamily&) { return conditional_es(d, p); },
            [&](const SolvencyMix& s) { return p <= s.split ? es(d, p) : var(d, p); },
        },
        spec.variant());
}

namespace {

// Estimators need a1 > 0; the lowest estimator level is 0.01%.
constexpr double kLowestEstimatorLevel = 1e-4;

double rvar_segment_hat(const SampleWindow& w, double a1, double a2) {
    a1 = std::max(a1, kLowestEstimatorLevel);
    if (a1 >= a2) {
        return var_hat(w, a2);
    }
    return rvar_hat(w, a1, a2);
}

}  // namespace

double rho_p_hat(const RiskFamilySpec& spec, const SampleWindow& w, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("rho_p_hat: level must lie in [0,1]");
    }
    if (p == 0.0 || p == 1.0 || std::holds_alternative<ConditionalEsFamily>(spec.variant())) {
        return rho_p(spec, w.law(), p);
    }
    return std::visit(
        Overloaded{
            [&](const EsFamily&) { return es_hat(w, p); },
            [&](const VarFamily&) { return var_hat(w, p); },
            [&](const ScrmSplit& s) { return p <= s.r ? var_hat(w, p) : es_hat(w, p); },
            [&](const CrmLevels& s) {
                const std::size_t i = segment_of(s.levels, p);
                return i == s.levels.size() ? es_hat(w, p) : rvar_segment_hat(w, p, s.levels[i]);
            },
            [&](const FcrmLevels& s) {
                const std::size_t i = segment_of(s.levels, p);
                if (i == s.levels.size()) {
                    return es_hat(w, p);
                }
                return rvar_segment_hat(w, i == 0 ? 0.0 : s.levels[i - 1], s.levels[i]);
            },
            [&](const ExpectileFamily&) { return expectile_hat(w, p); },
            [&](const ConditionalEsFamily&) { return conditional_es(w.law(), p); },
            [&](const SolvencyMix& s) { return p <= s.split ? es_hat(w, p) : var_hat(w, p); },
        },
        spec.variant());
}

OrderCheck check_ordered(const RiskFamilySpec& spec, const DiscreteDistribution& d,
                         std::span<const double> grid) {
    OrderCheck out;
    if (grid.empty()) {
        return out;
    }
    double prev_p = grid[0];
    double prev = rho_p(spec, d, prev_p);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] >= prev_p)) {
            throw std::invalid_argument("check_ordered: grid must be increasing");
        }
        const double cur = rho_p(spec, d, grid[i]);
        if (cur < prev - 1e-12 * (1.0 + std::abs(prev))) {
            out.ordered = false;
            out.first_violation = OrderViolation{prev_p, grid[i], prev, cur};
            return out;
        }
        prev_p = grid[i];
        prev = cur;
    }
    return out;
}

}  // namespace adjrisk
