#include "adjrisk/adjusted.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adjrisk/measures.hpp"

namespace adjrisk {

std::vector<GridPoint> evaluation_grid(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                                       const LevelGrid& grid) {
    if (!(grid.lower >= 0.0 && grid.lower <= grid.upper && grid.upper <= 1.0)) {
        throw std::invalid_argument("evaluation_grid: need 0 <= lower <= upper <= 1");
    }
    if (!(grid.step > 0.0 && grid.step <= 1.0)) {
        throw std::invalid_argument("evaluation_grid: step must lie in (0,1]");
    }
    if (!(grid.limit_offset >= 0.0 && grid.limit_offset < 0.5)) {
        throw std::invalid_argument("evaluation_grid: limit offset must lie in [0,0.5)");
    }
    std::vector<GridPoint> pts;
    auto add = [&](double p, bool probe) {
        if (p >= grid.lower && p <= grid.upper) {
            pts.push_back({p, probe});
        }
    };
    const auto count = static_cast<std::size_t>(std::ceil(1.0 / grid.step - 1e-9));
    for (std::size_t k = 0; k <= count; ++k) {
        add(std::min(static_cast<double>(k) * grid.step, 1.0), false);
    }
    add(grid.lower, false);
    add(grid.upper, false);
    for (double p : grid.extra) {
        add(p, false);
    }
    std::vector<double> jumps(g.knots().begin(), g.knots().end());
    const std::vector<double> ends = spec.segment_endpoints();
    jumps.insert(jumps.end(), ends.begin(), ends.end());
    for (double p : jumps) {
        add(p, false);
        if (grid.limit_offset > 0.0) {
            add(p - grid.limit_offset, true);
            add(p + grid.limit_offset, true);
        }
    }
    std::sort(pts.begin(), pts.end(), [](const GridPoint& a, const GridPoint& b) {
        return a.level < b.level || (a.level == b.level && !a.probe && b.probe);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const GridPoint& a, const GridPoint& b) { return a.level == b.level; }),
              pts.end());
    return pts;
}

namespace {

template <class Rho>
AdjustedResult grid_max(const std::vector<GridPoint>& pts, const TargetRiskProfile& g, Rho rho) {
    AdjustedResult best;
    bool have = false;
    for (const GridPoint& pt : pts) {
        const ExtReal gp = g(pt.level);
        ExtReal term = ExtReal::neg_inf();
        if (!gp.is_pos_inf()) {
            term = ext_sub(ExtReal(rho(pt.level)), gp);
        }
        if (!have || term > best.value) {
            best.value = term;
            best.argmax_level = pt.level;
            best.attained = !pt.probe;
            have = true;
        }
    }
    if (best.value.is_neg_inf()) {
        best.attained = false;
    }
    return best;
}

}  // namespace

AdjustedResult adjusted_value(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                              const DiscreteDistribution& d, const LevelGrid& grid) {
    return grid_max(evaluation_grid(spec, g, grid), g,
                    [&](double p) { return rho_p(spec, d, p); });
}

AdjustedResult adjusted_value_hat(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                                  const SampleWindow& w, const LevelGrid& grid) {
    return grid_max(evaluation_grid(spec, g, grid), g,
                    [&](double p) { return rho_p_hat(spec, w, p); });
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct StepLevel {
    double level;
    double value;
};

// Knots of a left-continuous profile where g is finite: (t_j, g(t_j)).
std::vector<StepLevel> finite_step_levels(const TargetRiskProfile& g, const char* who) {
    if (!g.is_left_continuous()) {
        throw std::invalid_argument(std::string(who) + ": profile must be left-continuous");
    }
    std::vector<StepLevel> out;
    auto knots = g.knots();
    auto point = g.point_values();
    for (std::size_t j = 0; j < knots.size(); ++j) {
        if (point[j].is_finite()) {
            out.push_back({knots[j], point[j].value()});
        }
    }
    return out;
}

bool same_level(double a, double b) {
    return std::abs(a - b) <= 1e-12;
}

// Checks that `levels` lists the positive finite jump levels of g, either
// all of them or all but the last, and reports whether the last one is
// covered by the ES tail.
bool last_in_es_tail(const std::vector<double>& levels, const std::vector<StepLevel>& steps,
                     const char* who) {
    std::vector<double> interior;
    for (const StepLevel& s : steps) {
        if (s.level > 0.0) {
            interior.push_back(s.level);
        }
    }
    auto matches = [&](std::size_t count) {
        if (levels.size() != count) {
            return false;
        }
        for (std::size_t i = 0; i < count; ++i) {
            if (!same_level(levels[i], interior[i])) {
                return false;
            }
        }
        return true;
    };
    if (!interior.empty() && matches(interior.size() - 1)) {
        return true;
    }
    if (matches(interior.size())) {
        return false;
    }
    throw LevelMismatchError(std::string(who) +
                             ": family levels must equal the jump levels of g (all, or all "
                             "but the last)");
}

}  // namespace

AdjustedResult closed_form_step(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                                const DiscreteDistribution& d) {
    const std::vector<StepLevel> steps = finite_step_levels(g, "closed_form_step");
    std::vector<double> terms(steps.size());

    auto crm_like = [&](const std::vector<double>& levels, bool fixed) {
        const bool es_tail = last_in_es_tail(levels, steps, "closed_form_step");
        std::size_t seen = 0;
        for (std::size_t j = 0; j < steps.size(); ++j) {
            const double t = steps[j].level;
            double rho = 0.0;
            if (t == 0.0) {
                rho = rvar(d, 0.0, levels.front());
            } else if (es_tail && seen == levels.size()) {
                rho = es(d, t);
            } else {
                rho = fixed ? rvar(d, seen == 0 ? 0.0 : levels[seen - 1], levels[seen])
                            : var(d, levels[seen]);
                ++seen;
            }
            terms[j] = rho - steps[j].value;
        }
    };

    std::visit(Overloaded{
                   [&](const EsFamily&) {
                       for (std::size_t j = 0; j < steps.size(); ++j) {
                           terms[j] = es(d, steps[j].level) - steps[j].value;
                       }
                   },
                   [&](const VarFamily&) {
                       for (std::size_t j = 0; j < steps.size(); ++j) {
                           terms[j] = var(d, steps[j].level) - steps[j].value;
                       }
                   },
                   [&](const ExpectileFamily&) {
                       for (std::size_t j = 0; j < steps.size(); ++j) {
                           terms[j] = expectile(d, steps[j].level) - steps[j].value;
                       }
                   },
                   [&](const ScrmSplit& s) {
                       for (std::size_t j = 0; j < steps.size(); ++j) {
                           const double t = steps[j].level;
                           terms[j] = (t <= s.r ? var(d, t) : es(d, t)) - steps[j].value;
                       }
                   },
                   [&](const CrmLevels& s) { crm_like(s.levels, false); },
                   [&](const FcrmLevels& s) { crm_like(s.levels, true); },
                   [&](const auto&) {
                       throw std::invalid_argument("closed_form_step: no step representation for "
                                                   "family '" +
                                                   to_string(spec) + "'");
                   },
               },
               spec.variant());

    AdjustedResult out;
    for (std::size_t j = 0; j < steps.size(); ++j) {
        if (j == 0 || ExtReal(terms[j]) > out.value) {
            out.value = terms[j];
            out.argmax_level = steps[j].level;
            out.attained = true;
        }
    }
    return out;
}

ExtReal ordered_representation(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                               const DiscreteDistribution& d, const LevelGrid& grid) {
    if (!g.is_left_continuous()) {
        throw std::invalid_argument("ordered_representation: profile must be left-continuous");
    }
    std::vector<double> levels;
    for (const GridPoint& pt : evaluation_grid(spec, g, grid)) {
        levels.push_back(pt.level);
    }
    const OrderCheck check = check_ordered(spec, d, levels);
    if (!check.ordered) {
        const OrderViolation& v = *check.first_violation;
        throw UnorderedFamilyError("ordered_representation: family '" + to_string(spec) +
                                   "' is not ordered: rho at " + to_string(ExtReal(v.p)) +
                                   " exceeds rho at " + to_string(ExtReal(v.q)));
    }
    ExtReal best = ExtReal::neg_inf();
    for (const ExtReal& u : g.image()) {
        if (!u.is_finite()) {
            continue;
        }
        const double level = left_inverse(g, u);
        const ExtReal term(rho_p(spec, d, level) - u.value());
        best = std::max(best, term);
    }
    return best;
}

AlphaFunction::AlphaFunction(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
    if (breaks_.empty() || breaks_.size() != values_.size()) {
        throw std::invalid_argument("AlphaFunction: need matching non-empty breaks and values");
    }
    if (breaks_.front() != 0.0) {
        throw std::invalid_argument("AlphaFunction: first breakpoint must be 0");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!(values_[k] > 0.0 && values_[k] <= 1.0)) {
            throw std::invalid_argument("AlphaFunction: values must lie in (0,1]");
        }
        if (!std::isfinite(breaks_[k])) {
            throw std::invalid_argument("AlphaFunction: breakpoints must be finite");
        }
        if (k > 0 && !(breaks_[k] > breaks_[k - 1] && values_[k] > values_[k - 1])) {
            throw std::invalid_argument(
                "AlphaFunction: breakpoints and values must be strictly increasing");
        }
    }
}

double AlphaFunction::operator()(double u) const {
    if (!(u >= 0.0)) {
        throw std::domain_error("AlphaFunction: argument must be >= 0");
    }
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), u);
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

ExtReal lvar(const DiscreteDistribution& d, const AlphaFunction& alpha,
             std::span<const double> u_grid) {
    double best = -HUGE_VAL;
    auto consider = [&](double u) {
        if (u >= 0.0) {
            best = std::max(best, var(d, alpha(u)) - u);
        }
    };
    for (double u : alpha.breaks()) {
        consider(u);
    }
    const double span = d.max_value() - d.min_value();
    for (double u : u_grid) {
        if (u <= span + alpha.breaks().back()) {
            consider(u);
        }
    }
    return ExtReal(best);
}

TargetRiskProfile alpha_to_profile(const AlphaFunction& alpha) {
    auto breaks = alpha.breaks();
    auto values = alpha.values();
    std::vector<double> levels{0.0};
    std::vector<ExtReal> table{ExtReal(0.0)};
    levels.push_back(values[0]);
    table.emplace_back(0.0);
    for (std::size_t k = 1; k < values.size(); ++k) {
        levels.push_back(values[k]);
        table.emplace_back(breaks[k]);
    }
    if (levels.back() < 1.0) {
        levels.push_back(1.0);
        table.push_back(ExtReal::pos_inf());
    }
    return TargetRiskProfile::left_continuous(levels, table, TargetRiskProfile::Kind::StepFunction);
}

}  // namespace adjrisk
