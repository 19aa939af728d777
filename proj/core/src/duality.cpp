#include "adjrisk/duality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace adjrisk {

Density::Density(const DiscreteDistribution& reference, std::vector<double> weights)
    : weights_(std::move(weights)) {
    if (weights_.size() != reference.size()) {
        throw std::invalid_argument("Density: one weight per atom is required");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
            throw std::invalid_argument("Density: weights must be finite and positive");
        }
        total += reference.atoms()[i].prob * weights_[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("Density: weights must have mean one, got " +
                                    std::to_string(total));
    }
}

double Density::min_weight() const noexcept {
    return *std::min_element(weights_.begin(), weights_.end());
}

double Density::max_weight() const noexcept {
    return *std::max_element(weights_.begin(), weights_.end());
}

double c_of(const Density& q) {
    const double lo = q.min_weight();
    return lo / (lo + q.max_weight());
}

double expectation(const DiscreteDistribution& d, const Density& q) {
    if (q.weights().size() != d.size()) {
        throw std::invalid_argument("expectation: density does not match the law");
    }
    double e = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        e += d.atoms()[i].prob * q.weights()[i] * d.atoms()[i].value;
    }
    return e;
}

DualOptimum ratio_bounded_extremum(const DiscreteDistribution& d, double beta, bool maximize) {
    if (d.size() > kDualAtomCap) {
        throw ResourceLimitError("dual search supports at most " + std::to_string(kDualAtomCap) +
                                 " atoms, got " + std::to_string(d.size()));
    }
    if (!(beta >= 1.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("ratio_bounded_extremum: ratio bound must be finite and >= 1");
    }
    // The optimizer is comonotone (or antitone) with X and two-valued: the
    // weight beta*l on the k largest (or smallest) atoms, l on the rest.
    // Within an atom the objective is a linear-fractional function of the
    // split point, so some k with no fractional atom is optimal.
    const std::size_t n = d.size();
    auto atoms = d.atoms();
    double best = maximize ? -HUGE_VAL : HUGE_VAL;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        double heavy_mass = 0.0;
        double heavy_moment = 0.0;
        double light_mass = 0.0;
        double light_moment = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool heavy = maximize ? i + k >= n : i < k;
            if (heavy) {
                heavy_mass += atoms[i].prob;
                heavy_moment += atoms[i].prob * atoms[i].value;
            } else {
                light_mass += atoms[i].prob;
                light_moment += atoms[i].prob * atoms[i].value;
            }
        }
        const double value =
            (light_moment + beta * heavy_moment) / (light_mass + beta * heavy_mass);
        if (maximize ? value > best : value < best) {
            best = value;
            best_k = k;
        }
    }
    double heavy_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (maximize ? i + best_k >= n : i < best_k) {
            heavy_mass += atoms[i].prob;
        }
    }
    const double light = 1.0 / ((1.0 - heavy_mass) + beta * heavy_mass);
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        weights[i] = (maximize ? i + best_k >= n : i < best_k) ? beta * light : light;
    }
    // Renormalize against rounding in the masses.
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += atoms[i].prob * weights[i];
    }
    for (double& w : weights) {
        w /= total;
    }
    return DualOptimum{best, Density(d, std::move(weights))};
}

DualOptimum expectile_dual(const DiscreteDistribution& d, double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("expectile_dual: level must lie in (0,1)");
    }
    if (q >= 0.5) {
        return ratio_bounded_extremum(d, q / (1.0 - q), true);
    }
    return ratio_bounded_extremum(d, (1.0 - q) / q, false);
}

ExtReal expectile_dual_value(const DiscreteDistribution& d, double q) {
    return ExtReal(expectile_dual(d, q).value);
}

namespace {

std::vector<double> level_scan(const TargetRiskProfile& g, double lo, double hi,
                               const DualSearchOptions& opts) {
    if (!(opts.level_step > 0.0 && opts.level_step <= 0.5)) {
        throw std::invalid_argument("dual search: level step must lie in (0, 0.5]");
    }
    std::vector<double> levels;
    const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / opts.level_step - 1e-9));
    for (std::size_t k = 0; k <= count; ++k) {
        levels.push_back(std::min(lo + static_cast<double>(k) * opts.level_step, hi));
    }
    for (double t : g.knots()) {
        for (double p : {t, t - opts.limit_offset, t + opts.limit_offset}) {
            if (p >= lo && p <= hi) {
                levels.push_back(p);
            }
        }
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

void require_aerm_profile(const TargetRiskProfile& g, const char* who) {
    if (!g.in_g0()) {
        throw std::invalid_argument(std::string(who) + ": requires g(0) = 0");
    }
    if (!g(1.0).is_pos_inf()) {
        throw std::invalid_argument(std::string(who) + ": requires g(1) = +inf");
    }
}

// First branch: sup over p in [0, 1/2] of inf_{c(Q) >= p} E_Q[X] - g(p).
AermDualResult first_branch(const DiscreteDistribution& d, const TargetRiskProfile& g,
                            const DualSearchOptions& opts) {
    AermDualResult out;
    out.branch = 1;
    for (double p : level_scan(g, 0.0, 0.5, opts)) {
        const ExtReal gp = g(p);
        if (gp.is_pos_inf()) {
            continue;
        }
        double inner = d.min_value();
        std::vector<double> weights;
        if (p > 0.0) {
            DualOptimum opt = ratio_bounded_extremum(d, (1.0 - p) / p, false);
            inner = opt.value;
            weights = opt.density.weights();
        }
        const ExtReal term = ext_sub(ExtReal(inner), gp);
        if (term > out.value) {
            out.value = term;
            out.level = p;
            out.weights = std::move(weights);
        }
    }
    return out;
}

}  // namespace

AermDualResult aerm_dual(const DiscreteDistribution& d, const TargetRiskProfile& g,
                         const DualSearchOptions& opts) {
    require_aerm_profile(g, "aerm_dual");
    AermDualResult best = first_branch(d, g, opts);
    // Second branch: sup_Q E_Q[X] - g(1 - c(Q)), scanned through the level
    // p = 1 - c(Q) in [1/2, 1) with ratio bound p / (1 - p).
    for (double p : level_scan(g, 0.5, std::min(g.p2(), 1.0 - opts.limit_offset), opts)) {
        const ExtReal gp = g(p);
        if (gp.is_pos_inf() || p >= 1.0) {
            continue;
        }
        DualOptimum opt = ratio_bounded_extremum(d, p / (1.0 - p), true);
        const ExtReal term = ext_sub(ExtReal(opt.value), gp);
        if (term > best.value) {
            best.value = term;
            best.level = p;
            best.branch = 2;
            best.weights = opt.density.weights();
        }
    }
    return best;
}

ExtReal aerm_dual_value(const DiscreteDistribution& d, const TargetRiskProfile& g,
                        const DualSearchOptions& opts) {
    return aerm_dual(d, g, opts).value;
}

MinimaxGap minimax_gap(const DiscreteDistribution& d, const TargetRiskProfile& g,
                       const DualSearchOptions& opts) {
    if (!g.at_zero().is_finite()) {
        throw std::invalid_argument("minimax_gap: g(0) must be finite");
    }
    MinimaxGap out{first_branch(d, g, opts).value, ExtReal::pos_inf()};
    // For fixed Q the inner sup is +inf unless g = +inf on (c(Q), 1/2];
    // otherwise it is E_Q[X] - g(0). Admissible Q are those with
    // c(Q) >= c0 = sup{p <= 1/2 | g(p) < inf}, plus Q = P.
    double c0 = 0.0;
    for (double p : level_scan(g, 0.0, 0.5, opts)) {
        if (g(p).is_finite()) {
            c0 = p;
        }
    }
    double inner = 0.0;
    if (c0 >= 0.5) {
        inner = d.mean();
    } else if (c0 > 0.0) {
        inner = ratio_bounded_extremum(d, (1.0 - c0) / c0, false).value;
    } else {
        inner = d.min_value();
    }
    out.inf_sup = ext_sub(ExtReal(inner), g.at_zero());
    return out;
}

}  // namespace adjrisk
