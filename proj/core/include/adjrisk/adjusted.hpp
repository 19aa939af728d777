#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "adjrisk/distributions.hpp"
#include "adjrisk/extreal.hpp"
#include "adjrisk/families.hpp"
#include "adjrisk/profiles.hpp"

namespace adjrisk {

struct AdjustedResult {
    ExtReal value = ExtReal::neg_inf();
    double argmax_level = 0.0;
    // False when the best grid point is a left/right-limit probe or when
    // every term is -inf.
    bool attained = false;
};

struct LevelGrid {
    double step = 0.02;
    double lower = 0.0;
    double upper = 1.0;
    // Offset used to probe one-sided limits at jumps of g and at family
    // segment endpoints.
    double limit_offset = 1e-9;
    // Additional levels to evaluate.
    std::vector<double> extra;

    // The grid used by the window estimators: levels 0.01% to 99.99%.
    static LevelGrid estimator_default() { return LevelGrid{0.02, 1e-4, 0.9999, 1e-9, {}}; }
};

struct GridPoint {
    double level;
    bool probe;  // one-sided limit approximation rather than a target level
};

// Union of uniform steps, profile knots, family endpoints, user extras and
// the limit probes around knots and endpoints, clipped to [lower, upper].
std::vector<GridPoint> evaluation_grid(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                                       const LevelGrid& grid);

AdjustedResult adjusted_value(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                              const DiscreteDistribution& d, const LevelGrid& grid = {});
AdjustedResult adjusted_value_hat(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                                  const SampleWindow& w,
                                  const LevelGrid& grid = LevelGrid::estimator_default());

// CRM/FCRM levels that do not line up with the jumps of g.
class LevelMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The family is not ordered on the evaluation grid.
class UnorderedFamilyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Finite maximum over the jump levels of a left-continuous step profile.
// Supports the ES, VaR, SCRM, CRM, FCRM and expectile families.
AdjustedResult closed_form_step(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                                const DiscreteDistribution& d);

// max over finite u in Im(g) of rho_{g^{-1}_+(u)} - u. Requires a
// left-continuous g and an ordered family.
ExtReal ordered_representation(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                               const DiscreteDistribution& d, const LevelGrid& grid = {});

// Increasing right-continuous step function alpha: [0, inf) -> (0, 1],
// alpha(u) = values[k] on [breaks[k], breaks[k+1]), breaks[0] = 0.
class AlphaFunction {
public:
    AlphaFunction(std::vector<double> breaks, std::vector<double> values);

    [[nodiscard]] double operator()(double u) const;
    [[nodiscard]] std::span<const double> breaks() const noexcept { return breaks_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double sup() const noexcept { return values_.back(); }

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
};

// sup over u >= 0 of VaR_{alpha(u)}(d) - u, maximized over u_grid plus the
// breakpoints of alpha.
ExtReal lvar(const DiscreteDistribution& d, const AlphaFunction& alpha,
             std::span<const double> u_grid = {});

// Profile g with adjusted_value(VaR family, g, .) = LVaR_alpha.
TargetRiskProfile alpha_to_profile(const AlphaFunction& alpha);

}  // namespace adjrisk
