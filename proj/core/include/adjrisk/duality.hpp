#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "adjrisk/distributions.hpp"
#include "adjrisk/extreal.hpp"
#include "adjrisk/profiles.hpp"

namespace adjrisk {

inline constexpr std::size_t kDualAtomCap = 12;

// Thrown when a desk-scale search is asked to handle too large an input.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Radon-Nikodym weights dQ/dP, one per atom of a reference law.
class Density {
public:
    // Weights must be positive and satisfy sum p_i w_i = 1 within 1e-12.
    Density(const DiscreteDistribution& reference, std::vector<double> weights);

    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
    [[nodiscard]] double min_weight() const noexcept;
    [[nodiscard]] double max_weight() const noexcept;

private:
    std::vector<double> weights_;
};

// essinf / (essinf + esssup) of the weights, in (0, 1/2].
double c_of(const Density& q);
double expectation(const DiscreteDistribution& d, const Density& q);

struct DualOptimum {
    double value;
    Density density;
};

// Optimum of E_Q[X] over densities with max/min weight ratio <= beta:
// the maximum when maximize is set, the minimum otherwise.
DualOptimum ratio_bounded_extremum(const DiscreteDistribution& d, double beta, bool maximize);

// Expectile through its dual: min of E_Q[X] over the ratio bound
// (1-q)/q for q < 1/2, max over q/(1-q) for q >= 1/2.
DualOptimum expectile_dual(const DiscreteDistribution& d, double q);
ExtReal expectile_dual_value(const DiscreteDistribution& d, double q);

struct DualSearchOptions {
    double level_step = 1e-3;
    double limit_offset = 1e-9;
};

struct AermDualResult {
    ExtReal value = ExtReal::neg_inf();
    // Level p in the first branch, 1 - c(Q) in the second.
    double level = 0.0;
    // 1 or 2.
    int branch = 1;
    // Optimal density when one is attained.
    std::vector<double> weights;
};

// Both branches of the dual form of the adjusted expectile measure.
// Requires g(0) = 0 and g(1) = +inf.
AermDualResult aerm_dual(const DiscreteDistribution& d, const TargetRiskProfile& g,
                         const DualSearchOptions& opts = {});
ExtReal aerm_dual_value(const DiscreteDistribution& d, const TargetRiskProfile& g,
                        const DualSearchOptions& opts = {});

struct MinimaxGap {
    ExtReal sup_inf;
    ExtReal inf_sup;
};

// sup_p inf_Q and inf_Q sup_p of E_Q[X] - g(p) + indicator{p <= c(Q)}
// over p in [0, 1/2].
MinimaxGap minimax_gap(const DiscreteDistribution& d, const TargetRiskProfile& g,
                       const DualSearchOptions& opts = {});

}  // namespace adjrisk
