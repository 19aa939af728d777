#pragma once

#include <cstddef>

#include "adjrisk/distributions.hpp"

namespace adjrisk {

// Base measures on finite support are always finite, so they return double.
// Levels outside [0,1] throw std::domain_error.

double var(const DiscreteDistribution& d, double p);
double es(const DiscreteDistribution& d, double p);
// Average of VaR over [a1, a2]; a1 == a2 gives VaR.
double rvar(const DiscreteDistribution& d, double a1, double a2);
double expectile(const DiscreteDistribution& d, double q);
// (1-p)^{-1} times the integral of ES_u over u in [p, 1].
double conditional_es(const DiscreteDistribution& d, double p);

// q E[(X-e)+] - (1-q) E[(e-X)+]; decreasing in e, zero at the expectile.
double expectile_residual(const DiscreteDistribution& d, double q, double e);

// Window estimators. Levels must lie strictly inside (0,1).
double var_hat(const SampleWindow& w, double p);
double es_hat(const SampleWindow& w, double p);
inline constexpr std::size_t kDefaultRvarGridPoints = 20;
double rvar_hat(const SampleWindow& w, double a1, double a2,
                std::size_t grid_points = kDefaultRvarGridPoints);
double expectile_hat(const SampleWindow& w, double q);

}  // namespace adjrisk
