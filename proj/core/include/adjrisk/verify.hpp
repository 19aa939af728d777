#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adjrisk/adjusted.hpp"
#include "adjrisk/distributions.hpp"
#include "adjrisk/families.hpp"
#include "adjrisk/profiles.hpp"

namespace adjrisk {

enum class FixtureProperty : std::uint8_t {
    // rho((X+Y)/2) > rho(X)/2 + rho(Y)/2 with X, Y independent.
    Convexity,
    // lambda rho(X) < rho(lambda X).
    PositiveHomogeneity,
    // rho(X+Y) > rho(X) + rho(Y) with X, Y comonotone.
    Subadditivity,
    // rho(X) < rho(max{X, 0}).
    SurplusInvariance,
};

struct CounterexampleFixture {
    std::string name;
    RiskFamilySpec spec;
    TargetRiskProfile g;
    FixtureProperty property;
    DiscreteDistribution x;
    std::optional<DiscreteDistribution> y;  // defaults to a copy of x
    double lambda = 2.0;
    // Exact sides of the claim, checked to 1e-12 when present.
    std::optional<double> expected_lhs;
    std::optional<double> expected_rhs;
};

struct FixtureReport {
    std::string name;
    std::string claim;  // e.g. "rho(2X) > 2 rho(X)"
    ExtReal lhs;
    ExtReal rhs;
    bool pass = false;
    std::string detail;
};

FixtureReport run_fixture(const CounterexampleFixture& f, const LevelGrid& grid = {});

// The counterexamples for convexity, positive homogeneity, subadditivity
// and surplus invariance of the composed and expectile-based measures.
std::vector<CounterexampleFixture> counterexample_fixtures();

struct PhWitness {
    std::size_t candidate;
    double lambda;
    ExtReal scaled;   // rho(lambda X)
    ExtReal product;  // lambda rho(X)
    double gap;
};

// First (candidate, lambda) with |rho(lambda X) - lambda rho(X)| above
// rel_tol * max(1, |lambda rho(X)|).
std::optional<PhWitness> ph_violation_search(const RiskFamilySpec& spec,
                                             const TargetRiskProfile& g,
                                             std::span<const DiscreteDistribution> candidates,
                                             std::span<const double> lambdas,
                                             double rel_tol = 1e-9, const LevelGrid& grid = {});

// Bounded "continuous-like" laws (many equal-weight atoms, uniform and
// right-skewed) at scales spanning several orders of magnitude.
std::vector<DiscreteDistribution> guided_ph_candidates();

// Law of a random pair on a common finite space.
struct JointLaw {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> prob;

    [[nodiscard]] DiscreteDistribution law_x() const;
    [[nodiscard]] DiscreteDistribution law_y() const;
    [[nodiscard]] DiscreteDistribution law_sum() const;
};

// rho(X+Y) - rho(X) - rho(Y); positive means a subadditivity violation.
ExtReal subadditivity_excess(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                             const JointLaw& joint, const LevelGrid& grid = {});

}  // namespace adjrisk
