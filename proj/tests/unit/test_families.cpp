#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "support.hpp"

using adjrisk::DiscreteDistribution;
using adjrisk::RiskFamilySpec;
using adjrisk::SampleWindow;

namespace {

std::vector<double> one_to(int n) {
    std::vector<double> v(n);
    std::iota(v.begin(), v.end(), 1.0);
    return v;
}

std::vector<RiskFamilySpec> sandwiched_specs() {
    return {RiskFamilySpec::scrm(0.3), RiskFamilySpec::scrm(0.95),
            RiskFamilySpec::crm({0.2, 0.5, 0.9}), RiskFamilySpec::fcrm({0.2, 0.5, 0.9}),
            RiskFamilySpec::crm({0.165, 0.33, 0.495, 0.66, 0.825, 0.99})};
}

}  // namespace

TEST(RiskFamilySpec, ValidatesLevels) {
    EXPECT_THROW(RiskFamilySpec::scrm(0.0), std::invalid_argument);
    EXPECT_THROW(RiskFamilySpec::scrm(1.0), std::invalid_argument);
    EXPECT_THROW(RiskFamilySpec::crm({}), std::invalid_argument);
    EXPECT_THROW(RiskFamilySpec::crm({0.5, 0.4}), std::invalid_argument);
    EXPECT_THROW(RiskFamilySpec::fcrm({0.5, 1.0}), std::invalid_argument);
    EXPECT_THROW(RiskFamilySpec::solvency(1.2), std::invalid_argument);
}

TEST(RiskFamilySpec, TextRoundTrip) {
    for (const RiskFamilySpec& s :
         {RiskFamilySpec::es(), RiskFamilySpec::var(), RiskFamilySpec::scrm(0.95),
          RiskFamilySpec::crm({0.5, 0.9}), RiskFamilySpec::fcrm({0.1, 0.2, 0.3}),
          RiskFamilySpec::expectile(), RiskFamilySpec::conditional_es(),
          RiskFamilySpec::solvency(0.975)}) {
        EXPECT_EQ(adjrisk::parse_family(adjrisk::to_string(s)), s) << adjrisk::to_string(s);
    }
    EXPECT_EQ(adjrisk::to_string(RiskFamilySpec::crm({0.5, 0.9})), "crm:0.5,0.9");
    EXPECT_THROW(adjrisk::parse_family("nope"), std::invalid_argument);
    EXPECT_THROW(adjrisk::parse_family("scrm:"), std::invalid_argument);
    EXPECT_THROW(adjrisk::parse_family("scrm:abc"), std::invalid_argument);
}

TEST(RhoP, Examples) {
    const DiscreteDistribution d({{-1.0, 0.2}, {0.5, 0.5}, {3.0, 0.3}});
    EXPECT_EQ(adjrisk::rho_p(RiskFamilySpec::scrm(0.99), d, 0.95), adjrisk::var(d, 0.95));
    EXPECT_EQ(adjrisk::rho_p(RiskFamilySpec::scrm(0.5), d, 0.5), adjrisk::var(d, 0.5));
    EXPECT_EQ(adjrisk::rho_p(RiskFamilySpec::scrm(0.5), d, 0.6), adjrisk::es(d, 0.6));
    const auto crm = RiskFamilySpec::crm({0.4, 0.8});
    EXPECT_EQ(adjrisk::rho_p(crm, d, 0.3), adjrisk::rvar(d, 0.3, 0.4));
    EXPECT_EQ(adjrisk::rho_p(crm, d, 0.8), adjrisk::var(d, 0.8));
    EXPECT_EQ(adjrisk::rho_p(crm, d, 0.0), adjrisk::rvar(d, 0.0, 0.4));
    EXPECT_EQ(adjrisk::rho_p(crm, d, 0.9), adjrisk::es(d, 0.9));
    const auto fcrm = RiskFamilySpec::fcrm({0.4, 0.8});
    EXPECT_EQ(adjrisk::rho_p(fcrm, d, 0.3), adjrisk::rvar(d, 0.0, 0.4));
    EXPECT_EQ(adjrisk::rho_p(fcrm, d, 0.5), adjrisk::rvar(d, 0.4, 0.8));
    EXPECT_EQ(adjrisk::rho_p(fcrm, d, 0.8), adjrisk::rvar(d, 0.4, 0.8));
    EXPECT_NEAR(adjrisk::rho_p(RiskFamilySpec::expectile(), d, 0.5), d.mean(), 1e-12);
    EXPECT_EQ(adjrisk::rho_p(RiskFamilySpec::conditional_es(), d, 0.4),
              adjrisk::conditional_es(d, 0.4));
    EXPECT_EQ(adjrisk::rho_p(RiskFamilySpec::solvency(0.5), d, 0.4), adjrisk::es(d, 0.4));
    EXPECT_EQ(adjrisk::rho_p(RiskFamilySpec::solvency(0.5), d, 0.6), adjrisk::var(d, 0.6));
    EXPECT_THROW(adjrisk::rho_p(RiskFamilySpec::es(), d, -0.1), std::domain_error);
}

TEST(RhoPHat, Examples) {
    const SampleWindow w(one_to(60));
    EXPECT_NEAR(adjrisk::rho_p_hat(RiskFamilySpec::es(), w, 0.95), 59.0, 1e-12);
    EXPECT_EQ(adjrisk::rho_p_hat(RiskFamilySpec::var(), w, 0.95), 58.0);
    const auto fcrm = RiskFamilySpec::fcrm({0.5, 0.9});
    EXPECT_EQ(adjrisk::rho_p_hat(fcrm, w, 0.3), adjrisk::rvar_hat(w, 1e-4, 0.5));
    EXPECT_EQ(adjrisk::rho_p_hat(fcrm, w, 0.7), adjrisk::rvar_hat(w, 0.5, 0.9));
    const auto crm = RiskFamilySpec::crm({0.5, 0.9});
    EXPECT_EQ(adjrisk::rho_p_hat(crm, w, 0.7), adjrisk::rvar_hat(w, 0.7, 0.9));
    EXPECT_EQ(adjrisk::rho_p_hat(crm, w, 0.9), adjrisk::var_hat(w, 0.9));
    // Boundary levels use the empirical law.
    EXPECT_EQ(adjrisk::rho_p_hat(RiskFamilySpec::es(), w, 0.0), adjrisk::es(w.law(), 0.0));
    EXPECT_EQ(adjrisk::rho_p_hat(RiskFamilySpec::var(), w, 1.0), 60.0);
}

TEST(CheckOrdered, Examples) {
    std::mt19937_64 rng(testing_support::suite_seed());
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) {
        grid.push_back(i / 100.0);
    }
    for (int i = 0; i < 50; ++i) {
        const auto d = testing_support::random_law(rng);
        EXPECT_TRUE(adjrisk::check_ordered(RiskFamilySpec::es(), d, grid).ordered);
        EXPECT_TRUE(adjrisk::check_ordered(RiskFamilySpec::expectile(), d, grid).ordered);
    }
    const DiscreteDistribution heavy({{0.0, 0.99}, {100.0, 0.01}});
    const std::vector<double> around{0.97, 0.975, 0.98, 0.99};
    const auto r = adjrisk::check_ordered(RiskFamilySpec::solvency(0.975), heavy, around);
    EXPECT_FALSE(r.ordered);
    ASSERT_TRUE(r.first_violation.has_value());
    EXPECT_EQ(r.first_violation->p, 0.975);
    EXPECT_EQ(r.first_violation->q, 0.98);
    EXPECT_NEAR(r.first_violation->rho_p, 40.0, 1e-12);
    EXPECT_EQ(r.first_violation->rho_q, 0.0);
}

TEST(FamilyProperty, CompositeFamiliesBetweenVarAndEs) {
    std::mt19937_64 rng(testing_support::suite_seed() + 1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = testing_support::random_law(rng);
        for (const auto& spec : sandwiched_specs()) {
            for (int i = 0; i <= 100; ++i) {
                const double p = i / 100.0;
                const double v = adjrisk::rho_p(spec, d, p);
                // A fixed segment average can sit below VaR_p inside the segment.
                if (!std::holds_alternative<adjrisk::FcrmLevels>(spec.variant())) {
                    EXPECT_LE(adjrisk::var(d, p), v + 1e-12) << adjrisk::to_string(spec) << " p=" << p;
                }
                EXPECT_LE(v, adjrisk::es(d, p) + 1e-12) << adjrisk::to_string(spec) << " p=" << p;
            }
        }
    }
}

TEST(FamilyProperty, FcrmBelowEsOfSegmentEnd) {
    std::mt19937_64 rng(testing_support::suite_seed() + 2);
    const std::vector<double> levels{0.2, 0.5, 0.9};
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = testing_support::random_law(rng);
        for (int i = 0; i <= 100; ++i) {
            const double p = i / 100.0;
            const double v = adjrisk::rho_p(RiskFamilySpec::fcrm(levels), d, p);
            const auto it = std::lower_bound(levels.begin(), levels.end(), p);
            const double lo = it == levels.begin() ? 0.0 : *(it - 1);
            if (it != levels.end()) {
                EXPECT_LE(adjrisk::var(d, lo), v + 1e-12);
                EXPECT_LE(v, adjrisk::var(d, *it) + 1e-12);
            }
        }
    }
}

TEST(FamilyProperty, CrmCollapsesAtSegmentEnds) {
    std::mt19937_64 rng(testing_support::suite_seed() + 3);
    const std::vector<double> levels{0.165, 0.33, 0.495, 0.66, 0.825, 0.99};
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = testing_support::random_law(rng);
        for (double l : levels) {
            EXPECT_EQ(adjrisk::rho_p(RiskFamilySpec::crm(levels), d, l), adjrisk::var(d, l));
        }
    }
}

TEST(FamilyProperty, EstimatorsMatchEmpiricalLaw) {
    std::mt19937_64 rng(testing_support::suite_seed() + 4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = testing_support::random_window(rng, 60);
        const SampleWindow w(pts);
        for (const auto& spec : {RiskFamilySpec::es(), RiskFamilySpec::var(),
                                 RiskFamilySpec::expectile(), RiskFamilySpec::scrm(0.9),
                                 RiskFamilySpec::solvency(0.9)}) {
            // Off the lattice n p in Z, where the order statistic steps one
            // point above the empirical quantile.
            for (int i = 1; i < 50; ++i) {
                const double p = i / 50.0 + 1e-7;
                EXPECT_NEAR(adjrisk::rho_p_hat(spec, w, p), adjrisk::rho_p(spec, w.law(), p), 1e-9)
                    << adjrisk::to_string(spec) << " p=" << p;
            }
        }
    }
}
