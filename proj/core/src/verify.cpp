#include "adjrisk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adjrisk {
namespace {

ExtReal rho(const CounterexampleFixture& f, const DiscreteDistribution& d, const LevelGrid& grid) {
    return adjusted_value(f.spec, f.g, d, grid).value;
}

// Finite-or-infinite sum a + b with +inf absorbing finite values.
ExtReal ext_add(const ExtReal& a, const ExtReal& b) {
    if (a.is_finite() && b.is_finite()) {
        return ExtReal(a.value() + b.value());
    }
    if (a.is_neg_inf() || b.is_neg_inf()) {
        return ExtReal::neg_inf();
    }
    return ExtReal::pos_inf();
}

ExtReal ext_half(const ExtReal& a) {
    return a.is_finite() ? ExtReal(a.value() / 2.0) : a;
}

bool close(const ExtReal& a, double b) {
    return a.is_finite() && std::abs(a.value() - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

std::string lambda_text(double lambda) {
    return to_string(ExtReal(lambda));
}

}  // namespace

FixtureReport run_fixture(const CounterexampleFixture& f, const LevelGrid& grid) {
    FixtureReport r;
    r.name = f.name;
    const DiscreteDistribution& x = f.x;
    const DiscreteDistribution y = f.y.value_or(f.x);
    bool greater = true;
    switch (f.property) {
        case FixtureProperty::Convexity:
            r.claim = "rho((X+Y)/2) > rho(X)/2 + rho(Y)/2";
            r.lhs = rho(f, independent_average(x, y), grid);
            r.rhs = ext_add(ext_half(rho(f, x, grid)), ext_half(rho(f, y, grid)));
            break;
        case FixtureProperty::PositiveHomogeneity: {
            const std::string l = lambda_text(f.lambda);
            r.claim = l + " rho(X) < rho(" + l + "X)";
            const ExtReal base = rho(f, x, grid);
            r.lhs = base.is_finite() ? ExtReal(f.lambda * base.value()) : base;
            r.rhs = rho(f, scale_shift(x, f.lambda, 0.0), grid);
            greater = false;
            break;
        }
        case FixtureProperty::Subadditivity:
            r.claim = "rho(X+Y) > rho(X) + rho(Y)";
            r.lhs = rho(f, comonotone_sum(x, y), grid);
            r.rhs = ext_add(rho(f, x, grid), rho(f, y, grid));
            break;
        case FixtureProperty::SurplusInvariance:
            r.claim = "rho(X) < rho(max{X,0})";
            r.lhs = rho(f, x, grid);
            r.rhs = rho(f, max_with_zero(x), grid);
            greater = false;
            break;
    }
    r.pass = greater ? r.lhs > r.rhs : r.lhs < r.rhs;
    if (!r.pass) {
        r.detail = "strict inequality does not hold";
    }
    if (f.expected_lhs && !close(r.lhs, *f.expected_lhs)) {
        r.pass = false;
        r.detail = "lhs differs from expected " + to_string(ExtReal(*f.expected_lhs));
    }
    if (f.expected_rhs && !close(r.rhs, *f.expected_rhs)) {
        r.pass = false;
        r.detail = "rhs differs from expected " + to_string(ExtReal(*f.expected_rhs));
    }
    return r;
}

std::vector<CounterexampleFixture> counterexample_fixtures() {
    const double eps = 0.01;
    const double c = 1.0;
    const ExtReal inf = ExtReal::pos_inf();
    std::vector<CounterexampleFixture> out;

    // g = (c + eps) on [2/3, 1]: closed at 2/3, so not left-continuous.
    const TargetRiskProfile g_convex = TargetRiskProfile::piecewise(
        {0.0, 2.0 / 3.0, 1.0}, {ExtReal(0.0), ExtReal(c + eps), ExtReal(c + eps)},
        {ExtReal(0.0), ExtReal(c + eps)});
    const DiscreteDistribution three_point({{-c / 2.0, 1.0 / 3.0}, {0.0, 1.0 / 3.0}, {c, 1.0 / 3.0}});
    out.push_back({"scrm_convexity", RiskFamilySpec::scrm(0.7), g_convex,
                   FixtureProperty::Convexity, three_point, std::nullopt, 2.0, 0.25 * c, 0.0});

    const double two_thirds = 2.0 / 3.0;
    const TargetRiskProfile g_ph = TargetRiskProfile::left_continuous(
        std::vector<double>{0.0, two_thirds, 1.0},
        std::vector<ExtReal>{ExtReal(0.0), ExtReal(2.0 - eps), inf});
    out.push_back({"aerm_positive_homogeneity", RiskFamilySpec::expectile(), g_ph,
                   FixtureProperty::PositiveHomogeneity,
                   DiscreteDistribution({{-2.0, 0.5}, {4.0, 0.5}}), std::nullopt, 2.0, 2.0 * eps,
                   2.0 + eps});

    const double q = 0.4;
    const TargetRiskProfile g_sub = TargetRiskProfile::piecewise(
        {0.0, q - eps, 1.0}, {ExtReal(0.0), ExtReal(1.5 * c), ExtReal(1.5 * c)},
        {ExtReal(0.0), ExtReal(1.5 * c)});
    const DiscreteDistribution two_point({{0.0, q - eps}, {c, 1.0 - (q - eps)}});
    out.push_back({"scrm_subadditivity", RiskFamilySpec::scrm(0.5), g_sub,
                   FixtureProperty::Subadditivity, two_point, std::nullopt, 2.0, 0.5 * c, 0.0});

    const double s = 0.2;
    const double mid = (q + s) / 2.0;
    const TargetRiskProfile g_surplus = TargetRiskProfile::left_continuous(
        std::vector<double>{0.0, mid, 1.0}, std::vector<ExtReal>{ExtReal(0.0), ExtReal(0.0), inf});
    out.push_back({"scrm_surplus_invariance", RiskFamilySpec::scrm(0.2), g_surplus,
                   FixtureProperty::SurplusInvariance,
                   DiscreteDistribution({{-c, q}, {c, 1.0 - q}}), std::nullopt, 2.0, 5.0 / 7.0,
                   6.0 / 7.0});

    const TargetRiskProfile g_half = TargetRiskProfile::left_continuous(
        std::vector<double>{0.0, 0.5, 1.0}, std::vector<ExtReal>{ExtReal(0.0), ExtReal(0.0), inf});
    out.push_back({"aerm_surplus_invariance", RiskFamilySpec::expectile(), g_half,
                   FixtureProperty::SurplusInvariance,
                   DiscreteDistribution({{-2.0 * c, 0.5}, {2.0 * c, 0.5}}), std::nullopt, 2.0, 0.0,
                   c});

    out.push_back({"crm_convexity", RiskFamilySpec::crm({4.0 / 9.0, 2.0 / 3.0}), g_convex,
                   FixtureProperty::Convexity, three_point, std::nullopt, 2.0, 0.25 * c, 0.0});

    out.push_back({"crm_subadditivity", RiskFamilySpec::crm({q - eps, 0.5}), g_sub,
                   FixtureProperty::Subadditivity, two_point, std::nullopt, 2.0, 0.5 * c, 0.0});
    return out;
}

std::optional<PhWitness> ph_violation_search(const RiskFamilySpec& spec,
                                             const TargetRiskProfile& g,
                                             std::span<const DiscreteDistribution> candidates,
                                             std::span<const double> lambdas, double rel_tol,
                                             const LevelGrid& grid) {
    if (!g.in_g0()) {
        throw std::invalid_argument("ph_violation_search: requires g(0) = 0");
    }
    for (double lambda : lambdas) {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw std::invalid_argument("ph_violation_search: scale factors must be positive");
        }
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const ExtReal base = adjusted_value(spec, g, candidates[i], grid).value;
        for (double lambda : lambdas) {
            const ExtReal scaled =
                adjusted_value(spec, g, scale_shift(candidates[i], lambda, 0.0), grid).value;
            const ExtReal product = base.is_finite() ? ExtReal(lambda * base.value()) : base;
            if (!scaled.is_finite() || !product.is_finite()) {
                if (!(scaled == product)) {
                    return PhWitness{i, lambda, scaled, product, HUGE_VAL};
                }
                continue;
            }
            const double gap = std::abs(scaled.value() - product.value());
            if (gap > rel_tol * std::max(1.0, std::abs(product.value()))) {
                return PhWitness{i, lambda, scaled, product, gap};
            }
        }
    }
    return std::nullopt;
}

std::vector<DiscreteDistribution> guided_ph_candidates() {
    constexpr std::size_t kAtoms = 200;
    std::vector<double> uniform(kAtoms);
    std::vector<double> skewed(kAtoms);
    for (std::size_t i = 0; i < kAtoms; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(kAtoms);
        uniform[i] = u - 0.5;
        skewed[i] = -std::log1p(-u) - 1.0;
    }
    const DiscreteDistribution base_uniform = DiscreteDistribution::uniform(uniform);
    const DiscreteDistribution base_skewed = DiscreteDistribution::uniform(skewed);
    std::vector<DiscreteDistribution> out;
    for (double scale : {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}) {
        out.push_back(scale_shift(base_uniform, scale, 0.0));
        out.push_back(scale_shift(base_skewed, scale, 0.0));
    }
    return out;
}

namespace {

DiscreteDistribution joint_marginal(const JointLaw& j, int which) {
    if (j.x.size() != j.y.size() || j.x.size() != j.prob.size()) {
        throw std::invalid_argument("JointLaw: x, y and prob must have equal length");
    }
    std::vector<Atom> atoms;
    atoms.reserve(j.x.size());
    for (std::size_t i = 0; i < j.x.size(); ++i) {
        const double v = which == 0 ? j.x[i] : which == 1 ? j.y[i] : j.x[i] + j.y[i];
        atoms.push_back({v, j.prob[i]});
    }
    return DiscreteDistribution(std::move(atoms));
}

}  // namespace

DiscreteDistribution JointLaw::law_x() const {
    return joint_marginal(*this, 0);
}

DiscreteDistribution JointLaw::law_y() const {
    return joint_marginal(*this, 1);
}

DiscreteDistribution JointLaw::law_sum() const {
    return joint_marginal(*this, 2);
}

ExtReal subadditivity_excess(const RiskFamilySpec& spec, const TargetRiskProfile& g,
                             const JointLaw& joint, const LevelGrid& grid) {
    const ExtReal sum = adjusted_value(spec, g, joint.law_sum(), grid).value;
    const ExtReal parts = ext_add(adjusted_value(spec, g, joint.law_x(), grid).value,
                                  adjusted_value(spec, g, joint.law_y(), grid).value);
    if (parts.is_pos_inf()) {
        return ExtReal::neg_inf();
    }
    return ext_sub(sum, parts);
}

}  // namespace adjrisk
