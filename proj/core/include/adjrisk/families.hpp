#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "adjrisk/distributions.hpp"

namespace adjrisk {

struct EsFamily {
    friend bool operator==(const EsFamily&, const EsFamily&) = default;
};
struct VarFamily {
    friend bool operator==(const VarFamily&, const VarFamily&) = default;
};
// VaR on [0, r], ES on (r, 1].
struct ScrmSplit {
    double r;
    friend bool operator==(const ScrmSplit&, const ScrmSplit&) = default;
};
// Sliding segments: RVaR_{p, p_i} on (p_{i-1}, p_i], ES above p_n.
struct CrmLevels {
    std::vector<double> levels;
    friend bool operator==(const CrmLevels&, const CrmLevels&) = default;
};
// Fixed segments: RVaR_{p_{i-1}, p_i} on (p_{i-1}, p_i], ES above p_n.
struct FcrmLevels {
    std::vector<double> levels;
    friend bool operator==(const FcrmLevels&, const FcrmLevels&) = default;
};
struct ExpectileFamily {
    friend bool operator==(const ExpectileFamily&, const ExpectileFamily&) = default;
};
struct ConditionalEsFamily {
    friend bool operator==(const ConditionalEsFamily&, const ConditionalEsFamily&) = default;
};
// ES on [0, split], VaR on (split, 1]. Not ordered in general.
struct SolvencyMix {
    double split;
    friend bool operator==(const SolvencyMix&, const SolvencyMix&) = default;
};

using FamilyVariant = std::variant<EsFamily, VarFamily, ScrmSplit, CrmLevels, FcrmLevels,
                                   ExpectileFamily, ConditionalEsFamily, SolvencyMix>;

// Declarative description of a family {rho_p}. Validated on construction.
class RiskFamilySpec {
public:
    RiskFamilySpec(FamilyVariant v);  // NOLINT(google-explicit-constructor)
    template <class Alt>
        requires std::is_constructible_v<FamilyVariant, Alt>
    RiskFamilySpec(Alt alt)  // NOLINT(google-explicit-constructor)
        : RiskFamilySpec(FamilyVariant(std::move(alt))) {}

    static RiskFamilySpec es() { return EsFamily{}; }
    static RiskFamilySpec var() { return VarFamily{}; }
    static RiskFamilySpec scrm(double r) { return ScrmSplit{r}; }
    static RiskFamilySpec crm(std::vector<double> levels) { return CrmLevels{std::move(levels)}; }
    static RiskFamilySpec fcrm(std::vector<double> levels) { return FcrmLevels{std::move(levels)}; }
    static RiskFamilySpec expectile() { return ExpectileFamily{}; }
    static RiskFamilySpec conditional_es() { return ConditionalEsFamily{}; }
    static RiskFamilySpec solvency(double split) { return SolvencyMix{split}; }

    [[nodiscard]] const FamilyVariant& variant() const noexcept { return v_; }
    // Interior levels where the family switches formula.
    [[nodiscard]] std::vector<double> segment_endpoints() const;
    // True for every variant that is ordered in p on all laws.
    [[nodiscard]] bool ordered_by_construction() const noexcept;

    friend bool operator==(const RiskFamilySpec&, const RiskFamilySpec&) = default;

private:
    FamilyVariant v_;
};

// Round-trips through parse_family: "es", "var", "scrm:0.95",
// "crm:0.5,0.9", "fcrm:0.5,0.9", "expectile", "ces", "solvency:0.975".
std::string to_string(const RiskFamilySpec& spec);
RiskFamilySpec parse_family(std::string_view text);

double rho_p(const RiskFamilySpec& spec, const DiscreteDistribution& d, double p);
// Window estimator; p in {0, 1} and the conditional-ES family fall back
// to exact evaluation on the empirical law.
double rho_p_hat(const RiskFamilySpec& spec, const SampleWindow& w, double p);

struct OrderViolation {
    double p;
    double q;
    double rho_p;
    double rho_q;
};

struct OrderCheck {
    bool ordered = true;
    std::optional<OrderViolation> first_violation;
};

OrderCheck check_ordered(const RiskFamilySpec& spec, const DiscreteDistribution& d,
                         std::span<const double> grid);

}  // namespace adjrisk
