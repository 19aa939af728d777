#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace adjrisk {

inline constexpr double kAtomMergeTolerance = 1e-12;
inline constexpr double kProbabilityTolerance = 1e-12;

struct Atom {
    double value;
    double prob;

    friend bool operator==(const Atom&, const Atom&) = default;
};

// Finitely supported law of a loss. Atoms are sorted, merged and
// immutable after construction.
class DiscreteDistribution {
public:
    // Throws std::invalid_argument on empty input, non-finite values,
    // non-positive probabilities or a total mass away from 1.
    explicit DiscreteDistribution(std::vector<Atom> atoms);

    static DiscreteDistribution point_mass(double value);
    // Equal weights 1/n on each value (duplicates merged).
    static DiscreteDistribution uniform(std::span<const double> values);

    [[nodiscard]] std::span<const Atom> atoms() const noexcept { return atoms_; }
    [[nodiscard]] std::size_t size() const noexcept { return atoms_.size(); }
    [[nodiscard]] const Atom& operator[](std::size_t i) const { return atoms_.at(i); }

    // Cumulative probability through atom i; the last entry is exactly 1.
    [[nodiscard]] std::span<const double> cumulative() const noexcept { return cum_; }

    [[nodiscard]] double min_value() const noexcept { return atoms_.front().value; }
    [[nodiscard]] double max_value() const noexcept { return atoms_.back().value; }
    [[nodiscard]] double mean() const noexcept;

    friend bool operator==(const DiscreteDistribution& a, const DiscreteDistribution& b) {
        return a.atoms_ == b.atoms_;
    }

private:
    std::vector<Atom> atoms_;
    std::vector<double> cum_;
};

// Raw data window of losses, e.g. negative daily log-returns.
class SampleWindow {
public:
    // Throws std::invalid_argument when empty or containing non-finite points.
    explicit SampleWindow(std::vector<double> points);

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    // Ascending order statistics x_(1) <= ... <= x_(n).
    [[nodiscard]] std::span<const double> sorted() const noexcept { return sorted_; }
    // 1-based order statistic.
    [[nodiscard]] double order_statistic(std::size_t i) const;
    [[nodiscard]] const DiscreteDistribution& law() const noexcept { return law_; }

private:
    std::vector<double> points_;
    std::vector<double> sorted_;
    DiscreteDistribution law_;
};

// Left-continuous quantile inf{y | P(X <= y) >= p}; p = 0 gives the minimum.
double quantile(const DiscreteDistribution& d, double p);

DiscreteDistribution independent_average(const DiscreteDistribution& d1,
                                         const DiscreteDistribution& d2);
// Law of lambda * X + m, lambda >= 0.
DiscreteDistribution scale_shift(const DiscreteDistribution& d, double lambda, double m);
DiscreteDistribution max_with_zero(const DiscreteDistribution& d);
DiscreteDistribution empirical_law(const SampleWindow& w);

// Law of F1^{-1}(U) + F2^{-1}(U) for a common uniform U.
DiscreteDistribution comonotone_sum(const DiscreteDistribution& d1,
                                    const DiscreteDistribution& d2);

// True when quantile(a, p) <= quantile(b, p) for every p.
bool first_order_dominated(const DiscreteDistribution& a, const DiscreteDistribution& b);

}  // namespace adjrisk
