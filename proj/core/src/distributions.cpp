#include "adjrisk/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace adjrisk {
namespace {

std::vector<Atom> normalize_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) {
        throw std::invalid_argument("DiscreteDistribution: no atoms");
    }
    for (const Atom& a : atoms) {
        if (!std::isfinite(a.value)) {
            throw std::invalid_argument("DiscreteDistribution: non-finite atom value");
        }
        if (!(a.prob > 0.0) || !std::isfinite(a.prob)) {
            throw std::invalid_argument("DiscreteDistribution: atom probability must be positive, got " +
                                        std::to_string(a.prob));
        }
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (!merged.empty() && a.value - merged.back().value <= kAtomMergeTolerance) {
            merged.back().prob += a.prob;
        } else {
            merged.push_back(a);
        }
    }
    double total = 0.0;
    for (const Atom& a : merged) {
        total += a.prob;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
        throw std::invalid_argument("DiscreteDistribution: probabilities sum to " +
                                    std::to_string(total) + ", expected 1");
    }
    return merged;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms)
    : atoms_(normalize_atoms(std::move(atoms))) {
    cum_.resize(atoms_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        run += atoms_[i].prob;
        cum_[i] = std::min(run, 1.0);
    }
    cum_.back() = 1.0;
}

DiscreteDistribution DiscreteDistribution::point_mass(double value) {
    return DiscreteDistribution({{value, 1.0}});
}

DiscreteDistribution DiscreteDistribution::uniform(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("DiscreteDistribution::uniform: no values");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<Atom> atoms;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] - sorted[i] <= kAtomMergeTolerance) {
            ++j;
        }
        atoms.push_back({sorted[i], static_cast<double>(j - i) / n});
        i = j;
    }
    return DiscreteDistribution(std::move(atoms));
}

double DiscreteDistribution::mean() const noexcept {
    double m = 0.0;
    for (const Atom& a : atoms_) {
        m += a.value * a.prob;
    }
    return m;
}

SampleWindow::SampleWindow(std::vector<double> points)
    : points_(std::move(points)),
      sorted_(points_),
      law_(DiscreteDistribution::point_mass(0.0)) {
    if (points_.empty()) {
        throw std::invalid_argument("SampleWindow: window must contain at least one point");
    }
    for (double x : points_) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("SampleWindow: non-finite data point");
        }
    }
    std::sort(sorted_.begin(), sorted_.end());
    law_ = DiscreteDistribution::uniform(sorted_);
}

double SampleWindow::order_statistic(std::size_t i) const {
    if (i < 1 || i > sorted_.size()) {
        throw std::out_of_range("SampleWindow::order_statistic: index out of range");
    }
    return sorted_[i - 1];
}

double quantile(const DiscreteDistribution& d, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("quantile: level must lie in [0,1]");
    }
    if (p == 0.0) {
        return d.min_value();
    }
    auto cum = d.cumulative();
    // Cumulative sums carry rounding noise of order 1e-16 per atom.
    auto it = std::lower_bound(cum.begin(), cum.end(), p - kProbabilityTolerance);
    return d.atoms()[static_cast<std::size_t>(it - cum.begin())].value;
}

DiscreteDistribution independent_average(const DiscreteDistribution& d1,
                                         const DiscreteDistribution& d2) {
    std::vector<Atom> atoms;
    atoms.reserve(d1.size() * d2.size());
    for (const Atom& a : d1.atoms()) {
        for (const Atom& b : d2.atoms()) {
            atoms.push_back({(a.value + b.value) / 2.0, a.prob * b.prob});
        }
    }
    return DiscreteDistribution(std::move(atoms));
}

DiscreteDistribution scale_shift(const DiscreteDistribution& d, double lambda, double m) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda) || !std::isfinite(m)) {
        throw std::invalid_argument("scale_shift: lambda must be finite and >= 0, m finite");
    }
    if (lambda == 0.0) {
        return DiscreteDistribution::point_mass(m);
    }
    std::vector<Atom> atoms(d.atoms().begin(), d.atoms().end());
    for (Atom& a : atoms) {
        a.value = lambda * a.value + m;
    }
    return DiscreteDistribution(std::move(atoms));
}

DiscreteDistribution max_with_zero(const DiscreteDistribution& d) {
    std::vector<Atom> atoms(d.atoms().begin(), d.atoms().end());
    for (Atom& a : atoms) {
        a.value = std::max(a.value, 0.0);
    }
    return DiscreteDistribution(std::move(atoms));
}

DiscreteDistribution empirical_law(const SampleWindow& w) {
    return w.law();
}

DiscreteDistribution comonotone_sum(const DiscreteDistribution& d1,
                                    const DiscreteDistribution& d2) {
    auto c1 = d1.cumulative();
    auto c2 = d2.cumulative();
    std::vector<Atom> atoms;
    std::size_t i = 0;
    std::size_t j = 0;
    double prev = 0.0;
    while (i < d1.size() && j < d2.size()) {
        const double next = std::min(c1[i], c2[j]);
        if (next > prev) {
            atoms.push_back({d1.atoms()[i].value + d2.atoms()[j].value, next - prev});
            prev = next;
        }
        if (c1[i] <= next) {
            ++i;
        }
        if (c2[j] <= next) {
            ++j;
        }
    }
    return DiscreteDistribution(std::move(atoms));
}

bool first_order_dominated(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    // Both quantile functions are constant between cumulative breakpoints,
    // so comparing at every breakpoint of either law suffices.
    std::vector<double> levels(a.cumulative().begin(), a.cumulative().end());
    levels.insert(levels.end(), b.cumulative().begin(), b.cumulative().end());
    levels.push_back(0.0);
    for (double p : levels) {
        if (quantile(a, p) > quantile(b, p)) {
            return false;
        }
    }
    return a.max_value() <= b.max_value();
}

}  // namespace adjrisk
