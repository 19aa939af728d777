#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "adjrisk/adjrisk.hpp"
#include "oracles.hpp"

namespace testing_support {

// Seed for randomized suites: ADJRISK_TEST_SEED when set, else fixed.
inline std::uint64_t suite_seed() {
    if (const char* s = std::getenv("ADJRISK_TEST_SEED")) {
        return std::stoull(s);
    }
    return 20240208;
}

inline oracle::Law to_oracle(const adjrisk::DiscreteDistribution& d) {
    oracle::Law law;
    for (const adjrisk::Atom& a : d.atoms()) {
        law.push_back({a.value, a.prob});
    }
    return law;
}

// Up to max_atoms atoms, values on a 0.25 lattice in [-lim, lim] or
// continuous, random positive weights.
inline adjrisk::DiscreteDistribution random_law(std::mt19937_64& rng, std::size_t max_atoms = 6,
                                                double lim = 5.0, bool lattice = false) {
    std::uniform_int_distribution<std::size_t> count(1, max_atoms);
    std::uniform_real_distribution<double> value(-lim, lim);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    const std::size_t n = count(rng);
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) {
        x = weight(rng);
        total += x;
    }
    std::vector<adjrisk::Atom> atoms;
    for (std::size_t i = 0; i < n; ++i) {
        double v = value(rng);
        if (lattice) {
            v = std::round(v * 4.0) / 4.0;
        }
        atoms.push_back({v, w[i] / total});
    }
    return adjrisk::DiscreteDistribution(std::move(atoms));
}

// Step profile: g = 0 on [0, l1], increasing finite steps, +inf above the
// last level.
inline adjrisk::TargetRiskProfile random_step_profile(std::mt19937_64& rng,
                                                      std::size_t max_steps = 3) {
    std::uniform_int_distribution<std::size_t> count(1, max_steps);
    std::uniform_real_distribution<double> level(0.05, 0.98);
    std::uniform_real_distribution<double> bump(0.0, 1.0);
    const std::size_t n = count(rng) + 1;
    std::vector<double> levels(n);
    for (double& l : levels) {
        l = std::round(level(rng) * 1000.0) / 1000.0;
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<double> values(levels.size());
    double acc = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        acc += bump(rng);
        values[i] = acc;
    }
    return adjrisk::step_profile(levels, values);
}

inline std::vector<double> random_window(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> z(0.0, 0.01);
    std::vector<double> pts(n);
    for (double& x : pts) {
        x = z(rng);
    }
    return pts;
}

}  // namespace testing_support
