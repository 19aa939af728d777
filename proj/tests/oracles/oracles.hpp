#pragma once

// Brute-force reference implementations. They share no code with the
// library and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

struct Mass {
    double x;
    double p;
};

using Law = std::vector<Mass>;

inline double cdf(const Law& law, double t) {
    double s = 0.0;
    for (const Mass& m : law) {
        if (m.x <= t) {
            s += m.p;
        }
    }
    return s;
}

inline std::vector<double> support(const Law& law) {
    std::vector<double> xs;
    for (const Mass& m : law) {
        xs.push_back(m.x);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// inf{x : F(x) >= p} by scanning every support point.
inline double var(const Law& law, double p) {
    const std::vector<double> xs = support(law);
    for (double x : xs) {
        if (cdf(law, x) >= p - 1e-12) {
            return x;
        }
    }
    return xs.back();
}

inline double mean(const Law& law) {
    double s = 0.0;
    for (const Mass& m : law) {
        s += m.p * m.x;
    }
    return s;
}

// VaR_p + E[(X - VaR_p)^+] / (1 - p).
inline double es(const Law& law, double p) {
    const std::vector<double> xs = support(law);
    if (p >= 1.0) {
        return xs.back();
    }
    const double v = var(law, p);
    double excess = 0.0;
    for (const Mass& m : law) {
        excess += m.p * std::max(m.x - v, 0.0);
    }
    return v + excess / (1.0 - p);
}

// Midpoint rule for (1/(1-p)) * integral_p^1 VaR_u du.
inline double es_riemann(const Law& law, double p, int n = 200000) {
    const double h = (1.0 - p) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        s += var(law, p + (i + 0.5) * h);
    }
    return s / n;
}

// Average quantile on [a1, a2] via the tail-integral difference.
inline double rvar(const Law& law, double a1, double a2) {
    if (a1 == a2) {
        return var(law, a1);
    }
    return ((1.0 - a1) * es(law, a1) - (1.0 - a2) * es(law, a2)) / (a2 - a1);
}

inline double expectile_residual(const Law& law, double q, double e) {
    double s = 0.0;
    for (const Mass& m : law) {
        s += m.x > e ? q * m.p * (m.x - e) : -(1.0 - q) * m.p * (e - m.x);
    }
    return s;
}

// Plain bisection on the defining equation.
inline double expectile(const Law& law, double q) {
    const std::vector<double> xs = support(law);
    double lo = xs.front();
    double hi = xs.back();
    if (q <= 0.0) {
        return lo;
    }
    if (q >= 1.0) {
        return hi;
    }
    for (int i = 0; i < 300 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        (expectile_residual(law, q, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Midpoint rule for (1/(1-p)) * integral_p^1 ES_u du.
inline double conditional_es(const Law& law, double p, int n = 20000) {
    if (p >= 1.0) {
        return support(law).back();
    }
    const double h = (1.0 - p) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        s += es(law, p + (i + 0.5) * h);
    }
    return s / n;
}

// The k-th smallest sample point with k = floor(n * num / den) + 1, computed
// in integers.
inline double var_hat(std::vector<double> pts, std::uint64_t num, std::uint64_t den) {
    std::sort(pts.begin(), pts.end());
    const std::uint64_t n = pts.size();
    const std::uint64_t k = std::min<std::uint64_t>(n * num / den + 1, n);
    return pts[k - 1];
}

inline Law empirical(const std::vector<double>& pts) {
    Law law;
    for (double x : pts) {
        law.push_back({x, 1.0 / static_cast<double>(pts.size())});
    }
    return law;
}

// max/min weight ratio <= beta: the extremum of the linear-fractional
// objective sits at a vertex with every unnormalized weight in {1, beta}.
inline double ratio_bounded_extremum(const Law& law, double beta, bool maximize) {
    const std::size_t n = law.size();
    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = (mask >> i & 1U) ? beta : 1.0;
            num += law[i].p * w * law[i].x;
            den += law[i].p * w;
        }
        const double v = num / den;
        best = maximize ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

// Dual expectile by vertex enumeration.
inline double expectile_dual(const Law& law, double q) {
    if (q < 0.5) {
        return ratio_bounded_extremum(law, (1.0 - q) / q, false);
    }
    return ratio_bounded_extremum(law, q / (1.0 - q), true);
}

// sup_p rho(p) - g(p) over a dense uniform grid plus the listed levels.
inline double adjusted_sup(const std::function<double(double)>& rho,
                           const std::function<double(double)>& g,
                           const std::vector<double>& extra_levels, int n = 4000) {
    double best = -std::numeric_limits<double>::infinity();
    auto consider = [&](double p) {
        if (p < 0.0 || p > 1.0) {
            return;
        }
        const double gp = g(p);
        if (std::isinf(gp) && gp > 0) {
            return;
        }
        best = std::max(best, rho(p) - gp);
    };
    for (int i = 0; i <= n; ++i) {
        consider(static_cast<double>(i) / n);
    }
    for (double p : extra_levels) {
        consider(p);
    }
    return best;
}

}  // namespace oracle
