#include "adjrisk/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace adjrisk {
namespace {

void require_level(double p, const char* who) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error(std::string(who) + ": level must lie in [0,1]");
    }
}

void require_open_level(double p, const char* who) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error(std::string(who) + ": level must lie in (0,1)");
    }
}

// Integral of the quantile function over [lo, hi] together with the
// total length actually covered (equal to hi - lo up to rounding).
struct TailIntegral {
    double integral = 0.0;
    double length = 0.0;
};

TailIntegral integrate_quantile(const DiscreteDistribution& d, double lo, double hi) {
    TailIntegral out;
    auto cum = d.cumulative();
    double prev = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double a = std::max(prev, lo);
        const double b = std::min(cum[k], hi);
        if (b > a) {
            out.integral += d.atoms()[k].value * (b - a);
            out.length += b - a;
        }
        prev = cum[k];
        if (prev >= hi) {
            break;
        }
    }
    return out;
}

// 0-based index floor(n p) guarded against products such as 0.29 * 100
// landing a hair below an integer.
std::size_t floor_np(std::size_t n, double p) {
    const double np = static_cast<double>(n) * p;
    return static_cast<std::size_t>(std::floor(np + 1e-9));
}

}  // namespace

double var(const DiscreteDistribution& d, double p) {
    require_level(p, "var");
    return quantile(d, p);
}

double es(const DiscreteDistribution& d, double p) {
    require_level(p, "es");
    if (p == 1.0) {
        return d.max_value();
    }
    const TailIntegral t = integrate_quantile(d, p, 1.0);
    if (!(t.length > 0.0)) {
        return d.max_value();
    }
    return t.integral / t.length;
}

double rvar(const DiscreteDistribution& d, double a1, double a2) {
    require_level(a1, "rvar");
    require_level(a2, "rvar");
    if (a1 > a2) {
        throw std::invalid_argument("rvar: requires a1 <= a2");
    }
    if (a1 == a2) {
        return var(d, a1);
    }
    const TailIntegral t = integrate_quantile(d, a1, a2);
    if (!(t.length > 0.0)) {
        return var(d, a2);
    }
    return t.integral / t.length;
}

double expectile_residual(const DiscreteDistribution& d, double q, double e) {
    double up = 0.0;
    double down = 0.0;
    for (const Atom& a : d.atoms()) {
        if (a.value > e) {
            up += a.prob * (a.value - e);
        } else {
            down += a.prob * (e - a.value);
        }
    }
    return q * up - (1.0 - q) * down;
}

double expectile(const DiscreteDistribution& d, double q) {
    require_level(q, "expectile");
    if (q == 0.0) {
        return d.min_value();
    }
    if (q == 1.0) {
        return d.max_value();
    }
    const std::size_t n = d.size();
    if (n == 1) {
        return d.min_value();
    }
    // The residual is piecewise linear in e with kinks at the atoms. Bisect
    // over atom indices for the bracketing segment, then solve it exactly.
    std::vector<double> mass(n);
    std::vector<double> moment(n);
    double pm = 0.0;
    double mm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        pm += d.atoms()[i].prob;
        mm += d.atoms()[i].prob * d.atoms()[i].value;
        mass[i] = pm;
        moment[i] = mm;
    }
    const double total_moment = mm;
    const double total_mass = pm;
    auto residual_at_atom = [&](std::size_t k) {
        const double x = d.atoms()[k].value;
        const double up = (total_moment - moment[k]) - x * (total_mass - mass[k]);
        const double down = x * mass[k] - moment[k];
        return q * up - (1.0 - q) * down;
    };
    std::size_t lo = 0;
    std::size_t hi = n - 1;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (residual_at_atom(mid) >= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (residual_at_atom(lo) <= 0.0) {
        return d.atoms()[lo].value;
    }
    if (residual_at_atom(hi) >= 0.0) {
        return d.atoms()[hi].value;
    }
    const double below = mass[lo];
    const double num = q * (total_moment - moment[lo]) + (1.0 - q) * moment[lo];
    const double den = q * (total_mass - below) + (1.0 - q) * below;
    const double e = num / den;
    return std::clamp(e, d.atoms()[lo].value, d.atoms()[hi].value);
}

double conditional_es(const DiscreteDistribution& d, double p) {
    require_level(p, "conditional_es");
    if (p == 1.0) {
        return d.max_value();
    }
    // On the quantile segment (F_{k-1}, F_k] with value x_k,
    // ES_u = x_k + C_k / (1 - u), C_k = sum_{i>k} p_i (x_i - x_k),
    // which integrates in closed form.
    const std::size_t n = d.size();
    auto cum = d.cumulative();
    std::vector<double> tail_mass(n + 1, 0.0);
    std::vector<double> tail_moment(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        tail_mass[i] = tail_mass[i + 1] + d.atoms()[i].prob;
        tail_moment[i] = tail_moment[i + 1] + d.atoms()[i].prob * d.atoms()[i].value;
    }
    double integral = 0.0;
    double length = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = std::max(prev, p);
        const double b = cum[k];
        prev = cum[k];
        if (!(b > a)) {
            continue;
        }
        const double x = d.atoms()[k].value;
        integral += x * (b - a);
        length += b - a;
        if (k + 1 < n) {
            const double c = tail_moment[k + 1] - x * tail_mass[k + 1];
            integral += c * std::log((1.0 - a) / (1.0 - b));
        }
    }
    if (!(length > 0.0)) {
        return d.max_value();
    }
    return integral / length;
}

double var_hat(const SampleWindow& w, double p) {
    require_open_level(p, "var_hat");
    const std::size_t n = w.size();
    const std::size_t k = std::min(floor_np(n, p) + 1, n);
    return w.order_statistic(k);
}

double es_hat(const SampleWindow& w, double p) {
    require_open_level(p, "es_hat");
    const std::size_t n = w.size();
    const double np = static_cast<double>(n) * p;
    const std::size_t k = std::min(floor_np(n, p), n - 1);
    auto x = w.sorted();
    double tail = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
        tail += x[i];
    }
    const double head_weight = std::max(static_cast<double>(k + 1) - np, 0.0);
    const double denom = static_cast<double>(n) - np;
    if (!(denom > 0.0)) {
        return x[n - 1];
    }
    return (tail + x[k] * head_weight) / denom;
}

double rvar_hat(const SampleWindow& w, double a1, double a2, std::size_t grid_points) {
    require_open_level(a1, "rvar_hat");
    require_open_level(a2, "rvar_hat");
    if (grid_points == 0) {
        throw std::invalid_argument("rvar_hat: grid_points must be positive");
    }
    if (grid_points == 1) {
        if (a1 > a2) {
            throw std::invalid_argument("rvar_hat: requires a1 < a2");
        }
        return var_hat(w, a1);
    }
    if (!(a1 < a2)) {
        throw std::invalid_argument("rvar_hat: requires a1 < a2");
    }
    const double g = static_cast<double>(grid_points - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double u = i + 1 == grid_points ? a2 : a1 + static_cast<double>(i) / g * (a2 - a1);
        sum += var_hat(w, u);
    }
    return sum / static_cast<double>(grid_points);
}

double expectile_hat(const SampleWindow& w, double q) {
    require_open_level(q, "expectile_hat");
    return expectile(w.law(), q);
}

}  // namespace adjrisk
