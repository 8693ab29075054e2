#pragma once

#include <cmath>
#include <limits>

namespace tsparse {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

// ln(e^a + e^b), safe for -inf arguments.
inline double log_add_exp(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    return (a < b) ? b + std::log1p(std::exp(a - b))
                   : a + std::log1p(std::exp(b - a));
}

// ln C(n, k) via log-gamma; n need not be small.
inline double log_choose(double n, double k) {
    if (k < 0 || k > n) return neg_inf;
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

inline double log_factorial(double n) { return std::lgamma(n + 1); }

}  // namespace tsparse
