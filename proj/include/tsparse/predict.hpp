#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "tsparse/logspace.hpp"
#include "tsparse/rates.hpp"
#include "tsparse/rational.hpp"

namespace tsparse {

struct ConcentrationInterval {
    std::int64_t k_minus;
    std::int64_t k_plus;
};

struct Prediction {
    std::int64_t n;
    Rational t;
    RateParams params;
    double alpha_hat;
    double delta;
};

inline void require_prediction_valid(std::int64_t n, const RateParams& params) {
    const double np = static_cast<double>(n) * params.p;
    if (!(params.log_b(np) > 1.0))
        throw std::domain_error("prediction outside formula validity: log_b(n*p) <= 1");
}

// Predicted location of the t-sparsity number:
//   2 log_b n + (t-2) log_b log_b(np) - t log_b t + t log_b(2bpe)
//     + 2 log_b(e/2) + 1,
// with the 0 ln 0 = 0 convention at t = 0.
inline double alpha_hat_sparse(std::int64_t n, const Rational& t, const RateParams& params) {
    require_prediction_valid(n, params);
    const double np = static_cast<double>(n) * params.p;
    const double td = t.to_double();
    const double t_log_t = t.is_zero() ? 0.0 : td * params.log_b(td);
    return 2.0 * params.log_b(static_cast<double>(n)) +
           (td - 2.0) * params.log_b(params.log_b(np)) - t_log_t +
           td * params.log_b(2.0 * params.b * params.p * M_E) +
           2.0 * params.log_b(M_E / 2.0) + 1.0;
}

// Predicted location of the t-dependence number (induced maximum degree <= t),
// the comparison quantity; t must be a nonnegative integer.
inline double alpha_dependence(std::int64_t n, std::int64_t t, const RateParams& params) {
    require_prediction_valid(n, params);
    if (t < 0) throw std::domain_error("alpha_dependence requires integer t >= 0");
    const double np = static_cast<double>(n) * params.p;
    const double td = static_cast<double>(t);
    const double t_ln_t = (t == 0) ? 0.0 : td * std::log(td);
    // log_b(t^t / t!^2) via log-gamma
    const double tt_term = (t_ln_t - 2.0 * log_factorial(td)) / params.ln_b;
    return 2.0 * params.log_b(static_cast<double>(n)) +
           (td - 2.0) * params.log_b(params.log_b(np)) + tt_term +
           td * params.log_b(2.0 * params.b * params.p / M_E) +
           2.0 * params.log_b(M_E / 2.0) + 1.0;
}

// Two-point interval [floor(alpha_hat - delta), floor(alpha_hat + delta)].
inline ConcentrationInterval concentration_interval(std::int64_t n, const Rational& t,
                                                    const RateParams& params, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("concentration_interval requires delta > 0");
    const double alpha = alpha_hat_sparse(n, t, params);
    return ConcentrationInterval{
        static_cast<std::int64_t>(std::floor(alpha - delta)),
        static_cast<std::int64_t>(std::floor(alpha + delta)),
    };
}

struct RegimeReference {
    double small_t_upper;  // 2 log_b(np): first-order term when t = o(ln np)
    double large_t_value;  // t/p: location when t = omega(ln np)
};

inline RegimeReference regime_reference(std::int64_t n, const Rational& t,
                                        const RateParams& params) {
    const double np = static_cast<double>(n) * params.p;
    if (!(np > 1.0)) throw std::domain_error("regime_reference requires n*p > 1");
    return RegimeReference{2.0 * params.log_b(np), t.to_double() / params.p};
}

}  // namespace tsparse
