#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "tsparse/logspace.hpp"
#include "tsparse/rates.hpp"
#include "tsparse/rational.hpp"

namespace tsparse {

struct MomentReport {
    std::int64_t n;
    std::int64_t k;
    Rational t;
    RateParams params;
    double log_E_exact;
    std::optional<double> log_E_upper;
    std::optional<double> log_E_lower;
};

enum class MomentMode { exact, bounds };

// ln E(number of t-sparse k-sets) = ln C(n,k) + ln Pr(one k-set is t-sparse).
// In bounds mode the Lemma-3 exponents are attached when its hypotheses
// 1 <= t <= p(k-1) hold, and omitted otherwise.
inline MomentReport log_expected_count(std::int64_t n, std::int64_t k, const Rational& t,
                                       const RateParams& params, MomentMode mode,
                                       double c0 = sparse_prob_c0) {
    if (k < 2 || k > n)
        throw std::domain_error("log_expected_count requires 2 <= k <= n");
    MomentReport report{n, k, t, params, 0.0, std::nullopt, std::nullopt};
    const double comb = log_choose(static_cast<double>(n), static_cast<double>(k));
    report.log_E_exact = comb + sparse_prob(k, t, params, SparseProbMode::exact);
    if (mode == MomentMode::bounds) {
        try {
            report.log_E_upper = comb + sparse_prob(k, t, params, SparseProbMode::upper);
            report.log_E_lower = comb + sparse_prob(k, t, params, SparseProbMode::lower, c0);
        } catch (const std::domain_error&) {
            report.log_E_upper.reset();
            report.log_E_lower.reset();
        }
    }
    return report;
}

// ln s_ell, the overlap-ell term controlling the small-overlap part of the
// pair correlation sum: s_ell = [C(k,ell)]^2 ell! / n^ell * b^C(ell,2).
inline double s_ell_log(std::int64_t n, std::int64_t k, std::int64_t ell,
                        const RateParams& params) {
    if (ell < 1 || ell > k)
        throw std::domain_error("s_ell requires 1 <= ell <= k");
    const double le = static_cast<double>(ell);
    return 2.0 * log_choose(static_cast<double>(k), le) + log_factorial(le) -
           le * std::log(static_cast<double>(n)) +
           static_cast<double>(ell * (ell - 1) / 2) * params.ln_b;
}

// Bookkeeping for a pair of k-sets overlapping on ell vertices.
struct OverlapScenario {
    std::int64_t k;
    std::int64_t ell;
    double eps;
    double xi;
    double lambda1;             // eps k / 2, upper edge of the small-overlap regime
    double lambda2;             // (1-eps) k, lower edge of the large-overlap regime
    double psi;                 // solves Lambda*(psi p) = (1-xi) ln b
    std::int64_t mu;            // max{0, floor(tk/2 - cross_pairs psi p)}
    bool p1_sum_empty;          // tk/2 < cross_pairs psi p: the p1 split is vacuous
    std::int64_t cross_pairs;   // (k-ell)(k+ell-1)/2, slots of e'(A,B)
    std::int64_t overlap_pairs; // C(ell,2), slots of e(A cap B)
    double x_I;                 // kt / (ell(ell-1))
    double x_AB;                // kt / (k(k-1) - ell(ell-1))

    static OverlapScenario make(std::int64_t k, std::int64_t ell, const Rational& t,
                                const RateParams& params, double eps, double xi) {
        if (ell < 1 || ell >= k)
            throw std::domain_error("OverlapScenario requires 1 <= ell <= k-1");
        if (!(eps > 0.0 && eps < 0.25))
            throw std::domain_error("OverlapScenario requires 0 < eps < 1/4");
        if (!(xi > 0.0 && xi < 1.0))
            throw std::domain_error("OverlapScenario requires 0 < xi < 1");
        OverlapScenario s;
        s.k = k;
        s.ell = ell;
        s.eps = eps;
        s.xi = xi;
        s.lambda1 = eps * static_cast<double>(k) / 2.0;
        s.lambda2 = (1.0 - eps) * static_cast<double>(k);
        s.psi = psi_solve(params, xi);
        s.cross_pairs = (k - ell) * (k + ell - 1) / 2;
        s.overlap_pairs = ell * (ell - 1) / 2;
        const double tk_half = t.to_double() * static_cast<double>(k) / 2.0;
        const double mu_real = tk_half - static_cast<double>(s.cross_pairs) * s.psi * params.p;
        s.p1_sum_empty = mu_real < 0.0;
        s.mu = s.p1_sum_empty ? 0 : static_cast<std::int64_t>(std::floor(mu_real));
        const double kt = t.to_double() * static_cast<double>(k);
        s.x_I = ell >= 2 ? kt / static_cast<double>(ell * (ell - 1)) : pos_inf;
        s.x_AB = kt / static_cast<double>(k * (k - 1) - ell * (ell - 1));
        return s;
    }
};

// ln upper bound on p1(k,ell) = Pr(both sets t-sparse, overlap edges <= mu):
// exp(-C(ell,2) Lambda*(mu / C(ell,2))).  -inf when the m <= mu split is
// vacuous (the sum is empty).
inline double log_p1_upper(const OverlapScenario& s, const Rational& /*t*/,
                           const RateParams& params) {
    if (!(static_cast<double>(s.ell) >= s.lambda2))
        throw std::domain_error("log_p1_upper requires ell >= lambda2");
    if (s.p1_sum_empty) return neg_inf;
    if (s.overlap_pairs == 0) return 0.0;
    const double x = static_cast<double>(s.mu) / static_cast<double>(s.overlap_pairs);
    if (!(x <= params.p))
        throw std::domain_error("log_p1_upper requires mu <= p*C(ell,2)");
    return -static_cast<double>(s.overlap_pairs) * lambda_star(x, params);
}

// ln upper bound on p2(k,ell) = Pr(both sets t-sparse, overlap edges > mu):
// exp(-C(ell,2) Lambda*(tk/(ell(ell-1))) - cross_pairs (2-2xi) ln b).
inline double log_p2_upper(const OverlapScenario& s, const Rational& t,
                           const RateParams& params) {
    if (!(static_cast<double>(s.ell) >= s.lambda2))
        throw std::domain_error("log_p2_upper requires ell >= lambda2");
    const double tk_half = t.to_double() * static_cast<double>(s.k) / 2.0;
    if (!(tk_half <= params.p * static_cast<double>(s.overlap_pairs)))
        throw std::domain_error("log_p2_upper hypothesis t*k/2 <= p*C(ell,2) violated");
    const double overlap_term =
        s.overlap_pairs == 0 ? 0.0
                             : -static_cast<double>(s.overlap_pairs) * lambda_star(s.x_I, params);
    return overlap_term -
           static_cast<double>(s.cross_pairs) * (2.0 - 2.0 * s.xi) * params.ln_b;
}

// ln upper bound on Pr(Bin(N,p) <= r); the trivial bound 1 when r >= Np.
inline double chernoff_lower_tail_log(double trials, double r, const RateParams& params) {
    if (trials <= 0.0) return 0.0;
    const double x = r / trials;
    if (x >= params.p) return 0.0;
    return -trials * lambda_star(x, params);
}

// Combinatorial ratio C(k,ell) C(n-k,k-ell) / C(n,k): exact (log-gamma) and
// the coarse closed form 2^(2k+1) (k/n)^ell used in the large-deviations
// write-up.  The exact form is what the overlap bounds use; the coarse form
// is kept for comparison.
inline double log_comb_ratio_exact(std::int64_t n, std::int64_t k, std::int64_t ell) {
    return log_choose(static_cast<double>(k), static_cast<double>(ell)) +
           log_choose(static_cast<double>(n - k), static_cast<double>(k - ell)) -
           log_choose(static_cast<double>(n), static_cast<double>(k));
}

inline double log_comb_ratio_coarse(std::int64_t n, std::int64_t k, std::int64_t ell) {
    return static_cast<double>(2 * k + 1) * std::log(2.0) +
           static_cast<double>(ell) *
               (std::log(static_cast<double>(k)) - std::log(static_cast<double>(n)));
}

struct OverlapBound {
    double log_f_upper;
    int regime;  // 1: ell < lambda1, 2: lambda1 <= ell < lambda2, 3: ell >= lambda2
};

// Upper bound on ln f(ell) = ln [C(n,k) C(k,ell) C(n-k,k-ell) p(k,ell)],
// classified by the overlap regime:
//   regime 1: p(k,ell) <= b^C(ell,2) Pr^2(t-sparse), folded into E^2 * 2 s_ell;
//   regime 2: exact combinatorial factors with Chernoff bounds for the
//             overlap and the two cross-edge counts;
//   regime 3: exact combinatorial factors with the p1 + p2 split.
inline OverlapBound overlap_upper(std::int64_t n, std::int64_t k, std::int64_t ell,
                                  const Rational& t, const RateParams& params, double eps,
                                  double xi) {
    const auto s = OverlapScenario::make(k, ell, t, params, eps, xi);
    const double tk_half = t.to_double() * static_cast<double>(k) / 2.0;
    if (static_cast<double>(ell) < s.lambda1) {
        const double log_E =
            log_expected_count(n, k, t, params, MomentMode::exact).log_E_exact;
        return OverlapBound{2.0 * log_E + std::log(2.0) + s_ell_log(n, k, ell, params), 1};
    }
    const double comb = log_choose(static_cast<double>(n), static_cast<double>(k)) +
                        log_choose(static_cast<double>(k), static_cast<double>(ell)) +
                        log_choose(static_cast<double>(n - k), static_cast<double>(k - ell));
    if (static_cast<double>(ell) < s.lambda2) {
        const double prob =
            chernoff_lower_tail_log(static_cast<double>(s.overlap_pairs), tk_half, params) +
            2.0 * chernoff_lower_tail_log(static_cast<double>(s.cross_pairs), tk_half, params);
        return OverlapBound{comb + prob, 2};
    }
    const double p1 = log_p1_upper(s, t, params);
    const double p2 = log_p2_upper(s, t, params);
    return OverlapBound{comb + log_add_exp(p1, p2), 3};
}

// -E^2/(E + DeltaBar) from the two log inputs, kept in log space until the
// final exponentiation.  Underflow of the exponent caps the bound at 1
// (returns -0); overflow means the bound is exp(-huge), reported as -inf.
inline double janson_from_logs(double log_E, double log_delta_bar) {
    const double exponent = 2.0 * log_E - log_add_exp(log_E, log_delta_bar);
    if (exponent > 700.0) return neg_inf;
    return -std::exp(exponent);
}

// ln of the Janson upper bound on Pr(no t-sparse k-set exists), with the
// pair-correlation sum Delta replaced by its per-ell upper bounds DeltaBar.
// DeltaBar >= Delta, so the returned bound is valid but weaker than the
// exact Janson value.
inline double janson_bound(std::int64_t n, std::int64_t k, const Rational& t,
                           const RateParams& params, double eps, double xi) {
    const double log_E = log_expected_count(n, k, t, params, MomentMode::exact).log_E_exact;
    if (!std::isfinite(log_E))
        throw std::domain_error("janson_bound requires a finite log expected count");
    double log_delta_bar = neg_inf;
    for (std::int64_t ell = 1; ell < k; ++ell)
        log_delta_bar =
            log_add_exp(log_delta_bar, overlap_upper(n, k, ell, t, params, eps, xi).log_f_upper);
    return janson_from_logs(log_E, log_delta_bar);
}

}  // namespace tsparse
