#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tsparse/graph.hpp"
#include "tsparse/moments.hpp"

using namespace tsparse;

namespace {
const RateParams half = RateParams::from_p(0.5);
const Rational t0 = Rational::from_int(0);
const Rational t1 = Rational::from_int(1);
}  // namespace

TEST_CASE("log_expected_count") {
    SECTION("every 3-set qualifies at t=2") {
        for (double p : {0.2, 0.5, 0.9}) {
            const auto report = log_expected_count(10, 3, Rational::from_int(2),
                                                   RateParams::from_p(p), MomentMode::exact);
            REQUIRE(report.log_E_exact == Catch::Approx(std::log(120.0)).margin(1e-12));
        }
    }
    SECTION("single-pair case k=2, t=0") {
        const auto p3 = RateParams::from_p(0.3);
        const auto report = log_expected_count(50, 2, t0, p3, MomentMode::exact);
        REQUIRE(report.log_E_exact ==
                Catch::Approx(log_choose(50, 2) + std::log(0.7)).margin(1e-12));
    }
    SECTION("sign change brackets the prediction at n=1e4, t=0") {
        const double at21 = log_expected_count(10000, 21, t0, half, MomentMode::exact).log_E_exact;
        const double at22 = log_expected_count(10000, 22, t0, half, MomentMode::exact).log_E_exact;
        REQUIRE(at21 == Catch::Approx(2.4550866).margin(1e-4));
        REQUIRE(at22 == Catch::Approx(-5.9838085).margin(1e-4));
    }
    SECTION("bounds sandwich the exact value when Lemma 3 applies") {
        for (double p : {0.3, 0.5, 0.8})
            for (std::int64_t k : {6, 12, 24}) {
                const auto params = RateParams::from_p(p);
                if (!(1.0 <= p * static_cast<double>(k - 1))) continue;
                const auto report = log_expected_count(200, k, t1, params, MomentMode::bounds);
                REQUIRE(report.log_E_upper.has_value());
                REQUIRE(report.log_E_lower.has_value());
                REQUIRE(*report.log_E_lower <= report.log_E_exact);
                REQUIRE(report.log_E_exact <= *report.log_E_upper + 1e-9);
            }
    }
    SECTION("bounds omitted when hypotheses fail, exact still returned") {
        const auto report = log_expected_count(50, 4, t0, half, MomentMode::bounds);
        REQUIRE_FALSE(report.log_E_upper.has_value());
        REQUIRE_FALSE(report.log_E_lower.has_value());
        REQUIRE(std::isfinite(report.log_E_exact));
    }
    REQUIRE_THROWS_AS(log_expected_count(10, 1, t0, half, MomentMode::exact), std::domain_error);
    REQUIRE_THROWS_AS(log_expected_count(10, 11, t0, half, MomentMode::exact), std::domain_error);
}

TEST_CASE("Monte Carlo frequency matches the exact sparse probability") {
    // Fixed k-set in G(n,p): empirical t-sparsity rate vs exp(sparse_prob),
    // within 3 standard errors.
    struct Case { int n; std::int64_t k; const char* t; double p; };
    for (const auto& c : {Case{10, 6, "1", 0.5}, Case{12, 7, "2", 0.3}}) {
        const auto params = RateParams::from_p(c.p);
        const Rational t = Rational::parse(c.t);
        const double prob = std::exp(sparse_prob(c.k, t, params, SparseProbMode::exact));
        std::vector<int> subset;
        for (int v = 0; v < c.k; ++v) subset.push_back(v);
        const int samples = 20000;
        int hits = 0;
        for (int i = 0; i < samples; ++i) {
            const Graph g = gnp_sample(c.n, c.p, mix64(777 + static_cast<std::uint64_t>(i)));
            if (is_t_sparse(g, subset, t)) ++hits;
        }
        const double freq = static_cast<double>(hits) / samples;
        const double sigma = std::sqrt(prob * (1.0 - prob) / samples);
        INFO("n=" << c.n << " k=" << c.k << " t=" << c.t << " p=" << c.p << " freq=" << freq
                  << " prob=" << prob);
        REQUIRE(std::abs(freq - prob) < 3.0 * sigma);
    }
}

TEST_CASE("s_ell") {
    SECTION("frozen value") {
        REQUIRE(s_ell_log(100, 10, 2, half) == Catch::Approx(std::log(0.81)).margin(1e-12));
    }
    SECTION("formula collapse at ell = k, n = k") {
        const std::int64_t k = 6;
        const double expected = log_factorial(static_cast<double>(k)) +
                                static_cast<double>(k * (k - 1) / 2) * half.ln_b -
                                static_cast<double>(k) * std::log(static_cast<double>(k));
        REQUIRE(s_ell_log(k, k, k, half) == Catch::Approx(expected).margin(1e-12));
    }
    SECTION("halving claim at the paper's operating point") {
        // n = 1e6, p = n^-0.2, eps = 0.2, k = floor(2 log_b(np))
        const double p = std::pow(10.0, -1.2);
        const auto params = RateParams::from_p(p);
        const std::int64_t n = 1000000;
        const std::int64_t k = static_cast<std::int64_t>(
            std::floor(2.0 * params.log_b(static_cast<double>(n) * p)));
        REQUIRE(k == 339);
        const double lambda1 = 0.2 * static_cast<double>(k) / 2.0;
        double max_ratio = 0.0;
        double sum = 0.0;
        for (std::int64_t ell = 2; static_cast<double>(ell) < lambda1; ++ell) {
            const double ratio =
                std::exp(s_ell_log(n, k, ell + 1, params) - s_ell_log(n, k, ell, params));
            max_ratio = std::max(max_ratio, ratio);
            sum += std::exp(s_ell_log(n, k, ell, params));
        }
        REQUIRE(max_ratio == Catch::Approx(0.043126887).margin(1e-6));
        REQUIRE(max_ratio < 0.5);
        const double s2 = std::exp(s_ell_log(n, k, 2, params));
        REQUIRE(sum <= 2.0 * s2);
        REQUIRE(sum == Catch::Approx(0.0073194575).margin(1e-8));
    }
    REQUIRE_THROWS_AS(s_ell_log(10, 5, 0, half), std::domain_error);
    REQUIRE_THROWS_AS(s_ell_log(10, 5, 6, half), std::domain_error);
}

TEST_CASE("OverlapScenario") {
    SECTION("slot conservation and regime edges") {
        for (std::int64_t k : {10, 25, 40})
            for (std::int64_t ell = 1; ell < k; ++ell) {
                const auto s = OverlapScenario::make(k, ell, t1, half, 0.2, 0.1);
                REQUIRE(s.overlap_pairs + s.cross_pairs == k * (k - 1) / 2);
                REQUIRE(s.lambda1 < s.lambda2);
                REQUIRE(s.lambda2 < static_cast<double>(k));
                REQUIRE(static_cast<double>(s.mu) <= t1.to_double() * static_cast<double>(k) / 2.0);
            }
    }
    SECTION("maximum overlap leaves k-1 cross slots") {
        const auto s = OverlapScenario::make(40, 39, t1, half, 0.2, 0.1);
        REQUIRE(s.cross_pairs == 39);
        REQUIRE(s.overlap_pairs == 39 * 38 / 2);
    }
    REQUIRE_THROWS_AS(OverlapScenario::make(10, 0, t1, half, 0.2, 0.1), std::domain_error);
    REQUIRE_THROWS_AS(OverlapScenario::make(10, 10, t1, half, 0.2, 0.1), std::domain_error);
    REQUIRE_THROWS_AS(OverlapScenario::make(10, 5, t1, half, 0.3, 0.1), std::domain_error);
    REQUIRE_THROWS_AS(OverlapScenario::make(10, 5, t1, half, 0.2, 1.0), std::domain_error);
}

TEST_CASE("log_p1_upper") {
    SECTION("finite negative at a deep-overlap scenario") {
        const auto s = OverlapScenario::make(40, 36, t1, half, 0.2, 0.5);
        const double p1 = log_p1_upper(s, t1, half);
        REQUIRE(std::isfinite(p1));
        REQUIRE(p1 < 0.0);
        REQUIRE(p1 == Catch::Approx(-417.64856).margin(1e-3));
    }
    SECTION("mu at the binomial mean gives the trivial bound") {
        auto s = OverlapScenario::make(40, 36, t1, half, 0.2, 0.5);
        s.mu = s.overlap_pairs / 2;  // = p * C(ell,2) at p = 1/2
        s.p1_sum_empty = false;
        REQUIRE(log_p1_upper(s, t1, half) == 0.0);
    }
    SECTION("vacuous split returns -inf") {
        // t = 0 makes tk/2 - cross psi p negative for every ell < k
        const auto s = OverlapScenario::make(40, 36, t0, half, 0.2, 0.5);
        REQUIRE(s.p1_sum_empty);
        REQUIRE(log_p1_upper(s, t0, half) == neg_inf);
    }
    SECTION("regime precondition") {
        const auto s = OverlapScenario::make(40, 5, t1, half, 0.2, 0.5);
        REQUIRE_THROWS_WITH(log_p1_upper(s, t1, half),
                            Catch::Matchers::ContainsSubstring("lambda2"));
    }
}

TEST_CASE("log_p2_upper") {
    SECTION("frozen deep-overlap value") {
        const auto s = OverlapScenario::make(40, 36, t1, half, 0.2, 0.5);
        // two terms: -C(36,2) Lambda*(40/1260) - 150 (2-2xi) ln b, recomputed
        // independently here term by term
        const double term1 =
            -static_cast<double>(s.overlap_pairs) * lambda_star(40.0 / 1260.0, half);
        const double term2 = -150.0 * 1.0 * half.ln_b;
        REQUIRE(s.cross_pairs == 150);
        REQUIRE(log_p2_upper(s, t1, half) == Catch::Approx(term1 + term2).margin(1e-9));
        REQUIRE(log_p2_upper(s, t1, half) == Catch::Approx(-451.97592).margin(1e-3));
    }
    SECTION("weakly increasing in xi, cross term vanishing as xi -> 1") {
        double prev = neg_inf;
        for (double xi : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
            const auto s = OverlapScenario::make(40, 36, t1, half, 0.2, xi);
            const double v = log_p2_upper(s, t1, half);
            REQUIRE(v >= prev);
            prev = v;
        }
        const auto s99 = OverlapScenario::make(40, 36, t1, half, 0.2, 0.999);
        const double overlap_only =
            -static_cast<double>(s99.overlap_pairs) * lambda_star(s99.x_I, half);
        REQUIRE(log_p2_upper(s99, t1, half) ==
                Catch::Approx(overlap_only).margin(0.3));
    }
    SECTION("hypothesis violation") {
        const auto s = OverlapScenario::make(10, 9, Rational::from_int(8), half, 0.2, 0.5);
        REQUIRE_THROWS_WITH(log_p2_upper(s, Rational::from_int(8), half),
                            Catch::Matchers::ContainsSubstring("t*k/2 <= p*C(ell,2)"));
    }
}

TEST_CASE("p1 below p2 on a deep-overlap grid with tk << p ell^2") {
    struct Point { std::int64_t k, ell; const char* t; double p, xi; };
    // points chosen so the m <= mu split is non-vacuous and the documented
    // asymptotic ordering already holds at finite size
    for (const auto& pt : {Point{100, 99, "0.7", 0.5, 0.9}, Point{80, 79, "0.9", 0.7, 0.8}}) {
        const auto params = RateParams::from_p(pt.p);
        const Rational t = Rational::parse(pt.t);
        const auto s = OverlapScenario::make(pt.k, pt.ell, t, params, 0.2, pt.xi);
        REQUIRE_FALSE(s.p1_sum_empty);
        const double p1 = log_p1_upper(s, t, params);
        const double p2 = log_p2_upper(s, t, params);
        INFO("k=" << pt.k << " ell=" << pt.ell << " p1=" << p1 << " p2=" << p2);
        REQUIRE(p1 <= p2);
    }
    // frozen values for the first point
    const auto params = RateParams::from_p(0.5);
    const Rational t = Rational::parse("0.7");
    const auto s = OverlapScenario::make(100, 99, t, params, 0.2, 0.9);
    REQUIRE(log_p1_upper(s, t, params) == Catch::Approx(-3337.2929).margin(1e-2));
    REQUIRE(log_p2_upper(s, t, params) == Catch::Approx(-3168.7021).margin(1e-2));
}

TEST_CASE("overlap_upper") {
    SECTION("regime label flips at lambda1 and lambda2") {
        const std::int64_t k = 40;  // lambda1 = 4, lambda2 = 32 at eps = 0.2
        REQUIRE(overlap_upper(1000, k, 3, t1, half, 0.2, 0.1).regime == 1);
        REQUIRE(overlap_upper(1000, k, 4, t1, half, 0.2, 0.1).regime == 2);
        REQUIRE(overlap_upper(1000, k, 31, t1, half, 0.2, 0.1).regime == 2);
        REQUIRE(overlap_upper(1000, k, 32, t1, half, 0.2, 0.1).regime == 3);
        REQUIRE(overlap_upper(1000, k, 39, t1, half, 0.2, 0.1).regime == 3);
    }
    SECTION("regime-3 bound is well under E^2 at the paper-scale operating point") {
        const double p = std::pow(10.0, -1.2);
        const auto params = RateParams::from_p(p);
        const std::int64_t n = 1000000;
        const std::int64_t k = 276;  // floor(alpha_hat - 0.3) for t = 0
        const std::int64_t ell = 221;  // ceil(lambda2)
        const auto bound = overlap_upper(n, k, ell, t0, params, 0.2, 0.1);
        REQUIRE(bound.regime == 3);
        const double log_E = log_expected_count(n, k, t0, params, MomentMode::exact).log_E_exact;
        REQUIRE(log_E == Catch::Approx(60.723008).margin(1e-3));
        REQUIRE(bound.log_f_upper - 2.0 * log_E == Catch::Approx(-45.374338).margin(1e-3));
        REQUIRE(bound.log_f_upper < 2.0 * log_E);
    }
    SECTION("exact combinatorial ratio never exceeds the coarse closed form") {
        for (std::int64_t n : {200, 1000})
            for (std::int64_t k : {15, 25})
                for (std::int64_t ell = 1; ell < k; ++ell)
                    REQUIRE(log_comb_ratio_exact(n, k, ell) <=
                            log_comb_ratio_coarse(n, k, ell) + 1e-9);
    }
}

TEST_CASE("janson_from_logs") {
    SECTION("Delta = 0, E = 1 gives the bound exp(-1)") {
        REQUIRE(janson_from_logs(0.0, neg_inf) == -1.0);
    }
    SECTION("E dominant limit approaches exp(-E)") {
        const double log_E = std::log(50.0);
        REQUIRE(janson_from_logs(log_E, neg_inf) == Catch::Approx(-50.0).margin(1e-9));
        REQUIRE(janson_from_logs(log_E, log_E - 40.0) == Catch::Approx(-50.0).epsilon(1e-9));
    }
    SECTION("equal E and Delta halves the exponent") {
        REQUIRE(janson_from_logs(0.0, 0.0) == Catch::Approx(-0.5).margin(1e-12));
    }
    SECTION("overflow and underflow handling") {
        REQUIRE(janson_from_logs(1000.0, 0.0) == neg_inf);
        REQUIRE(janson_from_logs(-800.0, 0.0) == 0.0);
    }
}

TEST_CASE("janson_bound decreases along n at the predicted lower point") {
    // p = 1/2, t = 0, delta = 0.3, k = floor(alpha_hat - delta)
    const std::vector<std::int64_t> ns{1000, 10000, 100000};
    const std::vector<std::int64_t> ks{15, 20, 26};
    const std::vector<double> frozen{-0.2774124917, -11.90928836, -73.34570159};
    double prev = 0.0;
    for (size_t i = 0; i < ns.size(); ++i) {
        const double bound = janson_bound(ns[i], ks[i], t0, half, 0.2, 0.1);
        REQUIRE(bound == Catch::Approx(frozen[i]).epsilon(1e-4));
        REQUIRE(bound < prev);
        prev = bound;
    }
}
