#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "tsparse/graph.hpp"
#include "tsparse/moments.hpp"
#include "tsparse/predict.hpp"
#include "tsparse/rng.hpp"
#include "tsparse/solver.hpp"

namespace tsparse {

struct ExperimentConfig {
    std::int64_t n = 0;
    RateParams params;
    Rational t;
    double delta = 0.3;
    std::int64_t samples = 1;
    std::uint64_t master_seed = 1;
    std::uint64_t solver_budget = unlimited_budget;
    int sweep_slack = 3;
    // Execution detail only: never serialized or compared, so summaries are
    // identical across worker counts.
    int workers = 1;

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
        return a.n == b.n && a.params.p == b.params.p && a.t == b.t && a.delta == b.delta &&
               a.samples == b.samples && a.master_seed == b.master_seed &&
               a.solver_budget == b.solver_budget && a.sweep_slack == b.sweep_slack;
    }
};

// Seed for sample i: the SplitMix64 finalizer applied to master_seed + i.
// mix64 is a bijection, so distinct indices get distinct seeds.
inline std::uint64_t sample_seed(std::uint64_t master_seed, std::int64_t index) {
    return mix64(master_seed + static_cast<std::uint64_t>(index));
}

struct ConcentrationSummary {
    ExperimentConfig config;
    double alpha_hat = 0.0;
    ConcentrationInterval predicted{0, 0};   // floors, per the two-point statement
    std::int64_t k_plus_ceil = 0;            // ceiling convention for the upper point
    std::map<int, std::int64_t> histogram;   // observed alpha_t -> count (solved only)
    std::int64_t unsolved = 0;               // budget-exhausted samples, never imputed
    std::optional<double> hit_rate;          // solved fraction in [k_minus, k_plus]
    std::optional<double> hit_rate_widened;  // solved fraction in [k_minus-1, k_plus+1]

    friend bool operator==(const ConcentrationSummary& a, const ConcentrationSummary& b) {
        return a.config == b.config && a.alpha_hat == b.alpha_hat &&
               a.predicted.k_minus == b.predicted.k_minus &&
               a.predicted.k_plus == b.predicted.k_plus && a.k_plus_ceil == b.k_plus_ceil &&
               a.histogram == b.histogram && a.unsolved == b.unsolved &&
               a.hit_rate == b.hit_rate && a.hit_rate_widened == b.hit_rate_widened;
    }
};

// Samples G(n,p) config.samples times with derived seeds, solves each exactly
// (budget-exhausted solves are counted, not guessed), and aggregates.  Sample
// i always lands in slot i, so the summary does not depend on worker count.
inline ConcentrationSummary run_concentration(const ExperimentConfig& config) {
    if (config.samples < 1) throw std::domain_error("run_concentration requires samples >= 1");
    if (config.workers < 1) throw std::domain_error("run_concentration requires workers >= 1");
    ConcentrationSummary summary;
    summary.config = config;
    summary.alpha_hat = alpha_hat_sparse(config.n, config.t, config.params);
    summary.predicted = concentration_interval(config.n, config.t, config.params, config.delta);
    summary.k_plus_ceil = static_cast<std::int64_t>(std::ceil(summary.alpha_hat + config.delta));

    const int n = static_cast<int>(config.n);
    const int start = predicted_sweep_start(n, config.t, config.params, config.sweep_slack);
    std::vector<int> results(static_cast<size_t>(config.samples), -1);
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= config.samples) return;
            const Graph g = gnp_sample(n, config.params.p, sample_seed(config.master_seed, i));
            const SparsityResult r = sparsity_exact(g, config.t, config.solver_budget, start);
            results[static_cast<size_t>(i)] = r.optimal ? r.size : -1;
        }
    };
    const int nworkers = static_cast<int>(
        std::min<std::int64_t>(config.workers, config.samples));
    if (nworkers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nworkers));
        for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::int64_t hits = 0, hits_wide = 0, solved = 0;
    for (int value : results) {
        if (value < 0) {
            ++summary.unsolved;
            continue;
        }
        ++solved;
        ++summary.histogram[value];
        if (value >= summary.predicted.k_minus && value <= summary.predicted.k_plus) ++hits;
        if (value >= summary.predicted.k_minus - 1 && value <= summary.predicted.k_plus + 1)
            ++hits_wide;
    }
    if (solved > 0) {
        summary.hit_rate = static_cast<double>(hits) / static_cast<double>(solved);
        summary.hit_rate_widened = static_cast<double>(hits_wide) / static_cast<double>(solved);
    }
    return summary;
}

struct MomentScanRow {
    std::int64_t k;
    double log_E_exact;
    std::optional<double> log_E_upper;
    std::optional<double> log_E_lower;

    friend bool operator==(const MomentScanRow& a, const MomentScanRow& b) {
        return a.k == b.k && a.log_E_exact == b.log_E_exact &&
               a.log_E_upper == b.log_E_upper && a.log_E_lower == b.log_E_lower;
    }
};

struct MomentScan {
    std::int64_t n = 0;
    double p = 0.0;
    Rational t;
    std::int64_t k_min = 0;
    std::int64_t k_max = 0;
    std::vector<MomentScanRow> rows;
    // Smallest k where log_E_exact turns negative; absent when the scan sees
    // no sign change (already negative at k_min, or never negative).
    std::optional<std::int64_t> k_star;

    friend bool operator==(const MomentScan& a, const MomentScan& b) {
        return a.n == b.n && a.p == b.p && a.t == b.t && a.k_min == b.k_min &&
               a.k_max == b.k_max && a.rows == b.rows && a.k_star == b.k_star;
    }
};

inline MomentScan moment_scan(std::int64_t n, const RateParams& params, const Rational& t,
                              std::int64_t k_min, std::int64_t k_max) {
    if (k_min < 2 || k_max > n || k_min > k_max)
        throw std::domain_error("moment_scan requires 2 <= k_min <= k_max <= n");
    MomentScan scan;
    scan.n = n;
    scan.p = params.p;
    scan.t = t;
    scan.k_min = k_min;
    scan.k_max = k_max;
    bool seen_nonneg = false;
    for (std::int64_t k = k_min; k <= k_max; ++k) {
        const auto report = log_expected_count(n, k, t, params, MomentMode::bounds);
        scan.rows.push_back(
            MomentScanRow{k, report.log_E_exact, report.log_E_upper, report.log_E_lower});
        if (report.log_E_exact >= 0.0) seen_nonneg = true;
        else if (seen_nonneg && !scan.k_star) scan.k_star = k;
    }
    return scan;
}

// --- serialization -------------------------------------------------------
// CSV: '#'-prefixed config lines, then a header row, then one record per
// histogram bucket / scan row.  JSONL: a config object line, then one object
// per record; parse(export(x)) == x.

namespace detail {
inline std::string num(double v) { return nlohmann::json(v).dump(); }

inline nlohmann::json config_json(const ExperimentConfig& c) {
    return {{"n", c.n},          {"p", c.params.p},
            {"t_num", c.t.num},  {"t_den", c.t.den},
            {"delta", c.delta},  {"samples", c.samples},
            {"seed", c.master_seed}, {"budget", c.solver_budget},
            {"slack", c.sweep_slack}};
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.n = j.at("n").get<std::int64_t>();
    c.params = RateParams::from_p(j.at("p").get<double>());
    c.t = Rational(j.at("t_num").get<std::int64_t>(), j.at("t_den").get<std::int64_t>());
    c.delta = j.at("delta").get<double>();
    c.samples = j.at("samples").get<std::int64_t>();
    c.master_seed = j.at("seed").get<std::uint64_t>();
    c.solver_budget = j.at("budget").get<std::uint64_t>();
    c.sweep_slack = j.at("slack").get<int>();
    return c;
}

inline void write_config_comments(const nlohmann::json& j, std::ostream& out) {
    for (auto it = j.begin(); it != j.end(); ++it)
        out << "# " << it.key() << "=" << it.value().dump() << '\n';
}
}  // namespace detail

inline void export_csv(const ConcentrationSummary& s, std::ostream& out) {
    auto j = detail::config_json(s.config);
    j["alpha_hat"] = s.alpha_hat;
    j["k_plus_ceil"] = s.k_plus_ceil;
    j["unsolved"] = s.unsolved;
    detail::write_config_comments(j, out);
    out << "value,count,predicted_low,predicted_high,hit_rate\n";
    const std::string rate = s.hit_rate ? detail::num(*s.hit_rate) : std::string();
    for (const auto& [value, count] : s.histogram)
        out << value << ',' << count << ',' << s.predicted.k_minus << ',' << s.predicted.k_plus
            << ',' << rate << '\n';
}

inline void export_jsonl(const ConcentrationSummary& s, std::ostream& out) {
    auto head = detail::config_json(s.config);
    head["type"] = "concentration";
    head["alpha_hat"] = s.alpha_hat;
    head["k_minus"] = s.predicted.k_minus;
    head["k_plus"] = s.predicted.k_plus;
    head["k_plus_ceil"] = s.k_plus_ceil;
    head["unsolved"] = s.unsolved;
    head["hit_rate"] = s.hit_rate ? nlohmann::json(*s.hit_rate) : nlohmann::json(nullptr);
    head["hit_rate_widened"] =
        s.hit_rate_widened ? nlohmann::json(*s.hit_rate_widened) : nlohmann::json(nullptr);
    out << head.dump() << '\n';
    for (const auto& [value, count] : s.histogram)
        out << nlohmann::json{{"value", value}, {"count", count}}.dump() << '\n';
}

inline ConcentrationSummary parse_concentration_jsonl(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("concentration jsonl: missing header line");
    const auto head = nlohmann::json::parse(line);
    if (head.value("type", "") != "concentration")
        throw std::runtime_error("concentration jsonl: wrong type tag");
    ConcentrationSummary s;
    s.config = detail::config_from_json(head);
    s.alpha_hat = head.at("alpha_hat").get<double>();
    s.predicted.k_minus = head.at("k_minus").get<std::int64_t>();
    s.predicted.k_plus = head.at("k_plus").get<std::int64_t>();
    s.k_plus_ceil = head.at("k_plus_ceil").get<std::int64_t>();
    s.unsolved = head.at("unsolved").get<std::int64_t>();
    if (!head.at("hit_rate").is_null()) s.hit_rate = head.at("hit_rate").get<double>();
    if (!head.at("hit_rate_widened").is_null())
        s.hit_rate_widened = head.at("hit_rate_widened").get<double>();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto rec = nlohmann::json::parse(line);
        s.histogram[rec.at("value").get<int>()] = rec.at("count").get<std::int64_t>();
    }
    return s;
}

namespace detail {
inline nlohmann::json scan_config_json(const MomentScan& s) {
    return {{"n", s.n},         {"p", s.p},
            {"t_num", s.t.num}, {"t_den", s.t.den},
            {"k_min", s.k_min}, {"k_max", s.k_max}};
}
}  // namespace detail

inline void export_csv(const MomentScan& s, std::ostream& out) {
    auto j = detail::scan_config_json(s);
    j["k_star"] = s.k_star ? nlohmann::json(*s.k_star) : nlohmann::json(nullptr);
    detail::write_config_comments(j, out);
    out << "k,log_E_exact,log_E_upper,log_E_lower\n";
    for (const auto& row : s.rows) {
        out << row.k << ',' << detail::num(row.log_E_exact) << ',';
        if (row.log_E_upper) out << detail::num(*row.log_E_upper);
        out << ',';
        if (row.log_E_lower) out << detail::num(*row.log_E_lower);
        out << '\n';
    }
}

inline void export_jsonl(const MomentScan& s, std::ostream& out) {
    auto head = detail::scan_config_json(s);
    head["type"] = "moment_scan";
    head["k_star"] = s.k_star ? nlohmann::json(*s.k_star) : nlohmann::json(nullptr);
    out << head.dump() << '\n';
    for (const auto& row : s.rows) {
        nlohmann::json rec{{"k", row.k}, {"log_E_exact", row.log_E_exact}};
        rec["log_E_upper"] =
            row.log_E_upper ? nlohmann::json(*row.log_E_upper) : nlohmann::json(nullptr);
        rec["log_E_lower"] =
            row.log_E_lower ? nlohmann::json(*row.log_E_lower) : nlohmann::json(nullptr);
        out << rec.dump() << '\n';
    }
}

inline MomentScan parse_scan_jsonl(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("moment scan jsonl: missing header line");
    const auto head = nlohmann::json::parse(line);
    if (head.value("type", "") != "moment_scan")
        throw std::runtime_error("moment scan jsonl: wrong type tag");
    MomentScan s;
    s.n = head.at("n").get<std::int64_t>();
    s.p = head.at("p").get<double>();
    s.t = Rational(head.at("t_num").get<std::int64_t>(), head.at("t_den").get<std::int64_t>());
    s.k_min = head.at("k_min").get<std::int64_t>();
    s.k_max = head.at("k_max").get<std::int64_t>();
    if (!head.at("k_star").is_null()) s.k_star = head.at("k_star").get<std::int64_t>();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto rec = nlohmann::json::parse(line);
        MomentScanRow row;
        row.k = rec.at("k").get<std::int64_t>();
        row.log_E_exact = rec.at("log_E_exact").get<double>();
        if (!rec.at("log_E_upper").is_null()) row.log_E_upper = rec.at("log_E_upper").get<double>();
        if (!rec.at("log_E_lower").is_null()) row.log_E_lower = rec.at("log_E_lower").get<double>();
        s.rows.push_back(row);
    }
    return s;
}

enum class ExportFormat { csv, jsonl };

template <typename T>
inline void export_to_path(const T& value, ExportFormat format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    if (format == ExportFormat::csv) export_csv(value, out);
    else export_jsonl(value, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace tsparse
