// Command-line front end: closed-form predictions, rate-function numerics,
// G(n,p) sampling, exact t-sparsity solves, overlap/Janson bounds, and the
// Monte Carlo concentration experiment.  Every subcommand is a pure pipeline:
// identical arguments and input files give byte-identical output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "tsparse/tsparse.hpp"

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string bool_str(bool v) { return v ? "true" : "false"; }

// Writes either to stdout or to a file.
struct Output {
    std::optional<std::ofstream> file;
    std::ostream& data() { return file ? *file : std::cout; }

    static Output open(const std::string& path) {
        Output out;
        if (!path.empty()) {
            out.file.emplace(path);
            if (!*out.file) throw std::runtime_error("cannot open for writing: " + path);
        }
        return out;
    }
};

struct RatesArgs {
    double p = 0.5;
    std::optional<double> lambda_star_x;
    bool cdf = false;
    bool tail_bounds = false;
    bool sparse = false;
    bool psi = false;
    bool expansion = false;
    std::int64_t trials = 0;
    double threshold = 0.0;
    double lower_constant = 0.1;
    std::int64_t k = 0;
    std::string t = "0";
    std::string mode = "exact";
    double c0 = tsparse::sparse_prob_c0;
    double xi = 0.1;
    double eps = 0.0;
};

int run_rates(const RatesArgs& a) {
    using namespace tsparse;
    const auto params = RateParams::from_p(a.p);
    const int actions = (a.lambda_star_x ? 1 : 0) + a.cdf + a.tail_bounds + a.sparse + a.psi +
                        a.expansion;
    if (actions != 1) {
        std::cerr << "usage error: rates needs exactly one of --lambda-star, --cdf, "
                     "--tail-bounds, --sparse-prob, --psi, --expansion\n";
        return 2;
    }
    std::ostringstream echo;
    echo << "# tsparse rates p=" << num(a.p);
    if (a.lambda_star_x) {
        echo << " action=lambda-star x=" << num(*a.lambda_star_x);
        std::cout << echo.str() << "\n";
        std::cout << "lambda_star " << num(lambda_star(*a.lambda_star_x, params)) << "\n";
    } else if (a.cdf) {
        echo << " action=cdf trials=" << a.trials << " threshold=" << num(a.threshold);
        std::cout << echo.str() << "\n";
        std::cout << "binom_cdf_log " << num(binom_cdf_log({a.trials, a.threshold, params}))
                  << "\n";
    } else if (a.tail_bounds) {
        echo << " action=tail-bounds trials=" << a.trials << " threshold=" << num(a.threshold)
             << " lower_constant=" << num(a.lower_constant);
        std::cout << echo.str() << "\n";
        const auto bounds = binom_tail_bounds({a.trials, a.threshold, params}, a.lower_constant);
        std::cout << "log_lower " << num(bounds.log_lower) << "\n";
        std::cout << "log_upper " << num(bounds.log_upper) << "\n";
    } else if (a.sparse) {
        const Rational t = Rational::parse(a.t);
        SparseProbMode mode;
        if (a.mode == "exact") mode = SparseProbMode::exact;
        else if (a.mode == "upper") mode = SparseProbMode::upper;
        else if (a.mode == "lower") mode = SparseProbMode::lower;
        else {
            std::cerr << "usage error: --mode must be exact, upper or lower\n";
            return 2;
        }
        echo << " action=sparse-prob k=" << a.k << " t=" << t.str() << " mode=" << a.mode
             << " c0=" << num(a.c0);
        std::cout << echo.str() << "\n";
        std::cout << "sparse_prob_log " << num(sparse_prob(a.k, t, params, mode, a.c0)) << "\n";
    } else if (a.psi) {
        echo << " action=psi xi=" << num(a.xi);
        std::cout << echo.str() << "\n";
        std::cout << "psi " << num(psi_solve(params, a.xi)) << "\n";
    } else {
        const Rational t = Rational::parse(a.t);
        echo << " action=expansion t=" << t.str() << " k=" << a.k << " eps=" << num(a.eps);
        std::cout << echo.str() << "\n";
        const auto shift = lambda_expansion_check(t.to_double(), a.k, params, a.eps);
        std::cout << "exact_shift " << num(shift.exact_shift) << "\n";
        std::cout << "approx_shift " << num(shift.approx_shift) << "\n";
    }
    return 0;
}

struct PredictArgs {
    std::int64_t n = 0;
    double p = 0.5;
    std::string t = "0";
    double delta = 0.3;
    bool dependence = false;
    bool refs = false;
};

int run_predict(const PredictArgs& a) {
    using namespace tsparse;
    const auto params = RateParams::from_p(a.p);
    const Rational t = Rational::parse(a.t);
    std::cout << "# tsparse predict n=" << a.n << " p=" << num(a.p) << " t=" << t.str()
              << " delta=" << num(a.delta) << " dependence=" << bool_str(a.dependence)
              << " refs=" << bool_str(a.refs) << "\n";
    const double alpha = alpha_hat_sparse(a.n, t, params);
    const auto interval = concentration_interval(a.n, t, params, a.delta);
    std::string header = "n p t delta alpha_hat k_minus k_plus";
    std::string row = std::to_string(a.n) + " " + num(a.p) + " " + t.str() + " " + num(a.delta) +
                      " " + num(alpha) + " " + std::to_string(interval.k_minus) + " " +
                      std::to_string(interval.k_plus);
    if (a.dependence) {
        if (!t.is_integer())
            throw std::domain_error("--dependence requires integer t, got t=" + t.str());
        const double dep = alpha_dependence(a.n, t.num, params);
        header += " alpha_dependence gap";
        row += " " + num(dep) + " " + num(alpha - dep);
    }
    if (a.refs) {
        const auto ref = regime_reference(a.n, t, params);
        header += " small_t_upper large_t_value";
        row += " " + num(ref.small_t_upper) + " " + num(ref.large_t_value);
    }
    std::cout << header << "\n" << row << "\n";
    return 0;
}

struct SampleArgs {
    std::int64_t n = 0;
    double p = 0.5;
    std::uint64_t seed = 1;
    std::string out;
};

int run_sample(const SampleArgs& a) {
    using namespace tsparse;
    auto out = Output::open(a.out);
    // the edge-list format has no comment lines, so the config echo goes to
    // stderr when the graph itself is written to stdout
    std::ostream& echo = a.out.empty() ? std::cerr : std::cout;
    echo << "# tsparse sample n=" << a.n << " p=" << num(a.p) << " seed=" << a.seed
         << " out=" << (a.out.empty() ? "-" : a.out) << "\n";
    const Graph g = gnp_sample(static_cast<int>(a.n), a.p, a.seed);
    write_graph(g, out.data());
    return 0;
}

struct SolveArgs {
    std::string in;
    std::string t = "0";
    std::uint64_t budget = tsparse::unlimited_budget;
    std::int64_t start = 0;
    bool timing = false;
};

int run_solve(const SolveArgs& a) {
    using namespace tsparse;
    const Rational t = Rational::parse(a.t);
    const Graph g = read_graph(a.in);
    std::cout << "# tsparse solve in=" << a.in << " t=" << t.str() << " budget=" << a.budget
              << " start=" << a.start << " timing=" << bool_str(a.timing) << "\n";
    const auto res = sparsity_exact(g, t, a.budget, static_cast<int>(a.start));
    std::cout << "size " << res.size << "\n";
    std::cout << "witness";
    for (int v : res.witness) std::cout << ' ' << v;
    std::cout << "\n";
    std::cout << "edges " << res.edges << "\n";
    std::cout << "optimal " << bool_str(res.optimal) << "\n";
    std::cout << "nodes " << res.nodes_explored << "\n";
    // wall time breaks byte-for-byte reproducibility, so it is opt-in
    if (a.timing) std::cout << "millis " << num(res.elapsed_ms) << "\n";
    return 0;
}

struct MomentsArgs {
    std::int64_t n = 0;
    std::int64_t k = 0;
    std::string t = "0";
    double p = 0.5;
    double eps = 0.2;
    double xi = 0.1;
    double c0 = tsparse::sparse_prob_c0;
    std::string out;
};

int run_moments(const MomentsArgs& a) {
    using namespace tsparse;
    const auto params = RateParams::from_p(a.p);
    const Rational t = Rational::parse(a.t);
    auto out = Output::open(a.out);
    auto& os = out.data();
    os << "# tsparse moments n=" << a.n << " k=" << a.k << " t=" << t.str() << " p=" << num(a.p)
       << " eps=" << num(a.eps) << " xi=" << num(a.xi) << " c0=" << num(a.c0) << "\n";
    const auto report = log_expected_count(a.n, a.k, t, params, MomentMode::bounds, a.c0);
    os << "ell,regime,log_f_upper\n";
    double log_delta_bar = neg_inf;
    for (std::int64_t ell = 1; ell < a.k; ++ell) {
        const auto bound = overlap_upper(a.n, a.k, ell, t, params, a.eps, a.xi);
        log_delta_bar = log_add_exp(log_delta_bar, bound.log_f_upper);
        os << ell << ',' << bound.regime << ',' << num(bound.log_f_upper) << "\n";
    }
    os << "\nmetric,value\n";
    os << "log_E_exact," << num(report.log_E_exact) << "\n";
    if (report.log_E_upper) os << "log_E_upper," << num(*report.log_E_upper) << "\n";
    if (report.log_E_lower) os << "log_E_lower," << num(*report.log_E_lower) << "\n";
    os << "log_delta_bar," << num(log_delta_bar) << "\n";
    os << "janson_log_bound," << num(janson_from_logs(report.log_E_exact, log_delta_bar)) << "\n";
    return 0;
}

struct ExperimentArgs {
    std::int64_t n = 0;
    double p = 0.5;
    std::string t = "0";
    double delta = 0.3;
    std::int64_t samples = 50;
    std::uint64_t seed = 1;
    std::uint64_t budget = tsparse::unlimited_budget;
    int workers = 1;
    int slack = 3;
    std::string format = "csv";
    std::string out;
    bool scan = false;
    std::int64_t k_min = 2;
    std::int64_t k_max = 0;
};

int run_experiment(const ExperimentArgs& a) {
    using namespace tsparse;
    const auto params = RateParams::from_p(a.p);
    const Rational t = Rational::parse(a.t);
    if (a.format != "csv" && a.format != "jsonl") {
        std::cerr << "usage error: --format must be csv or jsonl\n";
        return 2;
    }
    const auto format = a.format == "csv" ? ExportFormat::csv : ExportFormat::jsonl;
    auto out = Output::open(a.out);
    // worker count cannot influence the result, so it echoes to stderr only;
    // everything result-affecting is embedded in the export itself
    std::cerr << "# tsparse experiment workers=" << a.workers << " format=" << a.format
              << " out=" << (a.out.empty() ? "-" : a.out) << "\n";
    if (a.scan) {
        const std::int64_t k_max = a.k_max > 0 ? a.k_max : std::min<std::int64_t>(a.n, 64);
        const auto scan = moment_scan(a.n, params, t, a.k_min, k_max);
        if (format == ExportFormat::csv) export_csv(scan, out.data());
        else export_jsonl(scan, out.data());
        return 0;
    }
    ExperimentConfig config;
    config.n = a.n;
    config.params = params;
    config.t = t;
    config.delta = a.delta;
    config.samples = a.samples;
    config.master_seed = a.seed;
    config.solver_budget = a.budget;
    config.sweep_slack = a.slack;
    config.workers = a.workers;
    const auto summary = run_concentration(config);
    if (format == ExportFormat::csv) export_csv(summary, out.data());
    else export_jsonl(summary, out.data());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"t-sparsity numbers of dense random graphs: predictions, bounds, exact solver, "
                 "and Monte Carlo verification"};
    app.require_subcommand(1);

    RatesArgs rates;
    auto* rates_cmd = app.add_subcommand("rates", "rate function and binomial tail numerics");
    rates_cmd->add_option("--p", rates.p, "edge probability in (0,1)")->required();
    rates_cmd->add_option("--lambda-star", rates.lambda_star_x, "evaluate Lambda* at x");
    rates_cmd->add_flag("--cdf", rates.cdf, "log CDF of Bin(trials, p) at threshold");
    rates_cmd->add_flag("--tail-bounds", rates.tail_bounds, "lower-tail sandwich bounds");
    rates_cmd->add_flag("--sparse-prob", rates.sparse, "log Pr(k-set is t-sparse)");
    rates_cmd->add_flag("--psi", rates.psi, "solve Lambda*(psi p) = (1-xi) ln b");
    rates_cmd->add_flag("--expansion", rates.expansion, "rate-function shift vs approximation");
    rates_cmd->add_option("--trials", rates.trials, "binomial trial count N")
        ->capture_default_str();
    rates_cmd->add_option("--threshold", rates.threshold, "tail threshold r")
        ->capture_default_str();
    rates_cmd->add_option("--lower-constant", rates.lower_constant,
                          "constant in the tail lower bound")->capture_default_str();
    rates_cmd->add_option("--k", rates.k, "set size k")->capture_default_str();
    rates_cmd->add_option("--t", rates.t, "sparsity threshold t (decimal)")
        ->capture_default_str();
    rates_cmd->add_option("--mode", rates.mode, "exact|upper|lower")->capture_default_str();
    rates_cmd->add_option("--c0", rates.c0, "constant in the Lemma-3 lower bound")
        ->capture_default_str();
    rates_cmd->add_option("--xi", rates.xi, "tilt parameter in (0,1)")->capture_default_str();
    rates_cmd->add_option("--eps", rates.eps, "relative shift in [-1,1]")->capture_default_str();

    PredictArgs predict;
    auto* predict_cmd = app.add_subcommand("predict", "closed-form location and interval");
    predict_cmd->add_option("--n", predict.n, "vertex count")->required();
    predict_cmd->add_option("--p", predict.p, "edge probability in (0,1)")->required();
    predict_cmd->add_option("--t", predict.t, "sparsity threshold t (decimal)")
        ->capture_default_str();
    predict_cmd->add_option("--delta", predict.delta, "interval half-width")
        ->capture_default_str();
    predict_cmd->add_flag("--dependence", predict.dependence,
                          "also report the t-dependence location and gap (integer t)");
    predict_cmd->add_flag("--refs", predict.refs, "also report coarse regime references");

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "sample G(n,p) to the edge-list format");
    sample_cmd->add_option("--n", sample.n, "vertex count")->required();
    sample_cmd->add_option("--p", sample.p, "edge probability in [0,1]")->required();
    sample_cmd->add_option("--seed", sample.seed, "64-bit sampler seed")->capture_default_str();
    sample_cmd->add_option("--out", sample.out, "output path (default stdout)")
        ->capture_default_str();

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "exact t-sparsity number of an edge-list graph");
    solve_cmd->add_option("--in", solve.in, "edge-list input path")->required();
    solve_cmd->add_option("--t", solve.t, "sparsity threshold t (decimal)")
        ->capture_default_str();
    solve_cmd->add_option("--budget", solve.budget, "search-tree node budget")
        ->capture_default_str();
    solve_cmd->add_option("--start", solve.start, "size sweep start (0 = whole graph)")
        ->capture_default_str();
    solve_cmd->add_flag("--timing", solve.timing, "append wall-clock millis to the record");

    MomentsArgs moments;
    auto* moments_cmd =
        app.add_subcommand("moments", "per-overlap correlation bounds and the Janson bound");
    moments_cmd->add_option("--n", moments.n, "vertex count")->required();
    moments_cmd->add_option("--k", moments.k, "set size k")->required();
    moments_cmd->add_option("--t", moments.t, "sparsity threshold t (decimal)")
        ->capture_default_str();
    moments_cmd->add_option("--p", moments.p, "edge probability in (0,1)")->required();
    moments_cmd->add_option("--eps", moments.eps, "regime split parameter in (0, 1/4)")
        ->capture_default_str();
    moments_cmd->add_option("--xi", moments.xi, "tilt parameter in (0,1)")->capture_default_str();
    moments_cmd->add_option("--c0", moments.c0, "constant in the Lemma-3 lower bound")
        ->capture_default_str();
    moments_cmd->add_option("--out", moments.out, "output path (default stdout)")
        ->capture_default_str();

    ExperimentArgs experiment;
    auto* experiment_cmd =
        app.add_subcommand("experiment", "Monte Carlo concentration run or first-moment scan");
    experiment_cmd->add_option("--n", experiment.n, "vertex count")->required();
    experiment_cmd->add_option("--p", experiment.p, "edge probability in (0,1)")->required();
    experiment_cmd->add_option("--t", experiment.t, "sparsity threshold t (decimal)")
        ->capture_default_str();
    experiment_cmd->add_option("--delta", experiment.delta, "interval half-width")
        ->capture_default_str();
    experiment_cmd->add_option("--samples", experiment.samples, "number of sampled graphs")
        ->capture_default_str();
    experiment_cmd->add_option("--seed", experiment.seed, "master seed")->capture_default_str();
    experiment_cmd->add_option("--budget", experiment.budget, "per-solve node budget")
        ->capture_default_str();
    experiment_cmd->add_option("--workers", experiment.workers, "parallel workers")
        ->capture_default_str();
    experiment_cmd->add_option("--slack", experiment.slack, "solver sweep-start slack")
        ->capture_default_str();
    experiment_cmd->add_option("--format", experiment.format, "csv|jsonl")
        ->capture_default_str();
    experiment_cmd->add_option("--out", experiment.out, "output path (default stdout)")
        ->capture_default_str();
    experiment_cmd->add_flag("--scan", experiment.scan, "emit the first-moment scan instead");
    experiment_cmd->add_option("--k-min", experiment.k_min, "scan lower bound")
        ->capture_default_str();
    experiment_cmd->add_option("--k-max", experiment.k_max, "scan upper bound (0 = min(n,64))")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (rates_cmd->parsed()) return run_rates(rates);
        if (predict_cmd->parsed()) return run_predict(predict);
        if (sample_cmd->parsed()) return run_sample(sample);
        if (solve_cmd->parsed()) return run_solve(solve);
        if (moments_cmd->parsed()) return run_moments(moments);
        if (experiment_cmd->parsed()) return run_experiment(experiment);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
