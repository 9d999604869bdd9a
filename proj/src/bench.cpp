#include "robustgd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "robustgd/baselines.hpp"
#include "robustgd/datagen.hpp"
#include "robustgd/selection.hpp"

namespace robustgd {

namespace {

constexpr std::uint64_t kTestSetStream = 0x7e57;
constexpr std::uint64_t kSelectionStream = 0x5e1ec7;

bool is_linear(ExperimentKind k) { return k != ExperimentKind::HuberLogistic; }

bool is_contaminated(ExperimentKind k) { return k != ExperimentKind::HeavyLinReg; }

// What one method produced on one problem.
struct MethodRun {
    std::vector<Vector> iterates;  // one entry for closed-form methods
    bool iterative = false;
};

RGDConfig make_rgd_config(const ExperimentConfig& cfg, const GeneratedProblem& problem) {
    RGDConfig rc;
    // Isotropic clean covariates give tau_l = tau_u = 1 for the squared loss.
    const double fallback = problem.model.family == Family::Logistic ? 4.0 : 1.0;
    rc.step_size = cfg.step_size.value_or(fallback);
    rc.max_iters = cfg.iters;
    rc.delta = cfg.delta;
    rc.split_samples = cfg.split_samples;
    rc.theta0 = Vector::Zero(problem.model.dim);
    rc.conv_tol = cfg.conv_tol;
    return rc;
}

// Step for estimators that do not remove outliers (plain and GMOM gradients on
// linear models): the default is capped at 1 / lambda_max(X'X / n), the
// smoothness constant of the empirical risk. An explicit step is left alone.
RGDConfig capped_step(const ExperimentConfig& cfg, const GeneratedProblem& problem, RGDConfig rc) {
    if (cfg.step_size || problem.model.family != Family::LinearRegression) return rc;
    const Matrix& x = problem.train.features;
    const Matrix second = x.transpose() * x / static_cast<double>(x.rows());
    const double top = Eigen::SelfAdjointEigenSolver<Matrix>(second, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    if (top > 0.0) rc.step_size = std::min(std::get<double>(rc.step_size), 1.0 / top);
    return rc;
}

HuberParams huber_params(const ExperimentConfig& cfg, double epsilon) {
    return HuberParams{epsilon, cfg.delta, cfg.trunc_const};
}

double design_epsilon(const ExperimentConfig& cfg, const GeneratedProblem& problem) {
    return problem.epsilon.value_or(cfg.huber_epsilon);
}

MethodRun from_trace(Trace trace) { return MethodRun{std::move(trace.iterates), true}; }

MethodRun from_theta(Vector theta) { return MethodRun{{std::move(theta)}, false}; }

struct Split {
    Dataset train;
    Dataset validation;
};

Split holdout_split(const Dataset& data, double fraction) {
    const Index n = data.size();
    const auto n_val = std::clamp<Index>(static_cast<Index>(std::llround(fraction * static_cast<double>(n))), 1,
                                         n - 1);
    return {data.slice(0, n - n_val), data.slice(n - n_val, n_val)};
}

struct CandidateFit {
    Candidate candidate;
    Trace trace;
};

std::vector<CandidateFit> fit_candidates(const ExperimentConfig& cfg, const GeneratedProblem& problem,
                                         const Dataset& train) {
    const RGDConfig rc = make_rgd_config(cfg, problem);
    std::vector<CandidateFit> fits;
    if (is_contaminated(cfg.experiment)) {
        for (double eps : cfg.eps_grid) {
            Trace t = run_rgd(problem.model, train, GradientEstimatorSpec::huber(huber_params(cfg, eps)), rc);
            Candidate c{t.final_iterate(), eps, cfg.delta};
            fits.push_back({std::move(c), std::move(t)});
        }
    } else {
        for (double d : cfg.delta_grid) {
            GmomParams gp;
            gp.delta = d;
            Trace t = run_rgd(problem.model, train, GradientEstimatorSpec::gmom(gp), capped_step(cfg, problem, rc));
            Candidate c{t.final_iterate(), 0.0, d};
            fits.push_back({std::move(c), std::move(t)});
        }
    }
    return fits;
}

std::size_t select_candidate(const ExperimentConfig& cfg, const GeneratedProblem& problem,
                             const std::vector<CandidateFit>& fits, const Dataset& validation,
                             bool tournament, std::uint64_t seed) {
    std::vector<Candidate> candidates;
    for (const auto& f : fits) candidates.push_back(f.candidate);
    if (tournament) {
        TournamentConfig tc;
        tc.mc_samples = cfg.mc_samples;
        tc.seed = seed;
        return tournament_select(candidates, validation, problem.model, tc);
    }
    return holdout_risk_select(candidates, validation, problem.model);
}

MethodRun run_method(const std::string& method, const ExperimentConfig& cfg, const GeneratedProblem& problem,
                     std::uint64_t seed) {
    const ModelSpec& model = problem.model;
    const Dataset& data = problem.train;
    const RGDConfig rc = make_rgd_config(cfg, problem);

    if (method == "rgd-huber") {
        const auto spec = GradientEstimatorSpec::huber(huber_params(cfg, design_epsilon(cfg, problem)));
        return from_trace(run_rgd(model, data, spec, rc));
    }
    if (method == "rgd-gmom") {
        GmomParams gp;
        gp.delta = cfg.gmom_delta;
        return from_trace(run_rgd(model, data, GradientEstimatorSpec::gmom(gp), capped_step(cfg, problem, rc)));
    }
    if (method == "ols-gd" || method == "mle-gd") {
        return from_trace(run_rgd(model, data, GradientEstimatorSpec::empirical(), capped_step(cfg, problem, rc)));
    }
    if (method == "ols") return from_theta(ols(data));
    if (method == "ridge") return from_theta(ridge(data, cfg.ridge_lambda));
    if (method == "torrent") {
        TorrentConfig tc;
        tc.keep_fraction = cfg.torrent_keep.value_or(1.0 - problem.epsilon.value_or(0.1));
        tc.max_rounds = cfg.torrent_rounds;
        return from_theta(torrent(data, tc).theta);
    }
    if (method == "plugin") {
        return from_theta(plugin_linreg(data, huber_params(cfg, design_epsilon(cfg, problem))));
    }
    if (method == "tournament-gd" || method == "holdout-gd" || method == "oracle-gd") {
        const Split split = holdout_split(data, cfg.validation_fraction);
        if (method == "oracle-gd") {
            if (is_contaminated(cfg.experiment)) {
                const auto spec = GradientEstimatorSpec::huber(huber_params(cfg, design_epsilon(cfg, problem)));
                return from_trace(run_rgd(model, split.train, spec, rc));
            }
            const auto spec = GradientEstimatorSpec::gmom(GmomParams{cfg.gmom_delta, 1e-10, 10000});
            return from_trace(run_rgd(model, split.train, spec, capped_step(cfg, problem, rc)));
        }
        auto fits = fit_candidates(cfg, problem, split.train);
        const std::size_t chosen = select_candidate(cfg, problem, fits, split.validation,
                                                    method == "tournament-gd", derive_seed(seed, kSelectionStream));
        return from_trace(std::move(fits[chosen].trace));
    }
    throw std::invalid_argument("unknown method '" + method + "'");
}

std::vector<TrialResult> run_trial(const ExperimentConfig& cfg, const GridPoint& point, std::size_t grid_index,
                                   std::size_t trial) {
    const std::uint64_t seed = trial_seed(cfg.seed, grid_index, trial);
    const GeneratedProblem problem = generate_problem(cfg, point, seed);
    const Vector& theta_star = problem.model.truth->theta_star;

    std::optional<double> ols_error;
    if (is_linear(cfg.experiment)) ols_error = param_error(ols(problem.train), theta_star);

    TrialResult base;
    base.experiment = experiment_name(cfg.experiment);
    base.p = problem.model.dim;
    base.n = problem.n;
    base.epsilon = problem.epsilon;
    base.beta = problem.beta;
    base.sigma = problem.sigma;
    base.trial = trial;

    std::vector<TrialResult> rows;
    for (const auto& method : cfg.methods) {
        const auto start = std::chrono::steady_clock::now();
        const MethodRun run = run_method(method, cfg, problem, seed);
        const double elapsed =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

        const std::size_t last = run.iterates.size() - 1;
        const std::size_t first = cfg.full_trace ? 0 : last;
        for (std::size_t t = first; t <= last; ++t) {
            TrialResult r = base;
            r.method = method;
            if (run.iterative) r.iter = static_cast<int>(t);
            r.param_error = param_error(run.iterates[t], theta_star);
            if (problem.test) r.zero_one_error = zero_one_error(run.iterates[t], *problem.test);
            if (t == last) {
                if (ols_error && r.param_error > 0.0) r.rel_eff_vs_ols = rel_eff(r.param_error, *ols_error);
                if (cfg.record_runtime) r.runtime_ms = elapsed;
            }
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

template <class T>
std::vector<T> as_counts(const std::vector<double>& values, const char* what) {
    std::vector<T> out;
    for (double v : values) {
        if (!(v >= 1.0) || v != std::floor(v)) {
            throw std::invalid_argument(std::string("grid ") + what + " values must be positive integers");
        }
        out.push_back(static_cast<T>(v));
    }
    return out;
}

}  // namespace

const char* experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::HuberLinReg: return "huber-linreg";
        case ExperimentKind::HuberLogistic: return "huber-logistic";
        case ExperimentKind::HeavyLinReg: return "heavy-linreg";
        case ExperimentKind::PluginCompare: return "plugin-compare";
        case ExperimentKind::Tournament: return "tournament";
    }
    return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
    for (auto k : {ExperimentKind::HuberLinReg, ExperimentKind::HuberLogistic, ExperimentKind::HeavyLinReg,
                   ExperimentKind::PluginCompare, ExperimentKind::Tournament}) {
        if (name == experiment_name(k)) return k;
    }
    throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::vector<std::string> supported_methods(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::HuberLinReg:
        case ExperimentKind::PluginCompare:
        case ExperimentKind::Tournament:
            return {"rgd-huber", "rgd-gmom", "ols-gd", "ols", "ridge", "torrent",
                    "plugin", "tournament-gd", "holdout-gd", "oracle-gd"};
        case ExperimentKind::HuberLogistic:
            return {"rgd-huber", "rgd-gmom", "mle-gd", "tournament-gd", "holdout-gd", "oracle-gd"};
        case ExperimentKind::HeavyLinReg:
            return {"rgd-gmom", "rgd-huber", "ols", "ols-gd", "ridge", "torrent", "holdout-gd", "oracle-gd"};
    }
    return {};
}

std::uint64_t trial_seed(std::uint64_t global, std::size_t grid_index, std::size_t trial) {
    return derive_seed(global, grid_index, trial);
}

void ExperimentConfig::validate() const {
    if (methods.empty()) throw std::invalid_argument("experiment needs at least one method");
    const auto allowed = supported_methods(experiment);
    for (const auto& m : methods) {
        if (std::find(allowed.begin(), allowed.end(), m) == allowed.end()) {
            throw std::invalid_argument("unknown method '" + m + "' for experiment " + experiment_name(experiment));
        }
    }
    validate_settings();
}

void ExperimentConfig::validate_settings() const {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (iters < 1) throw std::invalid_argument("iters must be at least 1");
    if (step_size && !(*step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(gmom_delta > 0.0 && gmom_delta < 1.0)) throw std::invalid_argument("gmom_delta must lie in (0, 1)");
    if (!(trunc_const > 0.0)) throw std::invalid_argument("trunc_const must be positive");
    if (!(huber_epsilon >= 0.0 && huber_epsilon < 0.5)) throw std::invalid_argument("huber_epsilon must lie in [0, 1/2)");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
        throw std::invalid_argument("validation_fraction must lie in (0, 1)");
    }
    if (mc_samples < 1) throw std::invalid_argument("mc_samples must be positive");
    if (eps_grid.empty() || delta_grid.empty()) throw std::invalid_argument("selection grids must be nonempty");
    for (double e : eps_grid) {
        if (!(e >= 0.0 && e < 0.5)) throw std::invalid_argument("eps_grid values must lie in [0, 1/2)");
    }
    for (double d : delta_grid) {
        if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("delta_grid values must lie in (0, 1)");
    }
    for (double e : grid_epsilon) {
        if (!(e >= 0.0 && e < 0.5)) throw std::invalid_argument("grid epsilon must lie in [0, 1/2)");
    }
    for (double b : grid_beta) {
        if (!(b > 2.0)) throw std::invalid_argument("grid beta must exceed 2");
    }
    for (double s : grid_sigma) {
        if (!(s >= 0.0)) throw std::invalid_argument("grid sigma must be nonnegative");
    }
    if (threads < 0) throw std::invalid_argument("threads must be nonnegative");
    if (torrent_keep && !(*torrent_keep > 0.0 && *torrent_keep <= 1.0)) {
        throw std::invalid_argument("torrent keep_fraction must lie in (0, 1]");
    }
    (void)grid();
}

std::vector<GridPoint> ExperimentConfig::grid() const {
    const bool heavy = experiment == ExperimentKind::HeavyLinReg;
    const auto ps = as_counts<Index>(grid_p.empty() ? std::vector<double>{heavy ? 32.0 : 16.0} : grid_p, "p");
    const auto ns = as_counts<std::size_t>(grid_n, "n");

    std::vector<std::optional<double>> eps_axis, beta_axis, sigma_axis;
    std::vector<std::optional<std::size_t>> n_axis;
    const auto lift = [](const std::vector<double>& v, auto& axis) {
        for (double x : v) axis.emplace_back(x);
        if (axis.empty()) axis.emplace_back(std::nullopt);
    };
    lift(grid_epsilon, eps_axis);
    lift(grid_beta, beta_axis);
    lift(grid_sigma, sigma_axis);
    for (auto v : ns) n_axis.emplace_back(v);
    if (n_axis.empty()) n_axis.emplace_back(std::nullopt);

    std::vector<GridPoint> out;
    for (Index p : ps)
        for (const auto& e : eps_axis)
            for (const auto& b : beta_axis)
                for (const auto& s : sigma_axis)
                    for (const auto& n : n_axis) out.push_back(GridPoint{p, e, b, s, n});
    return out;
}

ExperimentConfig ExperimentConfig::from_config(const Config& c) {
    static const std::vector<std::string> known = {
        "experiment", "methods", "trials", "seed",
        "grid.p", "grid.epsilon", "grid.beta", "grid.sigma", "grid.n",
        "design.max_n", "design.test_n", "design.logistic_radius",
        "rgd.iters", "rgd.step_size", "rgd.delta", "rgd.trunc_const", "rgd.gmom_delta",
        "rgd.huber_epsilon", "rgd.split_samples", "rgd.conv_tol",
        "baselines.ridge_lambda", "baselines.torrent_keep", "baselines.torrent_rounds",
        "selection.eps_grid", "selection.delta_grid", "selection.validation_fraction",
        "selection.mc_samples",
        "output.full_trace", "output.record_runtime", "run.threads"};
    for (const auto& k : c.keys()) {
        if (std::find(known.begin(), known.end(), k) == known.end()) {
            throw std::invalid_argument("unknown config key '" + k + "'");
        }
    }
    if (!c.has("experiment")) throw std::invalid_argument("config needs an 'experiment' key");

    ExperimentConfig e;
    e.experiment = parse_experiment(c.string("experiment", ""));
    e.methods = c.strings("methods");
    e.trials = static_cast<int>(c.integer("trials", e.trials));
    e.seed = c.unsigned_integer("seed", e.seed);
    e.grid_p = c.numbers("grid.p");
    e.grid_epsilon = c.numbers("grid.epsilon");
    e.grid_beta = c.numbers("grid.beta");
    e.grid_sigma = c.numbers("grid.sigma");
    e.grid_n = c.numbers("grid.n");
    e.max_n = static_cast<std::size_t>(c.unsigned_integer("design.max_n", e.max_n));
    e.test_n = static_cast<std::size_t>(c.unsigned_integer("design.test_n", e.test_n));
    e.logistic_radius = c.number("design.logistic_radius", e.logistic_radius);
    e.iters = static_cast<int>(c.integer("rgd.iters", e.iters));
    if (c.has("rgd.step_size")) e.step_size = c.number("rgd.step_size", 1.0);
    e.delta = c.number("rgd.delta", e.delta);
    e.trunc_const = c.number("rgd.trunc_const", e.trunc_const);
    e.gmom_delta = c.number("rgd.gmom_delta", e.gmom_delta);
    e.huber_epsilon = c.number("rgd.huber_epsilon", e.huber_epsilon);
    e.split_samples = c.boolean("rgd.split_samples", e.split_samples);
    e.conv_tol = c.number("rgd.conv_tol", e.conv_tol);
    e.ridge_lambda = c.number("baselines.ridge_lambda", e.ridge_lambda);
    if (c.has("baselines.torrent_keep")) e.torrent_keep = c.number("baselines.torrent_keep", 0.9);
    e.torrent_rounds = static_cast<int>(c.integer("baselines.torrent_rounds", e.torrent_rounds));
    if (c.has("selection.eps_grid")) e.eps_grid = c.numbers("selection.eps_grid");
    if (c.has("selection.delta_grid")) e.delta_grid = c.numbers("selection.delta_grid");
    e.validation_fraction = c.number("selection.validation_fraction", e.validation_fraction);
    e.mc_samples = static_cast<int>(c.integer("selection.mc_samples", e.mc_samples));
    e.full_trace = c.boolean("output.full_trace", e.full_trace);
    e.record_runtime = c.boolean("output.record_runtime", e.record_runtime);
    e.threads = static_cast<int>(c.integer("run.threads", e.threads));
    e.validate_settings();
    return e;
}

GeneratedProblem generate_problem(const ExperimentConfig& cfg, const GridPoint& point, std::uint64_t seed) {
    GeneratedProblem out;
    const Index p = point.p;
    switch (cfg.experiment) {
        case ExperimentKind::HuberLinReg:
        case ExperimentKind::PluginCompare:
        case ExperimentKind::Tournament: {
            HuberLinRegDesign d;
            d.p = p;
            d.epsilon = point.epsilon.value_or(0.1);
            const double sigma = point.sigma.value_or(std::sqrt(0.1));
            d.sigma2 = sigma * sigma;
            d.n = point.n ? *point.n
                          : (d.epsilon > 0.0 ? std::min(default_contaminated_n(p, d.epsilon), cfg.max_n) : cfg.max_n);
            d.seed = seed;
            out.train = gen_huber_linreg(d);
            out.model = ModelSpec::linear(p, Truth{d.resolved_theta(), sigma});
            out.epsilon = d.epsilon;
            out.sigma = sigma;
            out.n = *d.n;
            break;
        }
        case ExperimentKind::HuberLogistic: {
            HuberLogisticDesign d;
            d.p = p;
            d.epsilon = point.epsilon.value_or(0.1);
            d.n = point.n ? *point.n
                          : (d.epsilon > 0.0 ? std::min(default_contaminated_n(p, d.epsilon), cfg.max_n) : cfg.max_n);
            d.seed = seed;
            out.train = gen_huber_logistic(d);
            const Vector theta = d.resolved_theta();
            out.model = ModelSpec::logistic(p, Truth{theta, 0.0}, cfg.logistic_radius);
            out.test = gen_clean_logistic(p, cfg.test_n, theta, derive_seed(seed, kTestSetStream));
            out.epsilon = d.epsilon;
            out.n = *d.n;
            break;
        }
        case ExperimentKind::HeavyLinReg: {
            ParetoLinRegDesign d;
            d.p = p;
            d.n = point.n.value_or(512);
            d.sigma = point.sigma.value_or(0.75);
            d.beta = point.beta.value_or(3.0);
            d.seed = seed;
            out.train = gen_pareto_linreg(d);
            out.model = ModelSpec::linear(p, Truth{d.resolved_theta(), d.sigma});
            out.beta = d.beta;
            out.sigma = d.sigma;
            out.n = d.n;
            break;
        }
    }
    return out;
}

std::vector<TrialResult> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto points = cfg.grid();
    const std::size_t trials = static_cast<std::size_t>(cfg.trials);
    const std::size_t tasks = points.size() * trials;

    std::vector<std::vector<TrialResult>> buffers(tasks);
    std::vector<std::exception_ptr> errors(tasks);
    std::atomic<std::size_t> next{0};

    const auto worker = [&] {
        for (std::size_t i = next++; i < tasks; i = next++) {
            try {
                buffers[i] = run_trial(cfg, points[i / trials], i / trials, i % trials);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(tasks, 1)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<TrialResult> rows;
    for (auto& b : buffers) {
        rows.insert(rows.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
    }
    return rows;
}

void write_results_file(const std::string& path, const std::vector<TrialResult>& rows, OutputFormat format) {
    const std::string tmp = path + ".partial";
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot open " + path + " for writing");
            if (format == OutputFormat::Json) {
                write_results_json(out, rows);
            } else {
                write_results_csv(out, rows);
            }
            out.flush();
            if (!out) throw std::runtime_error("failed writing " + path);
        }
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
}

std::vector<SelectionEntry> run_selection(const ExperimentConfig& cfg, const std::string& selector) {
    cfg.validate_settings();
    if (selector != "tournament" && selector != "holdout") {
        throw std::invalid_argument("selector must be 'tournament' or 'holdout'");
    }
    const auto points = cfg.grid();
    const std::uint64_t seed = trial_seed(cfg.seed, 0, 0);
    const GeneratedProblem problem = generate_problem(cfg, points.front(), seed);
    const Split split = holdout_split(problem.train, cfg.validation_fraction);
    const auto fits = fit_candidates(cfg, problem, split.train);
    const std::size_t chosen = select_candidate(cfg, problem, fits, split.validation, selector == "tournament",
                                                derive_seed(seed, kSelectionStream));

    std::vector<SelectionEntry> out;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const auto& c = fits[i].candidate;
        out.push_back({c.epsilon, c.delta, population_param_error(problem.model, c.theta_hat), i == chosen});
    }
    return out;
}

}  // namespace robustgd
