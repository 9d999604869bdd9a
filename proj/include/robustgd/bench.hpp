#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robustgd/config.hpp"
#include "robustgd/metrics.hpp"
#include "robustgd/optimizer.hpp"
#include "robustgd/results_io.hpp"

namespace robustgd {

enum class ExperimentKind { HuberLinReg, HuberLogistic, HeavyLinReg, PluginCompare, Tournament };

const char* experiment_name(ExperimentKind k);
ExperimentKind parse_experiment(const std::string& name);

/// One cell of the experiment grid. Unset axes take the experiment default.
struct GridPoint {
    Index p = 0;
    std::optional<double> epsilon;
    std::optional<double> beta;
    std::optional<double> sigma;
    std::optional<std::size_t> n;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::HuberLinReg;
    std::vector<std::string> methods;
    int trials = 20;
    std::uint64_t seed = 0;

    // Grid axes; an empty axis means the experiment default.
    std::vector<double> grid_p;
    std::vector<double> grid_epsilon;
    std::vector<double> grid_beta;
    std::vector<double> grid_sigma;
    std::vector<double> grid_n;

    /// Cap on the 10 p / eps^2 default sample count.
    std::size_t max_n = 100000;

    // Optimiser.
    int iters = 200;
    std::optional<double> step_size;  // unset: experiment default
    double delta = 0.1;
    double trunc_const = 2.0;
    double gmom_delta = 0.01;
    double huber_epsilon = 0.1;  // Huber estimator epsilon when the design has none
    bool split_samples = false;
    double conv_tol = 1e-8;

    double logistic_radius = 100.0;
    std::size_t test_n = 10000;

    double ridge_lambda = 1.0;
    std::optional<double> torrent_keep;  // unset: 1 - epsilon, or 0.9 without epsilon
    int torrent_rounds = 100;

    // Hyperparameter selection.
    std::vector<double> eps_grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.4};
    std::vector<double> delta_grid{0.2, 0.1, 0.05, 0.01, 0.001};
    double validation_fraction = 0.2;
    int mc_samples = 10000;

    /// Record every iterate (true) or only the final one.
    bool full_trace = true;
    /// Wall-clock timings break byte-level reproducibility; off by default.
    bool record_runtime = false;
    int threads = 0;  // 0: hardware concurrency

    /// Throws on unknown methods, methods the experiment cannot run, or bad values.
    void validate() const;
    /// Everything validate() checks except the method list.
    void validate_settings() const;
    std::vector<GridPoint> grid() const;

    static ExperimentConfig from_config(const Config& cfg);
};

std::vector<std::string> supported_methods(ExperimentKind k);

/// Data, model and auxiliary sets for one grid point and seed.
struct GeneratedProblem {
    ModelSpec model;
    Dataset train;
    std::optional<Dataset> test;  // clean held-out set (logistic)
    std::optional<double> epsilon;
    std::optional<double> beta;
    std::optional<double> sigma;
    std::size_t n = 0;
};

GeneratedProblem generate_problem(const ExperimentConfig& cfg, const GridPoint& point, std::uint64_t seed);

/// Seed for one (grid point, trial) pair; independent of the method list.
std::uint64_t trial_seed(std::uint64_t global, std::size_t grid_index, std::size_t trial);

/// Every grid point x trial x method, ordered by (grid, trial, method).
std::vector<TrialResult> run_experiment(const ExperimentConfig& cfg);

enum class OutputFormat { Csv, Json };

/// Writes through a temporary file and renames; nothing is left on failure.
void write_results_file(const std::string& path, const std::vector<TrialResult>& rows, OutputFormat format);

struct SelectionEntry {
    double epsilon = 0.0;
    double delta = 0.0;
    double param_error = 0.0;
    bool selected = false;
};

/// Fit RGD over the configured hyperparameter grid on a training split and
/// pick one with the tournament (contamination experiments) or holdout risk
/// (heavy-tailed). Uses the first grid point.
std::vector<SelectionEntry> run_selection(const ExperimentConfig& cfg, const std::string& selector);

}  // namespace robustgd
