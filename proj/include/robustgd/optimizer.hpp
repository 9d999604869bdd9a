#pragma once

#include <variant>
#include <vector>

#include "robustgd/gradient_oracles.hpp"
#include "robustgd/models.hpp"

namespace robustgd {

/// Step size resolved from curvature bounds as 2 / (tau_l + tau_u).
struct AutoStep {
    CurvatureBounds bounds;
};
using StepSize = std::variant<double, AutoStep>;

double resolve_step(const StepSize& step);

struct RGDConfig {
    StepSize step_size = 1.0;
    int max_iters = 200;
    /// Overall confidence. Each iteration gets delta / T when splitting.
    double delta = 0.1;
    bool split_samples = false;
    /// Empty means the zero vector.
    Vector theta0;
    double conv_tol = 1e-8;

    void validate() const;
};

struct Trace {
    std::vector<Vector> iterates;
    /// Filled only when the model carries ground truth; aligned with iterates.
    std::vector<double> param_errors;
    /// Norm of the gradient estimate used for step t (one fewer than iterates).
    std::vector<double> grad_norms;

    const Vector& final_iterate() const { return iterates.back(); }
    int iterations() const { return static_cast<int>(iterates.size()) - 1; }
};

/// T consecutive batches of floor(n/T) observations; the remainder is unused.
std::vector<Dataset> split_batches(const Dataset& data, int batches);

/// Projected gradient descent with a pluggable gradient estimator.
Trace run_rgd(const ModelSpec& model, const Dataset& data, const GradientEstimatorSpec& spec,
              const RGDConfig& config);

/// sqrt(1 - 2 eta tau_l tau_u / (tau_l + tau_u)) + eta alpha.
double contraction_kappa(const CurvatureBounds& bounds, double eta, double alpha);

/// Smallest T >= 1 with T >= log_{1/kappa}((1 - kappa) init_dist / beta).
int required_iterations(double kappa, double beta, double init_dist);

}  // namespace robustgd
