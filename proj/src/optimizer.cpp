#include "robustgd/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace robustgd {

namespace {

constexpr double kDivergenceNorm = 1e12;

}  // namespace

double resolve_step(const StepSize& step) {
    if (const auto* fixed = std::get_if<double>(&step)) {
        if (!(*fixed > 0.0) || !std::isfinite(*fixed)) throw std::invalid_argument("step size must be positive");
        return *fixed;
    }
    const auto& bounds = std::get<AutoStep>(step).bounds;
    bounds.validate();
    return 2.0 / (bounds.tau_l + bounds.tau_u);
}

void RGDConfig::validate() const {
    resolve_step(step_size);
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(conv_tol >= 0.0)) throw std::invalid_argument("conv_tol must be nonnegative");
    if (!theta0.allFinite()) throw std::invalid_argument("theta0 contains non-finite values");
}

std::vector<Dataset> split_batches(const Dataset& data, int batches) {
    if (batches < 1) throw std::invalid_argument("batch count must be positive");
    if (data.size() < batches) throw std::invalid_argument("too few samples for T iterations");
    const Index size = data.size() / batches;
    std::vector<Dataset> out;
    out.reserve(static_cast<std::size_t>(batches));
    for (Index t = 0; t < batches; ++t) out.push_back(data.slice(t * size, size));
    return out;
}

Trace run_rgd(const ModelSpec& model, const Dataset& data, const GradientEstimatorSpec& spec,
              const RGDConfig& config) {
    model.validate();
    config.validate();
    spec.validate();
    data.validate();
    if (data.dim() != model.dim) throw std::invalid_argument("dimension mismatch");

    const double eta = resolve_step(config.step_size);
    const int T = config.max_iters;

    std::vector<Dataset> batches;
    GradientEstimatorSpec step_spec;
    if (config.split_samples) {
        batches = split_batches(data, T);
        step_spec = spec.with_confidence(config.delta / T);
    } else {
        step_spec = spec.with_confidence(config.delta);
    }

    Vector theta = config.theta0.size() == 0 ? Vector::Zero(model.dim) : config.theta0;
    if (theta.size() != model.dim) throw std::invalid_argument("dimension mismatch");
    theta = project(model.domain, theta);

    Trace trace;
    const auto record = [&](const Vector& t) {
        trace.iterates.push_back(t);
        if (model.truth) trace.param_errors.push_back(population_param_error(model, t));
    };
    record(theta);

    for (int t = 0; t < T; ++t) {
        const Dataset& batch = config.split_samples ? batches[static_cast<std::size_t>(t)] : data;
        const Vector g = estimate_gradient(model, theta, batch, step_spec);
        Vector next = project(model.domain, theta - eta * g);
        if (!next.allFinite() || next.norm() > kDivergenceNorm) {
            throw std::runtime_error("divergence");
        }
        const double moved = (next - theta).norm();
        trace.grad_norms.push_back(g.norm());
        theta = std::move(next);
        record(theta);
        if (moved < config.conv_tol) break;
    }
    return trace;
}

double contraction_kappa(const CurvatureBounds& bounds, double eta, double alpha) {
    bounds.validate();
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
    const double radicand = 1.0 - 2.0 * eta * bounds.tau_l * bounds.tau_u / (bounds.tau_l + bounds.tau_u);
    if (radicand < 0.0) throw std::invalid_argument("step size too large");
    return std::sqrt(radicand) + eta * alpha;
}

int required_iterations(double kappa, double beta, double init_dist) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (kappa >= 1.0) throw std::invalid_argument("not contractive");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (!(init_dist > 0.0)) throw std::invalid_argument("init_dist must be positive");
    const double arg = (1.0 - kappa) * init_dist / beta;
    if (arg <= 1.0) return 1;
    const double t = std::log(arg) / std::log(1.0 / kappa);
    return std::max(1, static_cast<int>(std::ceil(t)));
}

}  // namespace robustgd
