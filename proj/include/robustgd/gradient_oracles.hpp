#pragma once

#include <variant>

#include "robustgd/mean_estimators.hpp"
#include "robustgd/models.hpp"

namespace robustgd {

struct EmpiricalParams {};

/// Which aggregation rule turns per-sample gradients into a gradient estimate.
/// The confidence lives inside the Huber/Gmom parameters; the optimizer
/// rewrites it through with_confidence() when it splits samples.
struct GradientEstimatorSpec {
    std::variant<HuberParams, GmomParams, EmpiricalParams> kind = EmpiricalParams{};

    static GradientEstimatorSpec huber(HuberParams p) { return {p}; }
    static GradientEstimatorSpec gmom(GmomParams p) { return {p}; }
    static GradientEstimatorSpec empirical() { return {EmpiricalParams{}}; }

    /// Confidence of the chosen kind; 1 for Empirical, which has none.
    double confidence() const;
    GradientEstimatorSpec with_confidence(double delta) const;
    const char* kind_name() const;
    void validate() const;
};

/// Error contract g - grad R <= alpha |theta - theta*| + beta. Reporting only.
struct GradientErrorContract {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Row i is the loss gradient at theta on observation i.
SampleMatrix per_sample_gradients(const ModelSpec& model, const Vector& theta, const Dataset& batch);

Vector estimate_gradient(const ModelSpec& model, const Vector& theta, const Dataset& batch,
                         const GradientEstimatorSpec& spec);

/// Mean-aggregate an already-stacked gradient matrix with the chosen rule.
Vector aggregate(const SampleMatrix& gradients, const GradientEstimatorSpec& spec);

}  // namespace robustgd
