#include "robustgd/gradient_oracles.hpp"

#include <stdexcept>

namespace robustgd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double GradientEstimatorSpec::confidence() const {
    return std::visit(overloaded{[](const HuberParams& p) { return p.delta; },
                                 [](const GmomParams& p) { return p.delta; },
                                 [](const EmpiricalParams&) { return 1.0; }},
                      kind);
}

GradientEstimatorSpec GradientEstimatorSpec::with_confidence(double delta) const {
    GradientEstimatorSpec out = *this;
    std::visit(overloaded{[&](HuberParams& p) { p.delta = delta; },
                          [&](GmomParams& p) { p.delta = delta; },
                          [](EmpiricalParams&) {}},
               out.kind);
    return out;
}

const char* GradientEstimatorSpec::kind_name() const {
    return std::visit(overloaded{[](const HuberParams&) { return "huber"; },
                                 [](const GmomParams&) { return "gmom"; },
                                 [](const EmpiricalParams&) { return "empirical"; }},
                      kind);
}

void GradientEstimatorSpec::validate() const {
    std::visit(overloaded{[](const HuberParams& p) { p.validate(); },
                          [](const GmomParams& p) { p.validate(); },
                          [](const EmpiricalParams&) {}},
               kind);
}

SampleMatrix per_sample_gradients(const ModelSpec& model, const Vector& theta, const Dataset& batch) {
    if (theta.size() != model.dim || batch.dim() != model.dim) {
        throw std::invalid_argument("dimension mismatch");
    }
    if (batch.size() < 1) throw std::invalid_argument("empty batch");
    if (!theta.allFinite()) throw std::invalid_argument("theta contains non-finite values");

    if (model.family != Family::GaussianExpFamily && batch.response.size() != batch.size()) {
        throw std::invalid_argument("batch is missing responses");
    }

    switch (model.family) {
        case Family::LinearRegression: {
            const Vector resid = batch.features * theta - batch.response;
            return SampleMatrix(batch.features.array().colwise() * resid.array());
        }
        case Family::Logistic: {
            const Vector scale = (batch.features * theta).unaryExpr(&sigmoid) - batch.response;
            return SampleMatrix(batch.features.array().colwise() * scale.array());
        }
        case Family::GaussianExpFamily:
            return SampleMatrix((-batch.features).rowwise() + theta.transpose());
    }
    throw std::logic_error("unhandled family");
}

Vector aggregate(const SampleMatrix& gradients, const GradientEstimatorSpec& spec) {
    return std::visit(overloaded{[&](const HuberParams& p) { return huber_mean(gradients, p); },
                                 [&](const GmomParams& p) { return gmom_mean(gradients, p); },
                                 [&](const EmpiricalParams&) { return empirical_mean(gradients); }},
                      spec.kind);
}

Vector estimate_gradient(const ModelSpec& model, const Vector& theta, const Dataset& batch,
                         const GradientEstimatorSpec& spec) {
    return aggregate(per_sample_gradients(model, theta, batch), spec);
}

}  // namespace robustgd
