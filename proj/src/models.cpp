#include "robustgd/models.hpp"

#include <cmath>
#include <stdexcept>

namespace robustgd {

namespace {

void check_dim(const ModelSpec& model, const Vector& theta, Index obs_dim) {
    if (theta.size() != model.dim || obs_dim != model.dim) {
        throw std::invalid_argument("dimension mismatch");
    }
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::LinearRegression: return "linear";
        case Family::Logistic: return "logistic";
        case Family::GaussianExpFamily: return "gaussian";
    }
    return "unknown";
}

void ModelSpec::validate() const {
    if (dim < 1) throw std::invalid_argument("model dimension must be positive");
    if (const auto* ball = std::get_if<L2Ball>(&domain)) {
        if (!(ball->radius > 0.0) || !std::isfinite(ball->radius)) {
            throw std::invalid_argument("ball radius must be finite and positive");
        }
    }
    if (truth && truth->theta_star.size() != dim) {
        throw std::invalid_argument("dimension mismatch");
    }
}

ModelSpec ModelSpec::linear(Index dim, std::optional<Truth> truth) {
    return ModelSpec{Family::LinearRegression, Unconstrained{}, dim, std::move(truth)};
}

ModelSpec ModelSpec::logistic(Index dim, std::optional<Truth> truth, double radius) {
    return ModelSpec{Family::Logistic, L2Ball{radius}, dim, std::move(truth)};
}

ModelSpec ModelSpec::gaussian(Index dim, std::optional<Truth> truth, ParameterDomain domain) {
    return ModelSpec{Family::GaussianExpFamily, domain, dim, std::move(truth)};
}

void CurvatureBounds::validate() const {
    if (!(tau_l > 0.0 && tau_l <= tau_u)) {
        throw std::invalid_argument("curvature bounds need 0 < tau_l <= tau_u");
    }
}

Observation Dataset::observation(Index i) const {
    return Observation{features.row(i).transpose(), has_response() ? response(i) : 0.0};
}

Dataset Dataset::slice(Index begin, Index count) const {
    Dataset out;
    out.features = features.middleRows(begin, count);
    if (has_response()) out.response = response.segment(begin, count);
    return out;
}

Dataset Dataset::select(const std::vector<Index>& rows) const {
    Dataset out;
    out.features.resize(static_cast<Index>(rows.size()), dim());
    if (has_response()) out.response.resize(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = static_cast<Index>(i);
        out.features.row(r) = features.row(rows[i]);
        if (has_response()) out.response(r) = response(rows[i]);
    }
    return out;
}

void Dataset::validate() const {
    if (size() < 1 || dim() < 1) throw std::invalid_argument("empty dataset");
    if (has_response() && response.size() != size()) {
        throw std::invalid_argument("response length does not match covariate rows");
    }
    if (!features.allFinite() || !response.allFinite()) {
        throw std::invalid_argument("dataset contains non-finite values");
    }
}

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double loss(const ModelSpec& model, const Vector& theta, const Observation& obs) {
    check_dim(model, theta, obs.x.size());
    switch (model.family) {
        case Family::LinearRegression: {
            const double r = obs.y - obs.x.dot(theta);
            return 0.5 * r * r;
        }
        case Family::Logistic: {
            const double t = obs.x.dot(theta);
            return -obs.y * t + softplus(t);
        }
        case Family::GaussianExpFamily:
            return -obs.x.dot(theta) + 0.5 * theta.squaredNorm();
    }
    throw std::logic_error("unhandled family");
}

Vector gradient(const ModelSpec& model, const Vector& theta, const Observation& obs) {
    check_dim(model, theta, obs.x.size());
    switch (model.family) {
        case Family::LinearRegression: return (obs.x.dot(theta) - obs.y) * obs.x;
        case Family::Logistic: return (sigmoid(obs.x.dot(theta)) - obs.y) * obs.x;
        case Family::GaussianExpFamily: return theta - obs.x;
    }
    throw std::logic_error("unhandled family");
}

Vector losses(const ModelSpec& model, const Vector& theta, const Dataset& data) {
    check_dim(model, theta, data.dim());
    switch (model.family) {
        case Family::LinearRegression: {
            const Vector r = data.response - data.features * theta;
            return 0.5 * r.array().square();
        }
        case Family::Logistic: {
            const Vector t = data.features * theta;
            return (-data.response.array() * t.array()) + t.unaryExpr(&softplus).array();
        }
        case Family::GaussianExpFamily: {
            const double a = 0.5 * theta.squaredNorm();
            return (-(data.features * theta)).array() + a;
        }
    }
    throw std::logic_error("unhandled family");
}

double empirical_risk(const ModelSpec& model, const Vector& theta, const Dataset& data) {
    return losses(model, theta, data).mean();
}

Vector project(const ParameterDomain& domain, const Vector& theta) {
    if (const auto* ball = std::get_if<L2Ball>(&domain)) {
        const double norm = theta.norm();
        if (norm > ball->radius) return theta * (ball->radius / norm);
    }
    return theta;
}

bool in_domain(const ParameterDomain& domain, const Vector& theta, double slack) {
    if (const auto* ball = std::get_if<L2Ball>(&domain)) {
        return theta.norm() <= ball->radius * (1.0 + slack);
    }
    return true;
}

double population_param_error(const ModelSpec& model, const Vector& theta) {
    if (!model.truth) throw std::invalid_argument("model has no ground truth");
    if (theta.size() != model.truth->theta_star.size()) throw std::invalid_argument("dimension mismatch");
    return (theta - model.truth->theta_star).norm();
}

Vector plugin_linreg(const Dataset& data, const HuberParams& params) {
    data.validate();
    if (!data.has_response()) throw std::invalid_argument("plugin_linreg needs responses");
    Matrix xy = data.features.array().colwise() * data.response.array();
    return huber_mean(SampleMatrix(std::move(xy)), params);
}

Vector plugin_expfam(const Dataset& data, const HuberParams& params, const ParameterDomain& domain) {
    data.validate();
    return project(domain, huber_mean(SampleMatrix(data.features), params));
}

}  // namespace robustgd
