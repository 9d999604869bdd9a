#pragma once

#include <optional>
#include <variant>

#include "robustgd/mean_estimators.hpp"
#include "robustgd/sample_matrix.hpp"

namespace robustgd {

enum class Family { LinearRegression, Logistic, GaussianExpFamily };

const char* family_name(Family f);

struct Unconstrained {};
struct L2Ball {
    double radius = 100.0;
};
using ParameterDomain = std::variant<Unconstrained, L2Ball>;

/// Ground truth carried alongside a model so runs can report parameter error.
/// Covariates are assumed isotropic (Sigma = I) wherever a covariance is needed.
struct Truth {
    Vector theta_star;
    double noise_sigma = 0.0;
};

struct ModelSpec {
    Family family = Family::LinearRegression;
    ParameterDomain domain = Unconstrained{};
    Index dim = 1;
    std::optional<Truth> truth;

    void validate() const;

    static ModelSpec linear(Index dim, std::optional<Truth> truth = std::nullopt);
    /// Bounded domain, radius 100 by default.
    static ModelSpec logistic(Index dim, std::optional<Truth> truth = std::nullopt,
                              double radius = 100.0);
    static ModelSpec gaussian(Index dim, std::optional<Truth> truth = std::nullopt,
                              ParameterDomain domain = Unconstrained{});
};

struct CurvatureBounds {
    double tau_l = 1.0;
    double tau_u = 1.0;

    void validate() const;
};

/// One observation. For the exponential family `x` holds z and `y` is unused.
struct Observation {
    Vector x;
    double y = 0.0;
};

/// Observations stored column-compatible: row i of `features` is x_i (or z_i),
/// `response(i)` is y_i. `response` is empty for exponential-family data.
struct Dataset {
    Matrix features;
    Vector response;

    Index size() const { return features.rows(); }
    Index dim() const { return features.cols(); }
    bool has_response() const { return response.size() > 0; }

    Observation observation(Index i) const;
    /// Rows [begin, begin + count).
    Dataset slice(Index begin, Index count) const;
    Dataset select(const std::vector<Index>& rows) const;
    /// Throws unless every entry is finite and the response matches the rows.
    void validate() const;
};

double loss(const ModelSpec& model, const Vector& theta, const Observation& obs);
Vector gradient(const ModelSpec& model, const Vector& theta, const Observation& obs);

/// Per-observation losses over a dataset.
Vector losses(const ModelSpec& model, const Vector& theta, const Dataset& data);
double empirical_risk(const ModelSpec& model, const Vector& theta, const Dataset& data);

/// log(1 + exp(t)) without overflow.
double softplus(double t);
double sigmoid(double t);

Vector project(const ParameterDomain& domain, const Vector& theta);
bool in_domain(const ParameterDomain& domain, const Vector& theta, double slack = 1e-12);

double population_param_error(const ModelSpec& model, const Vector& theta);

/// Robust estimate of E[xy]; equals theta* when covariates are isotropic.
Vector plugin_linreg(const Dataset& data, const HuberParams& params);

/// Gaussian natural parameterisation: grad A is the identity, so the plugin
/// is the projected robust mean of z.
Vector plugin_expfam(const Dataset& data, const HuberParams& params, const ParameterDomain& domain);

}  // namespace robustgd
