#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "robustgd/models.hpp"

namespace robustgd {

double param_error(const Vector& theta_hat, const Vector& theta_star);

/// Fraction of rows where 1{x^T theta > 0} disagrees with the label.
double zero_one_error(const Vector& theta_hat, const Dataset& test);

/// (error_2 - error_1) / error_1: positive when estimator 1 is better.
double rel_eff(double error_1, double error_2);

double rmse(const Vector& a, const Vector& b);

/// One row of a results file. Optional fields serialise as empty cells.
struct TrialResult {
    std::string experiment;
    std::string method;
    Index p = 0;
    std::size_t n = 0;
    std::optional<double> epsilon;
    std::optional<double> beta;
    std::optional<double> sigma;
    std::uint64_t trial = 0;
    std::optional<int> iter;
    double param_error = 0.0;
    std::optional<double> zero_one_error;
    std::optional<double> rel_eff_vs_ols;
    std::optional<double> runtime_ms;

    bool operator==(const TrialResult&) const = default;
};

}  // namespace robustgd
