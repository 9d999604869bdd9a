#include "robustgd/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace robustgd {

double param_error(const Vector& theta_hat, const Vector& theta_star) {
    if (theta_hat.size() != theta_star.size()) throw std::invalid_argument("dimension mismatch");
    return (theta_hat - theta_star).norm();
}

double zero_one_error(const Vector& theta_hat, const Dataset& test) {
    if (test.size() == 0) throw std::invalid_argument("empty test set");
    if (test.dim() != theta_hat.size()) throw std::invalid_argument("dimension mismatch");
    if (!test.has_response()) throw std::invalid_argument("test set has no labels");
    const Eigen::ArrayXd predicted = ((test.features * theta_hat).array() > 0.0).cast<double>();
    const auto wrong = (predicted != test.response.array()).count();
    return static_cast<double>(wrong) / static_cast<double>(test.size());
}

double rel_eff(double error_1, double error_2) {
    if (error_1 == 0.0) throw std::invalid_argument("degenerate reference");
    return (error_2 - error_1) / error_1;
}

double rmse(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
    if (a.size() == 0) throw std::invalid_argument("empty vectors");
    return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

}  // namespace robustgd
