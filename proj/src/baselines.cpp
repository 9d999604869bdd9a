#include "robustgd/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "robustgd/mean_estimators.hpp"

namespace robustgd {

namespace {

void require_regression(const Dataset& data) {
    data.validate();
    if (!data.has_response()) throw std::invalid_argument("regression baselines need responses");
}

Vector solve_least_squares(const Matrix& x, const Vector& y) {
    const Eigen::ColPivHouseholderQR<Matrix> qr(x);
    if (qr.rank() < x.cols()) throw std::runtime_error("singular design");
    return qr.solve(y);
}

}  // namespace

Vector ols(const Dataset& data) {
    require_regression(data);
    if (data.size() < data.dim()) throw std::runtime_error("singular design");
    return solve_least_squares(data.features, data.response);
}

Vector ridge(const Dataset& data, double lambda) {
    require_regression(data);
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
    if (lambda == 0.0) return ols(data);
    const Index n = data.size();
    const Index p = data.dim();
    Matrix aug(n + p, p);
    aug.topRows(n) = data.features;
    aug.bottomRows(p) = std::sqrt(lambda) * Matrix::Identity(p, p);
    Vector rhs = Vector::Zero(n + p);
    rhs.head(n) = data.response;
    return solve_least_squares(aug, rhs);
}

Trace ols_gd(const Dataset& data, const RGDConfig& config, std::optional<Truth> truth) {
    require_regression(data);
    return run_rgd(ModelSpec::linear(data.dim(), std::move(truth)), data,
                   GradientEstimatorSpec::empirical(), config);
}

void TorrentConfig::validate() const {
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
        throw std::invalid_argument("keep_fraction must lie in (0, 1]");
    }
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be positive");
    if (!(tol >= 0.0)) throw std::invalid_argument("tol must be nonnegative");
}

TorrentResult torrent(const Dataset& data, const TorrentConfig& config) {
    require_regression(data);
    config.validate();
    const auto n = static_cast<std::size_t>(data.size());
    const std::size_t k = retained_count(config.keep_fraction, n);
    if (k < static_cast<std::size_t>(data.dim())) {
        throw std::invalid_argument("active set smaller than the dimension");
    }

    TorrentResult result;
    result.theta = Vector::Zero(data.dim());
    std::vector<Index> active;
    std::vector<Index> order(n);

    for (int round = 0; round < config.max_rounds; ++round) {
        const Vector resid = (data.response - data.features * result.theta).cwiseAbs();
        std::iota(order.begin(), order.end(), Index{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Index a, Index b) { return resid(a) < resid(b); });
        std::vector<Index> next(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(next.begin(), next.end());
        if (next == active) break;
        active = std::move(next);

        const Dataset subset = data.select(active);
        const Vector theta = solve_least_squares(subset.features, subset.response);
        result.active_sse.push_back((subset.response - subset.features * theta).squaredNorm());
        const double moved = (theta - result.theta).norm();
        result.theta = theta;
        result.rounds = round + 1;
        if (config.tol > 0.0 && moved <= config.tol) break;
    }
    return result;
}

}  // namespace robustgd
