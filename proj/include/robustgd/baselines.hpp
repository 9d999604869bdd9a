#pragma once

#include <optional>
#include <vector>

#include "robustgd/optimizer.hpp"

namespace robustgd {

/// Least squares through a column-pivoted QR of the design; throws
/// "singular design" when the design is rank deficient.
Vector ols(const Dataset& data);

/// Minimiser of |y - X theta|^2 + lambda |theta|^2 via the augmented system.
Vector ridge(const Dataset& data, double lambda);

/// Gradient descent on the empirical squared loss.
Trace ols_gd(const Dataset& data, const RGDConfig& config,
             std::optional<Truth> truth = std::nullopt);

struct TorrentConfig {
    double keep_fraction = 0.9;
    int max_rounds = 100;
    double tol = 0.0;

    void validate() const;
};

struct TorrentResult {
    Vector theta;
    int rounds = 0;
    /// Squared-residual sum over each round's active set, at that round's fit.
    std::vector<double> active_sse;
};

/// Hard-thresholding alternation: keep the ceil(keep_fraction n) smallest
/// absolute residuals, refit OLS on them, until the active set repeats or
/// the fit moves by at most tol.
TorrentResult torrent(const Dataset& data, const TorrentConfig& config);

}  // namespace robustgd
