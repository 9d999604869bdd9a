#pragma once

#include <random>

#include "robustgd/datagen.hpp"
#include "robustgd/models.hpp"

namespace fixtures {

using namespace robustgd;

inline Matrix gaussian(Index n, Index p, Rng& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Matrix m(n, p);
    for (auto& x : m.reshaped()) x = normal(rng);
    return m;
}

inline Vector gaussian_vector(Index p, Rng& rng, double scale = 1.0) {
    return gaussian(p, 1, rng, scale).col(0);
}

// y = X theta + noise
inline Dataset linear_data(Index n, const Vector& theta, double noise, std::uint64_t seed) {
    Rng rng(seed);
    Dataset d;
    d.features = gaussian(n, theta.size(), rng);
    d.response = d.features * theta;
    if (noise > 0) d.response += gaussian_vector(n, rng, noise);
    return d;
}

inline Dataset logistic_data(Index n, const Vector& theta, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u;
    Dataset d;
    d.features = gaussian(n, theta.size(), rng);
    d.response.resize(n);
    for (Index i = 0; i < n; ++i) d.response(i) = u(rng) < sigmoid(d.features.row(i).dot(theta)) ? 1.0 : 0.0;
    return d;
}

inline Dataset gaussian_family_data(Index n, const Vector& mean, std::uint64_t seed) {
    Rng rng(seed);
    Dataset d;
    d.features = gaussian(n, mean.size(), rng).rowwise() + mean.transpose();
    return d;
}

}  // namespace fixtures
