#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "robustgd/models.hpp"

namespace robustgd {

using Rng = std::mt19937_64;

/// splitmix64 finaliser; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t global, std::uint64_t a, std::uint64_t b = 0);

/// 10 p / eps^2, the sample budget used by the contamination experiments.
std::size_t default_contaminated_n(Index p, double epsilon);

/// floor(eps * n), guarded against representation error.
std::size_t outlier_count(double epsilon, std::size_t n);

struct HuberLinRegDesign {
    Index p = 16;
    double epsilon = 0.1;
    double sigma2 = 0.1;
    std::optional<std::size_t> n;
    std::optional<Vector> theta_star;  // all-ones by default
    std::uint64_t seed = 0;

    std::size_t resolved_n() const;
    Vector resolved_theta() const;
};

struct HuberLogisticDesign {
    Index p = 16;
    double epsilon = 0.1;
    std::optional<std::size_t> n;
    std::optional<Vector> theta_star;  // entries 1/sqrt(p) by default
    std::uint64_t seed = 0;

    std::size_t resolved_n() const;
    Vector resolved_theta() const;
};

struct ParetoLinRegDesign {
    Index p = 32;
    std::size_t n = 512;
    double sigma = 0.75;
    double beta = 3.0;
    std::optional<Vector> theta_star;  // entries 1/sqrt(p) by default
    std::uint64_t seed = 0;

    Vector resolved_theta() const;
};

/// Clean rows: x ~ N(0, I), y = <x, theta*> + N(0, sigma2). Outliers:
/// x ~ N(0, p^2 I), y = 0. Rows are shuffled.
Dataset gen_huber_linreg(const HuberLinRegDesign& design);

/// Clean rows: x ~ N(0, I), y = 1{<x, theta*> > 0}. Outliers come from the
/// positive class with label 0 and covariates scaled by p^2. Rows are shuffled.
Dataset gen_huber_logistic(const HuberLogisticDesign& design);

/// Clean-only logistic rows, used as the held-out test set.
Dataset gen_clean_logistic(Index p, std::size_t n, const Vector& theta_star, std::uint64_t seed);

/// x ~ N(0, I), y = <x, theta*> + w with w centred Pareto(beta) of variance sigma^2.
Dataset gen_pareto_linreg(const ParetoLinRegDesign& design);

/// n draws of the centred Pareto noise with variance sigma^2 and shape beta > 2.
Vector pareto_noise(std::size_t n, double sigma, double beta, Rng& rng);

/// Seeded permutation of 0..n-1.
std::vector<Index> seeded_permutation(std::size_t n, Rng& rng);

}  // namespace robustgd
