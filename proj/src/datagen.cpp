#include "robustgd/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace robustgd {

namespace {

void check_epsilon(double eps) {
    if (!(eps >= 0.0 && eps < 0.5)) throw std::invalid_argument("epsilon must lie in [0, 1/2)");
}

Matrix gaussian_matrix(Index rows, Index cols, double scale, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    // Fill row by row so the draw order does not depend on storage order.
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) m(i, j) = scale * normal(rng);
    }
    return m;
}

Dataset shuffled(Dataset data, Rng& rng) {
    return data.select(seeded_permutation(static_cast<std::size_t>(data.size()), rng));
}

Vector constant_theta(Index p, double value) { return Vector::Constant(p, value); }

}  // namespace

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t global, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(mix_seed(global) ^ a) ^ (b * 0x2545f4914f6cdd1dULL));
}

std::size_t default_contaminated_n(Index p, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("default sample count needs epsilon > 0");
    return static_cast<std::size_t>(std::llround(10.0 * static_cast<double>(p) / (epsilon * epsilon)));
}

std::size_t outlier_count(double epsilon, std::size_t n) {
    return static_cast<std::size_t>(std::floor(epsilon * static_cast<double>(n) + 1e-9));
}

std::vector<Index> seeded_permutation(std::size_t n, Rng& rng) {
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    // Explicit Fisher-Yates: std::shuffle's draw pattern is library-specific.
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

std::size_t HuberLinRegDesign::resolved_n() const {
    return n ? *n : default_contaminated_n(p, epsilon);
}

Vector HuberLinRegDesign::resolved_theta() const {
    return theta_star ? *theta_star : constant_theta(p, 1.0);
}

std::size_t HuberLogisticDesign::resolved_n() const {
    return n ? *n : default_contaminated_n(p, epsilon);
}

Vector HuberLogisticDesign::resolved_theta() const {
    return theta_star ? *theta_star : constant_theta(p, 1.0 / std::sqrt(static_cast<double>(p)));
}

Vector ParetoLinRegDesign::resolved_theta() const {
    return theta_star ? *theta_star : constant_theta(p, 1.0 / std::sqrt(static_cast<double>(p)));
}

Dataset gen_huber_linreg(const HuberLinRegDesign& design) {
    check_epsilon(design.epsilon);
    if (design.p < 1) throw std::invalid_argument("dimension must be positive");
    if (!(design.sigma2 >= 0.0)) throw std::invalid_argument("sigma2 must be nonnegative");
    const std::size_t n = design.resolved_n();
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    const Vector theta = design.resolved_theta();
    if (theta.size() != design.p) throw std::invalid_argument("dimension mismatch");

    const std::size_t n_out = outlier_count(design.epsilon, n);
    const auto n_clean = static_cast<Index>(n - n_out);
    const auto p = design.p;

    Rng rng(design.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double noise_sd = std::sqrt(design.sigma2);

    Dataset data;
    data.features.resize(static_cast<Index>(n), p);
    data.response.resize(static_cast<Index>(n));
    data.features.topRows(n_clean) = gaussian_matrix(n_clean, p, 1.0, rng);
    for (Index i = 0; i < n_clean; ++i) {
        data.response(i) = data.features.row(i).dot(theta) + noise_sd * normal(rng);
    }
    const auto outliers = static_cast<Index>(n_out);
    data.features.bottomRows(outliers) = gaussian_matrix(outliers, p, static_cast<double>(p), rng);
    data.response.tail(outliers).setZero();
    return shuffled(std::move(data), rng);
}

Dataset gen_clean_logistic(Index p, std::size_t n, const Vector& theta_star, std::uint64_t seed) {
    Rng rng(seed);
    Dataset data;
    data.features = gaussian_matrix(static_cast<Index>(n), p, 1.0, rng);
    data.response = ((data.features * theta_star).array() > 0.0).cast<double>();
    return data;
}

Dataset gen_huber_logistic(const HuberLogisticDesign& design) {
    check_epsilon(design.epsilon);
    if (design.p < 1) throw std::invalid_argument("dimension must be positive");
    const std::size_t n = design.resolved_n();
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    const Vector theta = design.resolved_theta();
    if (theta.size() != design.p) throw std::invalid_argument("dimension mismatch");

    const auto outliers = static_cast<Index>(outlier_count(design.epsilon, n));
    const auto n_clean = static_cast<Index>(n) - outliers;
    const auto p = design.p;
    const double scale = static_cast<double>(p) * static_cast<double>(p);

    Rng rng(design.seed);
    Dataset data;
    data.features.resize(static_cast<Index>(n), p);
    data.response.resize(static_cast<Index>(n));
    data.features.topRows(n_clean) = gaussian_matrix(n_clean, p, 1.0, rng);
    data.response.head(n_clean) = ((data.features.topRows(n_clean) * theta).array() > 0.0).cast<double>();

    // Positive-class draws: reflect into the half-space <x, theta*> > 0,
    // then flip the label and inflate the covariates.
    Matrix out = gaussian_matrix(outliers, p, 1.0, rng);
    for (Index i = 0; i < outliers; ++i) {
        if (out.row(i).dot(theta) <= 0.0) out.row(i) *= -1.0;
    }
    data.features.bottomRows(outliers) = scale * out;
    data.response.tail(outliers).setZero();
    return shuffled(std::move(data), rng);
}

Vector pareto_noise(std::size_t n, double sigma, double beta, Rng& rng) {
    if (!(beta > 2.0)) throw std::invalid_argument("Pareto tail parameter must exceed 2");
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
    const double scale = sigma * (beta - 1.0) * std::sqrt((beta - 2.0) / beta);
    const double mean = beta * scale / (beta - 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Vector w(static_cast<Index>(n));
    for (Index i = 0; i < w.size(); ++i) {
        double u = uniform(rng);
        while (u <= 0.0) u = uniform(rng);
        w(i) = scale * std::pow(u, -1.0 / beta) - mean;
    }
    return w;
}

Dataset gen_pareto_linreg(const ParetoLinRegDesign& design) {
    if (!(design.beta > 2.0)) throw std::invalid_argument("Pareto tail parameter must exceed 2");
    if (design.p < 1 || design.n < 1) throw std::invalid_argument("design needs p >= 1 and n >= 1");
    const Vector theta = design.resolved_theta();
    if (theta.size() != design.p) throw std::invalid_argument("dimension mismatch");

    Rng rng(design.seed);
    Dataset data;
    data.features = gaussian_matrix(static_cast<Index>(design.n), design.p, 1.0, rng);
    data.response = data.features * theta + pareto_noise(design.n, design.sigma, design.beta, rng);
    return data;
}

}  // namespace robustgd
