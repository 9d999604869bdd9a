#include "robustgd/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>

#include "robustgd/datagen.hpp"

namespace robustgd {

namespace {

double resolve_sigma(const ModelSpec& model, const TournamentConfig& cfg) {
    if (cfg.noise_sigma) return *cfg.noise_sigma;
    if (model.truth && model.truth->noise_sigma > 0.0) return model.truth->noise_sigma;
    return 1.0;
}

// Event {p_j(z) > p_k(z)} in log space.
bool favours_first(const ModelSpec& model, const Vector& a, const Vector& b, const Observation& z,
                   double sigma) {
    return log_likelihood(model, a, z, sigma) > log_likelihood(model, b, z, sigma);
}

// Monte Carlo estimate of P_theta(p_j(z) > p_k(z)). Regression families draw x
// from the validation covariates and y from theta's conditional model.
double model_probability(const ModelSpec& model, const Vector& theta, const Vector& a, const Vector& b,
                         const Dataset& validation, double sigma, int draws, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::uniform_int_distribution<Index> pick(0, validation.size() - 1);
    int hits = 0;
    Observation z;
    for (int m = 0; m < draws; ++m) {
        switch (model.family) {
            case Family::LinearRegression:
                z.x = validation.features.row(pick(rng)).transpose();
                z.y = z.x.dot(theta) + sigma * normal(rng);
                break;
            case Family::Logistic:
                z.x = validation.features.row(pick(rng)).transpose();
                z.y = uniform(rng) < sigmoid(z.x.dot(theta)) ? 1.0 : 0.0;
                break;
            case Family::GaussianExpFamily:
                z.x.resize(theta.size());
                for (Index i = 0; i < theta.size(); ++i) z.x(i) = theta(i) + normal(rng);
                break;
        }
        if (favours_first(model, a, b, z, sigma)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(draws);
}

// Content hash so pair seeds follow the candidates, not their list positions.
std::uint64_t hash_vector(const Vector& v) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Index i = 0; i < v.size(); ++i) {
        std::uint64_t bits = 0;
        const double x = v(i);
        std::memcpy(&bits, &x, sizeof bits);
        h = (h ^ bits) * 0x100000001b3ULL;
    }
    return h;
}

void check_candidates(const std::vector<Candidate>& candidates) {
    if (candidates.empty()) throw std::invalid_argument("empty candidate list");
}

}  // namespace

void TournamentConfig::validate() const {
    if (mc_samples < 1) throw std::invalid_argument("mc_samples must be positive");
    if (noise_sigma && !(*noise_sigma > 0.0)) throw std::invalid_argument("noise_sigma must be positive");
}

double log_likelihood(const ModelSpec& model, const Vector& theta, const Observation& obs,
                      double noise_sigma) {
    switch (model.family) {
        case Family::LinearRegression: {
            const double r = (obs.y - obs.x.dot(theta)) / noise_sigma;
            return -0.5 * r * r;
        }
        case Family::Logistic:
        case Family::GaussianExpFamily:
            // Bernoulli log-likelihood is the negative logistic loss; the
            // Gaussian family's loss differs from -log p by a z-only term.
            return -loss(model, theta, obs);
    }
    throw std::logic_error("unhandled family");
}

bool pairwise_test(const Candidate& j, const Candidate& k, const Dataset& validation,
                   const ModelSpec& model, const TournamentConfig& cfg) {
    cfg.validate();
    validation.validate();
    const double sigma = resolve_sigma(model, cfg);
    const Vector& a = j.theta_hat;
    const Vector& b = k.theta_hat;
    if (a.size() != model.dim || b.size() != model.dim || validation.dim() != model.dim) {
        throw std::invalid_argument("dimension mismatch");
    }

    Index wins = 0;
    for (Index i = 0; i < validation.size(); ++i) {
        if (favours_first(model, a, b, validation.observation(i), sigma)) ++wins;
    }
    const double empirical = static_cast<double>(wins) / static_cast<double>(validation.size());

    // Each model probability draws from a stream keyed by its generating
    // candidate, so swapping j and k reuses the same draws.
    Rng rng_j(derive_seed(cfg.seed, hash_vector(a)));
    Rng rng_k(derive_seed(cfg.seed, hash_vector(b)));
    const double under_j = model_probability(model, a, a, b, validation, sigma, cfg.mc_samples, rng_j);
    const double under_k = model_probability(model, b, a, b, validation, sigma, cfg.mc_samples, rng_k);
    return std::abs(empirical - under_j) > std::abs(empirical - under_k);
}

std::size_t tournament_select(const std::vector<Candidate>& candidates, const Dataset& validation,
                              const ModelSpec& model, const TournamentConfig& cfg) {
    check_candidates(candidates);
    const std::size_t m = candidates.size();
    std::vector<int> losses(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            if (j == k) continue;
            TournamentConfig pair_cfg = cfg;
            const std::uint64_t hj = hash_vector(candidates[j].theta_hat);
            const std::uint64_t hk = hash_vector(candidates[k].theta_hat);
            pair_cfg.seed = derive_seed(cfg.seed, std::min(hj, hk), std::max(hj, hk));
            if (pairwise_test(candidates[j], candidates[k], validation, model, pair_cfg)) ++losses[j];
        }
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < m; ++j) {
        if (losses[j] < losses[best]) best = j;
    }
    return best;
}

std::size_t holdout_risk_select(const std::vector<Candidate>& candidates, const Dataset& validation,
                                const ModelSpec& model) {
    check_candidates(candidates);
    validation.validate();
    std::size_t best = 0;
    double best_risk = empirical_risk(model, candidates[0].theta_hat, validation);
    for (std::size_t j = 1; j < candidates.size(); ++j) {
        const double risk = empirical_risk(model, candidates[j].theta_hat, validation);
        if (risk < best_risk) {
            best_risk = risk;
            best = j;
        }
    }
    return best;
}

}  // namespace robustgd
