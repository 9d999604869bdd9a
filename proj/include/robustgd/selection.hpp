#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "robustgd/models.hpp"

namespace robustgd {

struct Candidate {
    Vector theta_hat;
    double epsilon = 0.0;
    double delta = 0.0;
};

struct TournamentConfig {
    int mc_samples = 10000;
    std::uint64_t seed = 0;
    /// Noise scale for linear-regression likelihoods. Falls back to the
    /// model's truth, then to 1.
    std::optional<double> noise_sigma;

    void validate() const;
};

/// Log-likelihood of one observation under theta, up to terms shared by all
/// candidates (the covariate density cancels in comparisons).
double log_likelihood(const ModelSpec& model, const Vector& theta, const Observation& obs,
                      double noise_sigma);

/// Scheffe test phi_jk: true when candidate k is favoured over j.
bool pairwise_test(const Candidate& j, const Candidate& k, const Dataset& validation,
                   const ModelSpec& model, const TournamentConfig& cfg);

/// Index of the candidate losing the fewest pairwise tests; lowest index on ties.
std::size_t tournament_select(const std::vector<Candidate>& candidates, const Dataset& validation,
                              const ModelSpec& model, const TournamentConfig& cfg);

/// Index of the candidate with the smallest mean validation loss; lowest index on ties.
std::size_t holdout_risk_select(const std::vector<Candidate>& candidates, const Dataset& validation,
                                const ModelSpec& model);

}  // namespace robustgd
