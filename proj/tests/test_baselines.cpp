#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "robustgd/baselines.hpp"
#include "robustgd/datagen.hpp"

using namespace robustgd;

TEST_CASE("ols examples") {
    Rng rng(1);
    const Vector star = fixtures::gaussian_vector(5, rng);
    const Dataset clean = fixtures::linear_data(50, star, 0.0, 2);
    CHECK((ols(clean) - star).norm() <= 1e-8);

    Dataset square;
    square.features = 3.0 * Matrix::Identity(4, 4);
    square.response = Vector::LinSpaced(4, 1, 4);
    CHECK((square.features * ols(square) - square.response).norm() <= 1e-12);

    Dataset rank_def = fixtures::linear_data(20, Vector::Ones(3), 0.1, 3);
    rank_def.features.col(2) = rank_def.features.col(0);
    CHECK_THROWS_WITH_AS(ols(rank_def), "singular design", std::runtime_error);
    const Dataset short_data = fixtures::linear_data(2, Vector::Ones(3), 0.1, 3);
    CHECK_THROWS_WITH_AS(ols(short_data), "singular design", std::runtime_error);
}

TEST_CASE("ols residuals are orthogonal to the design") {
    const Dataset d = fixtures::linear_data(300, Vector::LinSpaced(6, -1, 1), 1.0, 4);
    const Vector theta = ols(d);
    const Vector r = d.response - d.features * theta;
    CHECK((d.features.transpose() * r).norm() <= 1e-8 * (d.features.transpose() * d.response).norm());
    CHECK((theta - oracle::least_squares(d.features, d.response)).norm() <= 1e-10);
}

TEST_CASE("ols fails under Huber contamination where robust GD does not") {
    HuberLinRegDesign design;
    design.p = 32;
    design.n = 8000;
    design.seed = 5;
    const Dataset d = gen_huber_linreg(design);
    const Vector star = design.resolved_theta();
    RGDConfig cfg;
    cfg.max_iters = 40;
    const Trace tr = run_rgd(ModelSpec::linear(32, Truth{star, std::sqrt(0.1)}), d,
                             GradientEstimatorSpec::huber({0.1, 0.1, 2.0}), cfg);
    CHECK((ols(d) - star).norm() >= 5.0 * tr.param_errors.back());
}

TEST_CASE("ridge examples") {
    const Dataset d = fixtures::linear_data(100, Vector::Constant(4, 2.0), 0.5, 6);
    CHECK((ridge(d, 0.0) - ols(d)).norm() <= 1e-10);
    CHECK(ridge(d, 1e12).norm() <= 1e-6);
    CHECK(ridge(d, 100.0).norm() < ols(d).norm());
    CHECK_THROWS_AS(ridge(d, -1.0), std::invalid_argument);
}

TEST_CASE("ridge solution minimises the ridge objective") {
    const Dataset d = fixtures::linear_data(60, Vector::LinSpaced(5, -2, 2), 1.0, 7);
    const double lambda = 3.0;
    const auto objective = [&](const Vector& t) {
        return (d.response - d.features * t).squaredNorm() + lambda * t.squaredNorm();
    };
    const Vector theta = ridge(d, lambda);
    Rng rng(8);
    for (int rep = 0; rep < 50; ++rep) {
        const Vector dir = fixtures::gaussian_vector(5, rng, 1e-3);
        CHECK(objective(theta + dir) > objective(theta));
    }
    // Normal equations of the ridge problem, solved independently.
    const Matrix a = d.features.transpose() * d.features + lambda * Matrix::Identity(5, 5);
    CHECK((theta - a.llt().solve(d.features.transpose() * d.response)).norm() <= 1e-10);
}

TEST_CASE("ols_gd examples") {
    Rng rng(9);
    const Vector star = fixtures::gaussian_vector(4, rng);
    const Dataset d = fixtures::linear_data(500, star, 0.3, 10);
    RGDConfig cfg;
    cfg.max_iters = 500;
    cfg.conv_tol = 1e-12;
    const Trace tr = ols_gd(d, cfg);
    CHECK((tr.final_iterate() - ols(d)).norm() <= 1e-6);

    RGDConfig one;
    one.max_iters = 1;
    one.step_size = 0.7;
    const Trace first = ols_gd(d, one);
    const Vector want = 0.7 * (d.features.transpose() * d.response) / 500.0;
    CHECK((first.iterates[1] - want).norm() <= 1e-12);

    const Trace with_truth = ols_gd(d, one, Truth{star, 0.3});
    CHECK(with_truth.param_errors.size() == 2);
}

TEST_CASE("ols_gd converges to ols on heavy-tailed data") {
    ParetoLinRegDesign design;
    design.p = 8;
    design.n = 512;
    design.seed = 3;
    const Dataset d = gen_pareto_linreg(design);
    RGDConfig cfg;
    cfg.max_iters = 400;
    cfg.conv_tol = 1e-12;
    const Vector star = design.resolved_theta();
    const double gd_err = (ols_gd(d, cfg).final_iterate() - star).norm();
    const double ols_err = (ols(d) - star).norm();
    CHECK(gd_err == doctest::Approx(ols_err).epsilon(1e-6));
}

TEST_CASE("torrent on clean data equals ols") {
    const Dataset d = fixtures::linear_data(200, Vector::Ones(3), 0.0, 11);
    const TorrentResult r = torrent(d, TorrentConfig{0.9, 50, 0.0});
    CHECK((r.theta - ols(d)).norm() <= 1e-8);
}

TEST_CASE("torrent recovers theta* under response-only corruption") {
    const Index p = 5;
    const Vector star = Vector::LinSpaced(p, -1, 1);
    Dataset d = fixtures::linear_data(2000, star, 0.1, 12);
    const Dataset clean = d;
    Rng rng(13);
    std::uniform_real_distribution<double> u(20, 50);
    const auto bad = static_cast<Index>(outlier_count(0.1, 2000));
    for (Index i = 0; i < bad; ++i) d.response(i * 10) += u(rng);
    const double clean_err = (ols(clean) - star).norm();
    const TorrentResult r = torrent(d, TorrentConfig{0.9, 100, 0.0});
    CHECK((r.theta - star).norm() <= 3.0 * clean_err);
    CHECK((ols(d) - star).norm() > 3.0 * clean_err);
}

TEST_CASE("torrent active-set residual sum is non-increasing") {
    HuberLinRegDesign design;
    design.p = 8;
    design.n = 2000;
    design.seed = 14;
    const Dataset d = gen_huber_linreg(design);
    const TorrentResult r = torrent(d, TorrentConfig{0.9, 100, 0.0});
    REQUIRE(r.active_sse.size() >= 2);
    for (std::size_t i = 1; i < r.active_sse.size(); ++i)
        CHECK(r.active_sse[i] <= r.active_sse[i - 1] * (1 + 1e-12));
}

TEST_CASE("torrent is far off under Huber contamination") {
    HuberLinRegDesign design;
    design.p = 16;
    design.n = 8000;
    design.seed = 15;
    const Dataset d = gen_huber_linreg(design);
    const Vector star = design.resolved_theta();
    RGDConfig cfg;
    cfg.max_iters = 40;
    const Trace tr = run_rgd(ModelSpec::linear(16, Truth{star, std::sqrt(0.1)}), d,
                             GradientEstimatorSpec::huber({0.1, 0.1, 2.0}), cfg);
    const TorrentResult r = torrent(d, TorrentConfig{0.9, 100, 0.0});
    CHECK((r.theta - star).norm() >= 5.0 * tr.param_errors.back());
}

TEST_CASE("torrent validation") {
    const Dataset d = fixtures::linear_data(10, Vector::Ones(3), 0.0, 1);
    CHECK_THROWS_AS(torrent(d, TorrentConfig{0.0, 10, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(torrent(d, TorrentConfig{0.2, 10, 0.0}), std::invalid_argument);  // 2 rows < p
}
