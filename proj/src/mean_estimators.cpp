#include "robustgd/mean_estimators.hpp"

#include "radix_sort.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace robustgd {

namespace {

constexpr double kCoincidenceTol = 1e-12;

Vector column_means(const Matrix& m) { return m.colwise().mean().transpose(); }

Interval shortest_interval_sorted(const std::vector<double>& sorted, std::size_t k) {
    const std::size_t n = sorted.size();
    std::size_t best = 0;
    double best_width = sorted[k - 1] - sorted[0];
    for (std::size_t i = 1; i + k <= n; ++i) {
        const double w = sorted[i + k - 1] - sorted[i];
        if (w < best_width) {
            best_width = w;
            best = i;
        }
    }
    return {sorted[best], sorted[best + k - 1]};
}

Interval truncation_interval(std::span<const double> values, const HuberParams& params) {
    return shortest_interval(values, keep_fraction_1d(values.size(), params));
}

double mean_1d_unchecked(std::span<const double> values, const HuberParams& params) {
    const Interval iv = truncation_interval(values, params);
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : values) {
        if (iv.contains(v)) {
            sum += v;
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

Matrix truncate_rows(const Matrix& samples, const HuberParams& params) {
    const Index n = samples.rows();
    const Index p = samples.cols();
    if (n == 1) return samples;

    std::vector<Index> keep;
    keep.reserve(static_cast<std::size_t>(n));

    if (p == 1) {
        std::span<const double> col(samples.data(), static_cast<std::size_t>(n));
        const Interval iv = truncation_interval(col, params);
        for (Index i = 0; i < n; ++i) {
            if (iv.contains(samples(i, 0))) keep.push_back(i);
        }
    } else {
        HuberParams coord = params;
        coord.delta = params.delta / static_cast<double>(p);
        Vector anchor(p);
        std::vector<double> column(static_cast<std::size_t>(n));
        for (Index j = 0; j < p; ++j) {
            for (Index i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = samples(i, j);
            anchor(j) = mean_1d_unchecked(column, coord);
        }

        const Vector dist = (samples.rowwise() - anchor.transpose()).rowwise().squaredNorm();
        std::vector<double> sorted(dist.begin(), dist.end());
        const std::size_t k = retained_count(
            keep_fraction_ball(static_cast<std::size_t>(n), static_cast<std::size_t>(p), params),
            static_cast<std::size_t>(n));
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
        // Smallest ball around the anchor holding k rows; rows tied on its
        // boundary stay in.
        const double radius2 = sorted[k - 1];
        for (Index i = 0; i < n; ++i) {
            if (dist(i) <= radius2) keep.push_back(i);
        }
    }

    if (keep.size() == static_cast<std::size_t>(n)) return samples;
    Matrix out(static_cast<Index>(keep.size()), p);
    for (std::size_t i = 0; i < keep.size(); ++i) out.row(static_cast<Index>(i)) = samples.row(keep[i]);
    return out;
}

Vector huber_mean_recursive(const Matrix& samples, const HuberParams& params) {
    const Matrix kept = truncate_rows(samples, params);
    const Index p = kept.cols();
    const Vector mu = column_means(kept);
    if (p == 1) return mu;

    const Matrix centered = kept.rowwise() - mu.transpose();
    const Matrix cov = centered.transpose() * centered / static_cast<double>(kept.rows());
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed");
    }

    // Eigenvalues come back ascending: the top ceil(p/2) are the last columns.
    const Index top = (p + 1) / 2;
    const Index rest = p - top;
    const Matrix upper = eig.eigenvectors().rightCols(top).rowwise().reverse();
    const Matrix lower = eig.eigenvectors().leftCols(rest);

    const Vector mu_upper = huber_mean_recursive(kept * upper, params);
    const Vector mu_lower = lower.transpose() * mu;
    return upper * mu_upper + lower * mu_lower;
}

}  // namespace

void HuberParams::validate() const {
    if (!(epsilon >= 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in [0, 1/2)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(trunc_const > 0.0)) throw std::invalid_argument("trunc_const must be positive");
}

void GmomParams::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(weiszfeld_tol > 0.0)) throw std::invalid_argument("weiszfeld_tol must be positive");
    if (weiszfeld_max_iter < 1) throw std::invalid_argument("weiszfeld_max_iter must be positive");
}

std::size_t retained_count(double keep_fraction, std::size_t n) {
    const auto k = static_cast<std::size_t>(std::ceil(keep_fraction * static_cast<double>(n)));
    return std::clamp<std::size_t>(k, 1, n);
}

double keep_fraction_1d(std::size_t n, const HuberParams& params) {
    const double nn = static_cast<double>(n);
    const double slack = params.trunc_const * std::sqrt(std::log(nn / params.delta) / nn);
    const double frac = (1.0 - params.epsilon - slack) * (1.0 - params.epsilon);
    return std::clamp(frac, 0.5, 1.0);
}

double keep_fraction_ball(std::size_t n, std::size_t p, const HuberParams& params) {
    const double nn = static_cast<double>(n);
    const double pp = static_cast<double>(p);
    // log(n / (p delta)) is negative only when n < p delta; treat as no slack.
    const double log_term = std::max(0.0, std::log(nn / (pp * params.delta)));
    const double slack = params.trunc_const * std::sqrt(pp / nn * log_term);
    const double frac = (1.0 - params.epsilon - slack) * (1.0 - params.epsilon);
    return std::clamp(frac, 0.5, 1.0);
}

Interval shortest_interval(std::span<const double> values, double keep_fraction) {
    if (values.empty()) throw std::invalid_argument("empty sample");
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
        throw std::invalid_argument("keep_fraction must lie in (0, 1]");
    }
    std::vector<double> sorted(values.begin(), values.end());
    detail::radix_sort(sorted);
    return shortest_interval_sorted(sorted, retained_count(keep_fraction, sorted.size()));
}

std::vector<double> huber_truncate_1d(std::span<const double> values, const HuberParams& params) {
    params.validate();
    const Interval iv = truncation_interval(values, params);
    std::vector<double> out;
    std::copy_if(values.begin(), values.end(), std::back_inserter(out),
                 [&](double v) { return iv.contains(v); });
    return out;
}

double huber_mean_1d(std::span<const double> values, const HuberParams& params) {
    params.validate();
    if (values.empty()) throw std::invalid_argument("empty sample");
    return mean_1d_unchecked(values, params);
}

SampleMatrix huber_truncate(const SampleMatrix& samples, const HuberParams& params) {
    params.validate();
    return SampleMatrix(truncate_rows(samples.data(), params));
}

Vector huber_mean(const SampleMatrix& samples, const HuberParams& params) {
    params.validate();
    if (samples.rows() < 2) throw std::invalid_argument("insufficient samples");
    return huber_mean_recursive(samples.data(), params);
}

Vector geometric_median(const SampleMatrix& points, double tol, int max_iter) {
    const Matrix& pts = points.data();
    const Index n = pts.rows();
    Vector y = column_means(pts);
    if (n == 1) return y;

    for (int it = 0; it < max_iter; ++it) {
        const Vector dist = (pts.rowwise() - y.transpose()).rowwise().norm();

        Vector weighted_sum = Vector::Zero(pts.cols());
        double weight_total = 0.0;
        int coincident = 0;
        for (Index i = 0; i < n; ++i) {
            if (dist(i) < kCoincidenceTol) {
                ++coincident;
                continue;
            }
            const double w = 1.0 / dist(i);
            weighted_sum += w * pts.row(i).transpose();
            weight_total += w;
        }
        if (weight_total == 0.0) return y;  // every point coincides with y

        const Vector target = weighted_sum / weight_total;
        Vector next;
        if (coincident == 0) {
            next = target;
        } else {
            // Pull of the non-coincident points; y is optimal once it is no
            // stronger than the coincident mass.
            const double pull = ((target - y) * weight_total).norm();
            const double mass = static_cast<double>(coincident);
            if (pull <= mass) return y;
            const double ratio = mass / pull;
            next = (1.0 - ratio) * target + ratio * y;
        }

        const double step = (next - y).norm();
        y = std::move(next);
        if (step < tol) break;
    }
    return y;
}

std::size_t gmom_bucket_count(double delta, std::size_t n) {
    const auto b = 1 + static_cast<std::size_t>(std::floor(3.5 * std::log(1.0 / delta)));
    return std::clamp<std::size_t>(b, 1, n);
}

Vector gmom_mean(const SampleMatrix& samples, const GmomParams& params) {
    params.validate();
    const auto n = static_cast<std::size_t>(samples.rows());
    const std::size_t b = gmom_bucket_count(params.delta, n);
    const auto block = static_cast<Index>(n / b);

    Matrix block_means(static_cast<Index>(b), samples.cols());
    for (Index i = 0; i < static_cast<Index>(b); ++i) {
        block_means.row(i) = samples.data().middleRows(i * block, block).colwise().mean();
    }
    return geometric_median(SampleMatrix(std::move(block_means)), params.weiszfeld_tol,
                            params.weiszfeld_max_iter);
}

Vector empirical_mean(const SampleMatrix& samples) { return column_means(samples.data()); }

}  // namespace robustgd
