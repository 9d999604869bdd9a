#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "robustgd/sample_matrix.hpp"

namespace robustgd {

/// Settings for the recursive-SVD estimator under epsilon-contamination.
/// trunc_const plays the role of the unnamed universal constant in the
/// truncation step's retained-fraction formula.
struct HuberParams {
    double epsilon = 0.1;
    double delta = 0.1;
    double trunc_const = 2.0;

    void validate() const;
};

struct GmomParams {
    double delta = 0.05;
    double weiszfeld_tol = 1e-10;
    int weiszfeld_max_iter = 10000;

    void validate() const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Number of points a retained fraction corresponds to: ceil(fraction * n),
/// clamped to [1, n].
std::size_t retained_count(double keep_fraction, std::size_t n);

/// Retained fraction for the one-dimensional truncation, clamped to [1/2, 1].
double keep_fraction_1d(std::size_t n, const HuberParams& params);

/// Retained fraction for the ball truncation in dimension p, clamped to [1/2, 1].
double keep_fraction_ball(std::size_t n, std::size_t p, const HuberParams& params);

/// Minimum-width interval with endpoints among the values that contains at
/// least ceil(keep_fraction * n) of them. Leftmost window wins ties.
Interval shortest_interval(std::span<const double> values, double keep_fraction);

/// Values inside the shortest interval for keep_fraction_1d, in input order.
std::vector<double> huber_truncate_1d(std::span<const double> values, const HuberParams& params);

double huber_mean_1d(std::span<const double> values, const HuberParams& params);

/// Outlier truncation. For p = 1 this is the interval rule; otherwise the
/// anchor is the coordinate-wise huber_mean_1d (confidence delta/p) and the
/// rows inside the smallest ball around it holding ceil(keep_fraction * n) rows
/// are kept, in input order (rows tied on the boundary included).
SampleMatrix huber_truncate(const SampleMatrix& samples, const HuberParams& params);

/// Recursive-SVD robust mean: truncate, split the eigenbasis of the retained
/// covariance into the top ceil(p/2) directions and the rest, recurse on the
/// top half, average the rest.
Vector huber_mean(const SampleMatrix& samples, const HuberParams& params);

/// Weiszfeld iteration with the Vardi-Zhang correction at data points.
Vector geometric_median(const SampleMatrix& points, double tol = 1e-10, int max_iter = 10000);

/// b = 1 + floor(3.5 ln(1/delta)), clamped to [1, n].
std::size_t gmom_bucket_count(double delta, std::size_t n);

/// Geometric median of consecutive block means. Samples past b * floor(n/b)
/// are discarded.
Vector gmom_mean(const SampleMatrix& samples, const GmomParams& params);

Vector empirical_mean(const SampleMatrix& samples);

}  // namespace robustgd
