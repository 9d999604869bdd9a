#pragma once

#include <Eigen/Dense>

#include <vector>

namespace robustgd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// An n x p block of finite reals; row i is the i-th sample (a data point
/// or a per-sample gradient). Construction rejects empty or non-finite input.
class SampleMatrix {
public:
    explicit SampleMatrix(Matrix data);

    Index rows() const { return data_.rows(); }
    Index cols() const { return data_.cols(); }
    const Matrix& data() const { return data_; }
    auto row(Index i) const { return data_.row(i); }

    /// Rows selected by position, in the given order.
    SampleMatrix select_rows(const std::vector<Index>& rows) const;

private:
    Matrix data_;
};

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

}  // namespace robustgd
