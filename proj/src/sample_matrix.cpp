#include "robustgd/sample_matrix.hpp"

#include <stdexcept>
#include <vector>

namespace robustgd {

bool all_finite(const Matrix& m) { return m.allFinite(); }
bool all_finite(const Vector& v) { return v.allFinite(); }

SampleMatrix::SampleMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.cols() < 1) {
        throw std::invalid_argument("empty sample");
    }
    if (!data_.allFinite()) {
        throw std::invalid_argument("sample contains non-finite values");
    }
}

SampleMatrix SampleMatrix::select_rows(const std::vector<Index>& rows) const {
    Matrix out(static_cast<Index>(rows.size()), data_.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Index>(i)) = data_.row(rows[i]);
    }
    return SampleMatrix(std::move(out));
}

}  // namespace robustgd
