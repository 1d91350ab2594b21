#include "evagan/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace evagan {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows_ * cols_ != data_.size()) {
        throw std::invalid_argument("Matrix: data length " + std::to_string(data_.size()) +
                                    " does not match shape " + shape_str());
    }
}

std::string Matrix::shape_str() const {
    return "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]";
}

bool Matrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* where) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string(where) + ": shape mismatch " + a.shape_str() +
                                    " vs " + b.shape_str());
    }
}

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* where) {
    if (m.rows() != rows || m.cols() != cols) {
        throw std::invalid_argument(std::string(where) + ": expected [" + std::to_string(rows) +
                                    "x" + std::to_string(cols) + "], got " + m.shape_str());
    }
}

} // namespace evagan
