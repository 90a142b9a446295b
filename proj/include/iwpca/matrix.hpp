#pragma once

#include <cstddef>
#include <vector>

#include "iwpca/errors.hpp"

namespace iwpca {

// Dense real matrix, row-major storage. Row/column counts of zero are
// permitted so that rank-0 projection bases can be represented; data
// loaders enforce non-empty shapes on ingested matrices.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& values() const { return data_; }
    std::vector<double>& values() { return data_; }

    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix transpose(const DenseMatrix& A);
DenseMatrix multiply(const DenseMatrix& A, const DenseMatrix& B);

// X^T X, exploiting symmetry of the result.
DenseMatrix gram(const DenseMatrix& X);

double frobenius_norm_sq(const DenseMatrix& A);
double max_abs(const DenseMatrix& A);

// max |A_ij - A_ji|
double symmetry_defect(const DenseMatrix& A);

void require_finite(const DenseMatrix& A, const char* what);
void require_symmetric(const DenseMatrix& A, const char* what);

} // namespace iwpca
