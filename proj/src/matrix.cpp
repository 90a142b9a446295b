#include "iwpca/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iwpca {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionMismatch("DenseMatrix: value count " + std::to_string(data_.size()) +
                                " does not match shape " + std::to_string(rows_) + "x" +
                                std::to_string(cols_));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

bool DenseMatrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

DenseMatrix transpose(const DenseMatrix& A) {
    DenseMatrix T(A.cols(), A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            T(j, i) = A(i, j);
    return T;
}

DenseMatrix multiply(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.cols() != B.rows())
        throw DimensionMismatch("multiply: inner dimensions " + std::to_string(A.cols()) +
                                " and " + std::to_string(B.rows()) + " differ");
    DenseMatrix C(A.rows(), B.cols(), 0.0);
    // ikj order keeps the inner loop contiguous in both B and C
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t k = 0; k < A.cols(); ++k) {
            const double a = A(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < B.cols(); ++j)
                C(i, j) += a * B(k, j);
        }
    }
    return C;
}

DenseMatrix gram(const DenseMatrix& X) {
    const std::size_t n = X.rows(), d = X.cols();
    DenseMatrix G(d, d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = X.values().data() + i * d;
        for (std::size_t j = 0; j < d; ++j) {
            const double xj = row[j];
            if (xj == 0.0) continue;
            for (std::size_t k = j; k < d; ++k)
                G(j, k) += xj * row[k];
        }
    }
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < j; ++k)
            G(j, k) = G(k, j);
    return G;
}

double frobenius_norm_sq(const DenseMatrix& A) {
    double s = 0.0;
    for (double v : A.values()) s += v * v;
    return s;
}

double max_abs(const DenseMatrix& A) {
    double m = 0.0;
    for (double v : A.values()) m = std::max(m, std::fabs(v));
    return m;
}

double symmetry_defect(const DenseMatrix& A) {
    double m = 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = i + 1; j < A.cols(); ++j)
            m = std::max(m, std::fabs(A(i, j) - A(j, i)));
    return m;
}

void require_finite(const DenseMatrix& A, const char* what) {
    if (!A.all_finite())
        throw NonFinite(std::string(what) + ": matrix contains NaN or Inf");
}

void require_symmetric(const DenseMatrix& A, const char* what) {
    if (A.rows() != A.cols())
        throw NonSymmetric(std::string(what) + ": matrix is not square");
    require_finite(A, what);
    const double tol = 1e-9 * std::max(1.0, max_abs(A));
    if (symmetry_defect(A) > tol)
        throw NonSymmetric(std::string(what) + ": matrix is not symmetric");
}

} // namespace iwpca
