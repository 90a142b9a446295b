#include "iwpca/projection.hpp"

#include <cmath>
#include <string>

namespace iwpca {

Projection projection_from_basis(const DenseMatrix& U) {
    const std::size_t d = U.rows(), r = U.cols();
    double defect = 0.0;
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a; b < r; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < d; ++i) dot += U(i, a) * U(i, b);
            defect = std::max(defect, std::fabs(dot - (a == b ? 1.0 : 0.0)));
        }
    }
    if (defect > 1e-8)
        throw Error("projection_from_basis: basis not orthonormal, defect " +
                    std::to_string(defect));

    Projection P;
    P.basis = U;
    P.rank = r;
    P.matrix = DenseMatrix(d, d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < r; ++k) s += U(i, k) * U(j, k);
            P.matrix(i, j) = s;
            P.matrix(j, i) = s;
        }
    return P;
}

Projection zero_projection(std::size_t d) {
    Projection P;
    P.basis = DenseMatrix(d, 0);
    P.rank = 0;
    P.matrix = DenseMatrix(d, d, 0.0);
    return P;
}

DenseMatrix apply_projection(const DenseMatrix& X, const Projection& P) {
    if (X.cols() != P.dim())
        throw DimensionMismatch("apply_projection: X has " + std::to_string(X.cols()) +
                                " columns, projection dimension is " +
                                std::to_string(P.dim()));
    return multiply(X, P.matrix);
}

double reconstruction_error(const DenseMatrix& X, const Projection& P) {
    DenseMatrix Xhat = apply_projection(X, P);
    double err = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) {
            const double dlt = X(i, j) - Xhat(i, j);
            err += dlt * dlt;
        }
    return err;
}

} // namespace iwpca
