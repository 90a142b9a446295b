#pragma once

#include "iwpca/matrix.hpp"

namespace iwpca {

// Rank-r orthogonal projection on item space: P = U U^T with U column-
// orthonormal. rank 0 (empty basis) is a valid projection onto {0}.
struct Projection {
    DenseMatrix basis;  // d x r
    std::size_t rank = 0;
    DenseMatrix matrix; // d x d

    std::size_t dim() const { return matrix.rows(); }
};

// Builds P = U U^T from a d x r column-orthonormal basis.
// Throws NonSymmetric-free; validates orthonormality to 1e-8.
Projection projection_from_basis(const DenseMatrix& U);

// Rank-0 projection in dimension d.
Projection zero_projection(std::size_t d);

// X_hat = X P
DenseMatrix apply_projection(const DenseMatrix& X, const Projection& P);

// ||X - XP||_F^2
double reconstruction_error(const DenseMatrix& X, const Projection& P);

} // namespace iwpca
