#pragma once

#include <vector>

#include "iwpca/matrix.hpp"

namespace iwpca {

// Eigendecomposition of a symmetric matrix. eigenvalues are sorted
// descending; column i of eigenvectors pairs with eigenvalues[i].
// Sign convention: the largest-magnitude entry of each eigenvector is
// positive. Ties in eigenvalue keep the solver's original column order,
// so repeated eigenvalues yield a stable (but basis-arbitrary) ordering.
struct SymEigResult {
    std::vector<double> eigenvalues;
    DenseMatrix eigenvectors; // d x d, column-orthonormal
};

enum class EigMethod { Auto, Jacobi, TridiagQL };

// Throws NonSymmetric / NonFinite. Auto uses cyclic Jacobi for d <= 64
// and Householder tridiagonalization + QL with implicit shifts above.
SymEigResult sym_eig(const DenseMatrix& A, EigMethod method = EigMethod::Auto);

// Singular values of X, descending, length min(n, d).
// sigma_i = sqrt(max(0, lambda_i(X^T X))).
std::vector<double> singular_values(const DenseMatrix& X);

} // namespace iwpca
