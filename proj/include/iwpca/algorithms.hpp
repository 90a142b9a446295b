#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "iwpca/eig.hpp"
#include "iwpca/ingest.hpp"
#include "iwpca/projection.hpp"

namespace iwpca {

enum class WeightScheme {
    Uniform,
    InverseSignNorm,
    Proper,
    Interpolate,      // 1/sqrt(n_p), 1/sqrt(n_u) (the appendix proof's rescaling)
    InterpolateText,  // sqrt(n_p), sqrt(n_u) as printed in the body text
    Custom,
};

std::string weight_scheme_name(WeightScheme s);
WeightScheme weight_scheme_from_name(const std::string& name);

struct WeightVector {
    std::vector<double> weights; // length d, all >= 0, not all zero
    WeightScheme scheme = WeightScheme::Custom;
};

// Disjoint popular/unpopular index sets covering [0, d).
struct ItemPartition {
    std::vector<std::size_t> popular;
    std::vector<std::size_t> unpopular;

    std::size_t dim() const { return popular.size() + unpopular.size(); }
};

// Makes the contiguous partition {0..d_p-1 | d_p..d-1}.
ItemPartition contiguous_partition(std::size_t d_p, std::size_t d);

struct SolveReport {
    double objective_value = 0.0;
    std::size_t achieved_rank = 0;
    double multiplier = 0.0; // lambda of the error constraint, 0 if unconstrained
    std::size_t iterations = 0;
    bool degenerate_cut = false; // eigenvalue tie at the rank cut
};

// Top-r eigenvectors of X^T X.
Projection vanilla_pca(const DenseMatrix& X, std::size_t r);

// Vanilla PCA on X with unit-norm columns; the returned projection lives
// in the original item coordinates. Zero columns throw ZeroColumn unless
// keep_zero_cols, which leaves them unscaled.
Projection column_normalized_pca(const DenseMatrix& X, std::size_t r,
                                 bool keep_zero_cols = false);

// w_j = 1 / ||S_.j||_2; 0 for all-zero columns.
WeightVector weights_inverse_sign_norm(const SignMatrix& S);

// Theorem-style weights ||X_p||_F^-2 on the popular block and
// ||X_u||_F^-2 on the unpopular block. X must be binary in spirit; only
// the block Frobenius norms are used.
WeightVector weights_proper(const DenseMatrix& X, const ItemPartition& part);

// n_p^-1/2 on the popular block, n_u^-1/2 on the unpopular one.
WeightVector weights_interpolate(const ItemPartition& part, double n_p, double n_u);
// The body-text variant: sqrt(n_p), sqrt(n_u).
WeightVector weights_interpolate_text(const ItemPartition& part, double n_p,
                                      double n_u);

WeightVector weights_uniform(std::size_t d);

// Maximizes Tr(A P) over {0 <= P <= I, tr(P) <= r} and extracts the
// extreme-point projection: the top-k eigenvectors of A where
// k = min(r, #{lambda_i > eps_pos}), eps_pos = 1e-10 * max(1, |A|_max).
std::pair<Projection, SolveReport> fantope_linmax(const DenseMatrix& A, std::size_t r);

// Item-Weighted PCA: builds S = sign(X), D = diag(w),
// A = (D S^T X + X^T S D) / 2, and solves fantope_linmax(A, r). The
// reported objective is sum_j w_j <S_.j, (XP)_.j>.
std::pair<Projection, SolveReport> item_weighted_pca(const DenseMatrix& X,
                                                     const WeightVector& w,
                                                     std::size_t r);

// As above but subject to the linearized reconstruction-error constraint
// tr(X^T X) - tr(X^T X P) <= (1 + slack) * E_r with E_r the vanilla rank-r
// error. Solved by bisection on the constraint's Lagrange multiplier.
std::pair<Projection, SolveReport> item_weighted_pca_constrained(
    const DenseMatrix& X, const WeightVector& w, std::size_t r, double slack);

// The Eq.-style weighted objective sum_j w_j <S_.j, (XP)_.j>, recomputed
// directly from the definition.
double weighted_sign_objective(const DenseMatrix& X, const WeightVector& w,
                               const Projection& P);

} // namespace iwpca
