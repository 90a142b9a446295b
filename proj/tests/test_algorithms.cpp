#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iwpca/algorithms.hpp"
#include "iwpca/eig.hpp"
#include "iwpca/rng.hpp"

using namespace iwpca;

namespace {

DenseMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    DenseMatrix X(n, d);
    for (auto& v : X.values()) v = rng.normal();
    return X;
}

double projection_distance(const Projection& A, const Projection& B) {
    double s = 0.0;
    for (std::size_t k = 0; k < A.matrix.values().size(); ++k) {
        const double diff = A.matrix.values()[k] - B.matrix.values()[k];
        s += diff * diff;
    }
    return std::sqrt(s);
}

} // namespace

TEST_CASE("weight scheme names round trip") {
    for (WeightScheme s : {WeightScheme::Uniform, WeightScheme::InverseSignNorm,
                           WeightScheme::Proper, WeightScheme::Interpolate,
                           WeightScheme::InterpolateText, WeightScheme::Custom})
        CHECK(weight_scheme_from_name(weight_scheme_name(s)) == s);
    CHECK_THROWS_AS(weight_scheme_from_name("bogus"), Error);
}

TEST_CASE("contiguous_partition") {
    const ItemPartition part = contiguous_partition(2, 5);
    CHECK(part.popular == std::vector<std::size_t>{0, 1});
    CHECK(part.unpopular == std::vector<std::size_t>{2, 3, 4});
    CHECK(part.dim() == 5);
}

TEST_CASE("vanilla_pca recovers the dominant direction") {
    // rank-1 signal plus small noise along a known axis
    Rng rng(5);
    DenseMatrix X(40, 6);
    for (std::size_t i = 0; i < 40; ++i) {
        const double t = rng.normal() * 10.0;
        X(i, 0) = t;
        for (std::size_t j = 1; j < 6; ++j) X(i, j) = 0.01 * rng.normal();
    }
    const Projection P = vanilla_pca(X, 1);
    CHECK(P.rank == 1);
    CHECK(P.matrix(0, 0) == doctest::Approx(1.0).epsilon(1e-3));

    // agreement with the direct eigensolver
    const DenseMatrix Y = random_matrix(30, 8, 2);
    const SymEigResult eig = sym_eig(gram(Y));
    DenseMatrix U(8, 3);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 8; ++i) U(i, j) = eig.eigenvectors(i, j);
    CHECK(projection_distance(vanilla_pca(Y, 3), projection_from_basis(U)) <= 1e-9);
}

TEST_CASE("vanilla_pca on rank-deficient input still reconstructs exactly") {
    DenseMatrix X(5, 4, 0.0); // rank 1
    for (std::size_t i = 0; i < 5; ++i) X(i, 0) = double(i + 1);
    const Projection P = vanilla_pca(X, 3);
    CHECK(P.rank == 3); // takes exactly r eigenvectors, zero eigenvalues included
    CHECK(reconstruction_error(X, P) <= 1e-10);
}

TEST_CASE("column_normalized_pca") {
    // scaling a column must not change the fitted subspace
    const DenseMatrix X = random_matrix(25, 5, 7);
    DenseMatrix Y = X;
    for (std::size_t i = 0; i < 25; ++i) Y(i, 2) *= 100.0;
    CHECK(projection_distance(column_normalized_pca(X, 2),
                              column_normalized_pca(Y, 2)) <= 1e-8);

    DenseMatrix Z = X;
    for (std::size_t i = 0; i < 25; ++i) Z(i, 1) = 0.0;
    CHECK_THROWS_AS(column_normalized_pca(Z, 2), ZeroColumn);
    CHECK_NOTHROW(column_normalized_pca(Z, 2, true));
}

TEST_CASE("weights_inverse_sign_norm") {
    DenseMatrix X(4, 3, 0.0);
    X(0, 0) = 2.0;
    X(1, 0) = -1.0;
    X(2, 0) = 5.0;
    X(3, 0) = 0.5; // 4 nonzeros -> w = 1/2
    X(0, 1) = 3.0; // 1 nonzero  -> w = 1
    const WeightVector w = weights_inverse_sign_norm(sign_of(X));
    CHECK(w.scheme == WeightScheme::InverseSignNorm);
    CHECK(w.weights[0] == doctest::Approx(0.5));
    CHECK(w.weights[1] == doctest::Approx(1.0));
    CHECK(w.weights[2] == 0.0); // empty column
}

TEST_CASE("block weight constructors") {
    const ItemPartition part = contiguous_partition(2, 5);
    DenseMatrix X(3, 5, 0.0);
    X(0, 0) = 1.0;
    X(1, 1) = 1.0; // ||X_p||_F^2 = 2
    X(2, 4) = 1.0; // ||X_u||_F^2 = 1
    const WeightVector wp = weights_proper(X, part);
    CHECK(wp.weights[0] == doctest::Approx(0.5));
    CHECK(wp.weights[1] == doctest::Approx(0.5));
    CHECK(wp.weights[2] == doctest::Approx(1.0));
    CHECK(wp.weights[4] == doctest::Approx(1.0));

    DenseMatrix empty_u(3, 5, 0.0);
    empty_u(0, 0) = 1.0;
    CHECK_THROWS_AS(weights_proper(empty_u, part), EmptyBlock);

    const WeightVector wi = weights_interpolate(part, 16.0, 4.0);
    CHECK(wi.weights[0] == doctest::Approx(0.25));
    CHECK(wi.weights[3] == doctest::Approx(0.5));
    CHECK_THROWS_AS(weights_interpolate(part, 4.0, 16.0), Error); // needs n_p > n_u

    const WeightVector wt = weights_interpolate_text(part, 16.0, 4.0);
    CHECK(wt.weights[0] == doctest::Approx(4.0));
    CHECK(wt.weights[3] == doctest::Approx(2.0));

    const WeightVector wu = weights_uniform(4);
    CHECK(wu.weights == std::vector<double>(4, 1.0));
}

TEST_CASE("fantope_linmax extracts top eigenvectors and flags degeneracy") {
    // distinct spectrum: clean cut
    DenseMatrix A(4, 4, 0.0);
    A(0, 0) = 4.0;
    A(1, 1) = 3.0;
    A(2, 2) = 2.0;
    A(3, 3) = 1.0;
    auto [P, rep] = fantope_linmax(A, 2);
    CHECK(P.rank == 2);
    CHECK(rep.achieved_rank == 2);
    CHECK_FALSE(rep.degenerate_cut);
    CHECK(rep.objective_value == doctest::Approx(7.0));
    CHECK(P.matrix(0, 0) == doctest::Approx(1.0));
    CHECK(P.matrix(1, 1) == doctest::Approx(1.0));
    CHECK(P.matrix(2, 2) == doctest::Approx(0.0).epsilon(1e-9));

    // negative eigenvalues are never selected
    DenseMatrix B(3, 3, 0.0);
    B(0, 0) = 5.0;
    B(1, 1) = -1.0;
    B(2, 2) = -2.0;
    auto [Pb, repb] = fantope_linmax(B, 2);
    CHECK(Pb.rank == 1);
    CHECK(repb.objective_value == doctest::Approx(5.0));

    // tied eigenvalues at the cut
    DenseMatrix C(3, 3, 0.0);
    C(0, 0) = 2.0;
    C(1, 1) = 1.0;
    C(2, 2) = 1.0;
    auto [Pc, repc] = fantope_linmax(C, 2);
    CHECK(repc.degenerate_cut);
    CHECK(Pc.rank == 2);

    CHECK_THROWS_AS(fantope_linmax(A, 0), Error);
    CHECK_THROWS_AS(fantope_linmax(A, 5), Error);
    DenseMatrix NS(2, 2, {1.0, 2.0, 0.0, 1.0});
    CHECK_THROWS_AS(fantope_linmax(NS, 1), NonSymmetric);
}

TEST_CASE("fantope_linmax objective is optimal among random projections") {
    Rng rng(13);
    DenseMatrix A(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i; j < 6; ++j) {
            const double v = rng.normal();
            A(i, j) = v;
            A(j, i) = v;
        }
    auto [P, rep] = fantope_linmax(A, 3);

    // tr(A P) for a candidate projection
    auto objective = [&](const Projection& Q) {
        double t = 0.0;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) t += A(i, j) * Q.matrix(j, i);
        return t;
    };
    CHECK(objective(P) == doctest::Approx(rep.objective_value).epsilon(1e-9));

    for (std::uint64_t s = 1; s <= 20; ++s) {
        // Gram-Schmidt a random 3-frame
        DenseMatrix U = random_matrix(6, 3, s + 100);
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                double dot = 0.0;
                for (std::size_t i = 0; i < 6; ++i) dot += U(i, j) * U(i, k);
                for (std::size_t i = 0; i < 6; ++i) U(i, j) -= dot * U(i, k);
            }
            double norm = 0.0;
            for (std::size_t i = 0; i < 6; ++i) norm += U(i, j) * U(i, j);
            norm = std::sqrt(norm);
            for (std::size_t i = 0; i < 6; ++i) U(i, j) /= norm;
        }
        CHECK(objective(projection_from_basis(U)) <= rep.objective_value + 1e-9);
    }
}

TEST_CASE("item_weighted_pca with uniform weights matches vanilla on binary data") {
    Rng rng(21);
    DenseMatrix X(30, 6, 0.0);
    for (auto& v : X.values()) v = rng.uniform() < 0.3 ? 1.0 : 0.0;
    // For binary X, S = X so A = X^T X and the subspaces coincide.
    auto [P, rep] = item_weighted_pca(X, weights_uniform(6), 3);
    const Projection V = vanilla_pca(X, 3);
    CHECK(projection_distance(P, V) <= 1e-8);
    CHECK(rep.objective_value ==
          doctest::Approx(weighted_sign_objective(X, weights_uniform(6), P))
              .epsilon(1e-9));
}

TEST_CASE("item_weighted_pca input validation") {
    const DenseMatrix X = random_matrix(10, 4, 3);
    WeightVector w = weights_uniform(3); // wrong length
    CHECK_THROWS_AS(item_weighted_pca(X, w, 2), DimensionMismatch);
}

TEST_CASE("weighting zeroes out an item's influence") {
    // weight 0 on a column removes it from the objective, so the solution
    // concentrates on the remaining columns
    DenseMatrix X(20, 3, 0.0);
    Rng rng(31);
    for (std::size_t i = 0; i < 20; ++i) {
        X(i, 0) = rng.uniform() < 0.9 ? 1.0 : 0.0;
        X(i, 1) = rng.uniform() < 0.9 ? 1.0 : 0.0;
        X(i, 2) = rng.uniform() < 0.2 ? 1.0 : 0.0;
    }
    WeightVector w;
    w.weights = {0.0, 0.0, 1.0};
    auto [P, rep] = item_weighted_pca(X, w, 1);
    CHECK(P.matrix(2, 2) > P.matrix(0, 0));
    CHECK(P.matrix(2, 2) > P.matrix(1, 1));
    CHECK(P.matrix(2, 2) > 0.5);
}

TEST_CASE("constrained solve respects the error budget") {
    Rng rng(8);
    DenseMatrix X(40, 8, 0.0);
    for (auto& v : X.values()) v = rng.uniform() < 0.25 ? 1.0 : 0.0;
    // skew the weights hard toward the last columns so the unconstrained
    // solution strays from the vanilla subspace
    WeightVector w;
    w.weights = {0.01, 0.01, 0.01, 0.01, 1.0, 1.0, 1.0, 1.0};

    const std::size_t r = 3;
    const Projection V = vanilla_pca(X, r);
    const double e_r = reconstruction_error(X, V);
    const double slack = 0.1;

    // the solver's feasibility tolerance is relative to the total energy
    const double tol = 1e-6 * std::max(1.0, frobenius_norm_sq(X));
    auto [P, rep] = item_weighted_pca_constrained(X, w, r, slack);
    const double err = reconstruction_error(X, P);
    CHECK(err <= (1.0 + slack) * e_r + tol);
    CHECK(rep.multiplier >= 0.0);

    // huge slack: constraint inactive, matches the unconstrained solve
    auto [Pu, repu] = item_weighted_pca(X, w, r);
    auto [Pc, repc] = item_weighted_pca_constrained(X, w, r, 1e6);
    CHECK(projection_distance(Pu, Pc) <= 1e-6);
    CHECK(repc.multiplier == doctest::Approx(0.0));

    // slack 0 forces the vanilla error level
    auto [P0, rep0] = item_weighted_pca_constrained(X, w, r, 0.0);
    CHECK(reconstruction_error(X, P0) <= e_r + tol);
}

TEST_CASE("constrained solve is deterministic") {
    Rng rng(15);
    DenseMatrix X(25, 5, 0.0);
    for (auto& v : X.values()) v = rng.uniform() < 0.4 ? 1.0 : 0.0;
    WeightVector w;
    w.weights = {1.0, 0.5, 0.25, 2.0, 0.1};
    auto [Pa, ra] = item_weighted_pca_constrained(X, w, 2, 0.2);
    auto [Pb, rb] = item_weighted_pca_constrained(X, w, 2, 0.2);
    CHECK(Pa.matrix.values() == Pb.matrix.values());
    CHECK(ra.multiplier == rb.multiplier);
}
