#include "iwpca/algorithms.hpp"

#include <algorithm>
#include <cmath>

namespace iwpca {
namespace {

void check_rank(std::size_t r, std::size_t d) {
    if (r < 1 || r > d)
        throw RankOutOfRange("rank " + std::to_string(r) + " out of range [1, " +
                             std::to_string(d) + "]");
}

Projection top_r_projection(const SymEigResult& eig, std::size_t k) {
    const std::size_t d = eig.eigenvectors.rows();
    DenseMatrix U(d, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < d; ++i) U(i, j) = eig.eigenvectors(i, j);
    return projection_from_basis(U);
}

} // namespace

std::string weight_scheme_name(WeightScheme s) {
    switch (s) {
        case WeightScheme::Uniform: return "uniform";
        case WeightScheme::InverseSignNorm: return "inverse_sign_norm";
        case WeightScheme::Proper: return "proper";
        case WeightScheme::Interpolate: return "interpolate";
        case WeightScheme::InterpolateText: return "interpolate_text";
        case WeightScheme::Custom: return "custom";
    }
    return "custom";
}

WeightScheme weight_scheme_from_name(const std::string& name) {
    if (name == "uniform") return WeightScheme::Uniform;
    if (name == "inverse_sign_norm") return WeightScheme::InverseSignNorm;
    if (name == "proper") return WeightScheme::Proper;
    if (name == "interpolate") return WeightScheme::Interpolate;
    if (name == "interpolate_text") return WeightScheme::InterpolateText;
    if (name == "custom") return WeightScheme::Custom;
    throw Error("unknown weight scheme '" + name + "'");
}

ItemPartition contiguous_partition(std::size_t d_p, std::size_t d) {
    if (d_p == 0 || d_p >= d)
        throw Error("contiguous_partition: both blocks must be nonempty");
    ItemPartition part;
    for (std::size_t j = 0; j < d_p; ++j) part.popular.push_back(j);
    for (std::size_t j = d_p; j < d; ++j) part.unpopular.push_back(j);
    return part;
}

Projection vanilla_pca(const DenseMatrix& X, std::size_t r) {
    check_rank(r, X.cols());
    return top_r_projection(sym_eig(gram(X)), r);
}

Projection column_normalized_pca(const DenseMatrix& X, std::size_t r,
                                 bool keep_zero_cols) {
    const std::size_t n = X.rows(), d = X.cols();
    check_rank(r, d);
    std::vector<double> scale(d);
    for (std::size_t j = 0; j < d; ++j) {
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm_sq += X(i, j) * X(i, j);
        if (norm_sq == 0.0) {
            if (!keep_zero_cols)
                throw ZeroColumn("column_normalized_pca: column " + std::to_string(j) +
                                 " has zero norm");
            scale[j] = 1.0;
        } else {
            scale[j] = 1.0 / std::sqrt(norm_sq);
        }
    }
    DenseMatrix Xs(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) Xs(i, j) = X(i, j) * scale[j];
    return vanilla_pca(Xs, r);
}

WeightVector weights_uniform(std::size_t d) {
    WeightVector w;
    w.weights.assign(d, 1.0);
    w.scheme = WeightScheme::Uniform;
    return w;
}

WeightVector weights_inverse_sign_norm(const SignMatrix& S) {
    const std::size_t n = S.matrix.rows(), d = S.matrix.cols();
    WeightVector w;
    w.weights.assign(d, 0.0);
    w.scheme = WeightScheme::InverseSignNorm;
    for (std::size_t j = 0; j < d; ++j) {
        double nnz = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (S.matrix(i, j) != 0.0) nnz += 1.0;
        w.weights[j] = nnz > 0.0 ? 1.0 / std::sqrt(nnz) : 0.0;
    }
    return w;
}

WeightVector weights_proper(const DenseMatrix& X, const ItemPartition& part) {
    if (part.popular.empty() || part.unpopular.empty())
        throw EmptyBlock("weights_proper: partition block is empty");
    auto block_frob_sq = [&](const std::vector<std::size_t>& cols) {
        double s = 0.0;
        for (std::size_t j : cols)
            for (std::size_t i = 0; i < X.rows(); ++i) s += X(i, j) * X(i, j);
        return s;
    };
    const double fp = block_frob_sq(part.popular);
    const double fu = block_frob_sq(part.unpopular);
    if (fp == 0.0 || fu == 0.0)
        throw EmptyBlock("weights_proper: a block has no nonzero entries");

    WeightVector w;
    w.weights.assign(X.cols(), 0.0);
    w.scheme = WeightScheme::Proper;
    for (std::size_t j : part.popular) w.weights[j] = 1.0 / fp;
    for (std::size_t j : part.unpopular) w.weights[j] = 1.0 / fu;
    return w;
}

WeightVector weights_interpolate(const ItemPartition& part, double n_p, double n_u) {
    if (!(n_p > n_u && n_u > 0.0))
        throw Error("weights_interpolate: requires n_p > n_u > 0");
    WeightVector w;
    w.weights.assign(part.dim(), 0.0);
    w.scheme = WeightScheme::Interpolate;
    for (std::size_t j : part.popular) w.weights[j] = 1.0 / std::sqrt(n_p);
    for (std::size_t j : part.unpopular) w.weights[j] = 1.0 / std::sqrt(n_u);
    return w;
}

WeightVector weights_interpolate_text(const ItemPartition& part, double n_p,
                                      double n_u) {
    if (!(n_p > n_u && n_u > 0.0))
        throw Error("weights_interpolate_text: requires n_p > n_u > 0");
    WeightVector w;
    w.weights.assign(part.dim(), 0.0);
    w.scheme = WeightScheme::InterpolateText;
    for (std::size_t j : part.popular) w.weights[j] = std::sqrt(n_p);
    for (std::size_t j : part.unpopular) w.weights[j] = std::sqrt(n_u);
    return w;
}

std::pair<Projection, SolveReport> fantope_linmax(const DenseMatrix& A, std::size_t r) {
    require_symmetric(A, "fantope_linmax");
    const std::size_t d = A.rows();
    check_rank(r, d);

    SymEigResult eig = sym_eig(A);
    const double eps_pos = 1e-10 * std::max(1.0, max_abs(A));

    std::size_t positive = 0;
    while (positive < d && eig.eigenvalues[positive] > eps_pos) ++positive;
    const std::size_t k = std::min(r, positive);

    SolveReport report;
    report.achieved_rank = k;
    report.iterations = 1;
    for (std::size_t i = 0; i < k; ++i) report.objective_value += eig.eigenvalues[i];
    if (k > 0 && k < d)
        report.degenerate_cut =
            eig.eigenvalues[k - 1] - eig.eigenvalues[k] <= eps_pos;

    Projection P = (k == 0) ? zero_projection(d) : top_r_projection(eig, k);
    return {std::move(P), report};
}

double weighted_sign_objective(const DenseMatrix& X, const WeightVector& w,
                               const Projection& P) {
    const SignMatrix S = sign_of(X);
    const DenseMatrix Xhat = apply_projection(X, P);
    double obj = 0.0;
    for (std::size_t j = 0; j < X.cols(); ++j) {
        double dot = 0.0;
        for (std::size_t i = 0; i < X.rows(); ++i) dot += S.matrix(i, j) * Xhat(i, j);
        obj += w.weights[j] * dot;
    }
    return obj;
}

namespace {

// A = (D S^T X + X^T S D) / 2; exact for symmetric P since
// Tr(D S^T X P) = Tr(A P).
DenseMatrix weighted_objective_matrix(const DenseMatrix& X, const WeightVector& w) {
    if (w.weights.size() != X.cols())
        throw DimensionMismatch("item_weighted_pca: weight length " +
                                std::to_string(w.weights.size()) +
                                " does not match item count " +
                                std::to_string(X.cols()));
    const SignMatrix S = sign_of(X);
    const DenseMatrix M = multiply(transpose(S.matrix), X); // d x d
    const std::size_t d = X.cols();
    DenseMatrix A(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            A(i, j) = 0.5 * (w.weights[i] * M(i, j) + M(j, i) * w.weights[j]);
    return A;
}

} // namespace

std::pair<Projection, SolveReport> item_weighted_pca(const DenseMatrix& X,
                                                     const WeightVector& w,
                                                     std::size_t r) {
    const DenseMatrix A = weighted_objective_matrix(X, w);
    auto [P, report] = fantope_linmax(A, r);
    report.objective_value = weighted_sign_objective(X, w, P);
    return {std::move(P), report};
}

std::pair<Projection, SolveReport> item_weighted_pca_constrained(
    const DenseMatrix& X, const WeightVector& w, std::size_t r, double slack) {
    if (slack < 0.0) throw Error("item_weighted_pca_constrained: slack must be >= 0");
    const DenseMatrix A = weighted_objective_matrix(X, w);
    const DenseMatrix G = gram(X);
    const double total = frobenius_norm_sq(X);

    // Vanilla rank-r error; the constraint budget is (1 + slack) * E_r.
    SymEigResult geig = sym_eig(G);
    double top_sum = 0.0;
    for (std::size_t i = 0; i < std::min(r, geig.eigenvalues.size()); ++i)
        top_sum += std::max(0.0, geig.eigenvalues[i]);
    const double budget = (1.0 + slack) * (total - top_sum);
    const double residual_tol = 1e-6 * std::max(1.0, total);

    const std::size_t d = X.cols();
    auto solve_at = [&](double lambda) {
        DenseMatrix Al(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) Al(i, j) = A(i, j) + lambda * G(i, j);
        return fantope_linmax(Al, r);
    };
    auto linearized_error = [&](const Projection& P) {
        double traced = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) traced += G(i, j) * P.matrix(j, i);
        return total - traced;
    };

    constexpr std::size_t max_iter = 100;
    std::size_t iterations = 0;
    double last_violation = 0.0;

    auto [P0, rep0] = solve_at(0.0);
    ++iterations;
    double err0 = linearized_error(P0);
    if (err0 <= budget + residual_tol) {
        rep0.multiplier = 0.0;
        rep0.iterations = iterations;
        rep0.objective_value = weighted_sign_objective(X, w, P0);
        return {std::move(P0), rep0};
    }
    last_violation = err0 - budget;

    // Bracket: double lambda_hi until feasible.
    double lambda_lo = 0.0, lambda_hi = 1.0;
    Projection best;
    SolveReport best_report;
    bool have_feasible = false;
    while (iterations < max_iter) {
        auto [P, rep] = solve_at(lambda_hi);
        ++iterations;
        const double err = linearized_error(P);
        if (err <= budget + residual_tol) {
            best = std::move(P);
            best_report = rep;
            best_report.multiplier = lambda_hi;
            have_feasible = true;
            break;
        }
        last_violation = err - budget;
        lambda_lo = lambda_hi;
        lambda_hi *= 2.0;
    }
    if (!have_feasible)
        throw BisectionStall("item_weighted_pca_constrained: no feasible multiplier "
                             "found within iteration budget",
                             last_violation);

    // Shrink toward the smallest feasible lambda.
    while (iterations < max_iter &&
           lambda_hi - lambda_lo > 1e-6 * std::max(1.0, lambda_hi)) {
        const double mid = 0.5 * (lambda_lo + lambda_hi);
        auto [P, rep] = solve_at(mid);
        ++iterations;
        const double err = linearized_error(P);
        if (err <= budget + residual_tol) {
            lambda_hi = mid;
            best = std::move(P);
            best_report = rep;
            best_report.multiplier = mid;
        } else {
            last_violation = err - budget;
            lambda_lo = mid;
        }
    }

    best_report.iterations = iterations;
    best_report.objective_value = weighted_sign_objective(X, w, best);
    return {std::move(best), best_report};
}

} // namespace iwpca
