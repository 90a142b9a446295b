#include "iwpca/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "iwpca/rng.hpp"

namespace iwpca {

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Vanilla: return "vanilla";
        case Algorithm::ColumnNormalized: return "colnorm";
        case Algorithm::ItemWeighted: return "iwpca";
    }
    return "vanilla";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "vanilla") return Algorithm::Vanilla;
    if (name == "colnorm") return Algorithm::ColumnNormalized;
    if (name == "iwpca") return Algorithm::ItemWeighted;
    throw Error("unknown algorithm '" + name + "'");
}

Projection fit_algorithm(const DenseMatrix& X, Algorithm algo, std::size_t r) {
    switch (algo) {
        case Algorithm::Vanilla:
            return vanilla_pca(X, r);
        case Algorithm::ColumnNormalized:
            // corrupted sweeps can empty out a column
            return column_normalized_pca(X, r, /*keep_zero_cols=*/true);
        case Algorithm::ItemWeighted: {
            const WeightVector w = weights_inverse_sign_norm(sign_of(X));
            return item_weighted_pca(X, w, r).first;
        }
    }
    throw Error("fit_algorithm: unreachable");
}

double auc_score(const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size())
        throw DimensionMismatch("auc_score: scores and labels differ in length");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (bool y : labels)
        if (y) ++n_pos;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw Error("auc_score: needs both positive and negative labels");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // midranks over tied score groups
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k)
            if (labels[order[k]]) rank_sum_pos += midrank;
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

EvalReport item_auc(const DenseMatrix& X, const Projection& P) {
    if (X.cols() != P.dim())
        throw DimensionMismatch("item_auc: X has " + std::to_string(X.cols()) +
                                " items, projection dimension is " +
                                std::to_string(P.dim()));
    const std::size_t n = X.rows(), d = X.cols();

    Projection Pz = P;
    for (std::size_t j = 0; j < d; ++j) Pz.matrix(j, j) = 0.0;
    const DenseMatrix scores = multiply(X, Pz.matrix);

    EvalReport report;
    report.rank = P.rank;
    double sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        std::size_t n_pos = 0;
        std::vector<double> s(n);
        std::vector<bool> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = scores(i, j);
            y[i] = X(i, j) > 0.0;
            if (y[i]) ++n_pos;
        }
        if (n_pos == 0) {
            report.excluded_items.push_back({j, "no positive labels"});
            continue;
        }
        if (n_pos == n) {
            report.excluded_items.push_back({j, "no negative labels"});
            continue;
        }
        const double auc = auc_score(s, y);
        report.items.push_back(j);
        report.per_item_auc.push_back(auc);
        sum += auc;
    }
    if (!report.items.empty()) sum /= static_cast<double>(report.items.size());
    report.mean_auc = sum;
    return report;
}

double normalized_item_error(const DenseMatrix& X, const Projection& P, std::size_t j) {
    if (X.cols() != P.dim())
        throw DimensionMismatch("normalized_item_error: dimension mismatch");
    const std::size_t n = X.rows(), d = X.cols();
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) w += X(i, j) * X(i, j);
    if (w == 0.0)
        throw ZeroColumn("normalized_item_error: column " + std::to_string(j) +
                         " is zero");
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double xhat = 0.0;
        for (std::size_t k = 0; k < d; ++k) xhat += X(i, k) * P.matrix(k, j);
        const double dlt = X(i, j) - xhat;
        err += dlt * dlt;
    }
    return err / w;
}

std::vector<std::size_t> components_to_half_error_all(const DenseMatrix& X) {
    const std::size_t d = X.cols();
    const SymEigResult eig = sym_eig(gram(X));

    // err_j(r) = ||X_.j||^2 - sum_{i<=r} lambda_i v_ij^2 along the vanilla
    // sequence, so the whole sweep needs one eigendecomposition.
    std::vector<std::size_t> out(d, std::numeric_limits<std::size_t>::max());
    for (std::size_t j = 0; j < d; ++j) {
        double w = 0.0;
        for (std::size_t i = 0; i < X.rows(); ++i) w += X(i, j) * X(i, j);
        if (w == 0.0) continue;
        double err = w;
        for (std::size_t r = 1; r <= d; ++r) {
            const double v = eig.eigenvectors(j, r - 1);
            err -= std::max(0.0, eig.eigenvalues[r - 1]) * v * v;
            if (err <= 0.5 * w) {
                out[j] = r;
                break;
            }
        }
    }
    return out;
}

std::size_t components_to_half_error(const DenseMatrix& X, std::size_t j) {
    double w = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i) w += X(i, j) * X(i, j);
    if (w == 0.0)
        throw ZeroColumn("components_to_half_error: column " + std::to_string(j) +
                         " is zero");
    return components_to_half_error_all(X)[j];
}

std::vector<double> diagonal_by_popularity(const Projection& P,
                                           const std::vector<double>& popularity,
                                           std::size_t groups) {
    const std::size_t d = P.dim();
    if (popularity.size() != d)
        throw DimensionMismatch("diagonal_by_popularity: popularity length mismatch");
    if (groups < 2) throw Error("diagonal_by_popularity: need at least 2 groups");
    if (groups > d) throw Error("diagonal_by_popularity: more groups than items");

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return popularity[a] > popularity[b];
    });

    const std::size_t base = d / groups, rem = d % groups;
    std::vector<double> means(groups, 0.0);
    std::size_t pos = 0;
    for (std::size_t g = 0; g < groups; ++g) {
        // remainder goes to the less popular bins
        const std::size_t size = base + (g >= groups - rem ? 1 : 0);
        double s = 0.0;
        for (std::size_t k = 0; k < size; ++k, ++pos) {
            const std::size_t j = order[pos];
            s += P.matrix(j, j);
        }
        means[g] = s / static_cast<double>(size);
    }
    return means;
}

std::vector<EvalReport> rank_sweep(const DenseMatrix& X,
                                   const std::vector<Algorithm>& algorithms,
                                   const std::vector<std::size_t>& ranks) {
    std::vector<EvalReport> out;
    for (Algorithm algo : algorithms) {
        for (std::size_t r : ranks) {
            const Projection P = fit_algorithm(X, algo, r);
            EvalReport report = item_auc(X, P);
            report.algorithm = algorithm_name(algo);
            out.push_back(std::move(report));
        }
    }
    return out;
}

std::vector<std::pair<double, double>> robustness_sweep(
    const DenseMatrix& X, Algorithm algo, std::size_t r,
    const std::vector<double>& alphas, std::uint64_t seed) {
    std::vector<std::pair<double, double>> out;
    PreferenceMatrix pref;
    pref.matrix = X;
    for (std::size_t idx = 0; idx < alphas.size(); ++idx) {
        const double alpha = alphas[idx];
        const std::uint64_t cell_seed = derive_seed(seed, idx);
        const PreferenceMatrix corrupted = remove_entries(pref, alpha, cell_seed);
        const Projection P = fit_algorithm(corrupted.matrix, algo, r);
        // labels come from the uncorrupted matrix
        const EvalReport report = item_auc(X, P);
        out.emplace_back(alpha, report.mean_auc);
    }
    return out;
}

} // namespace iwpca
