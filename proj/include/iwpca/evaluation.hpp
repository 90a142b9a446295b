#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iwpca/algorithms.hpp"
#include "iwpca/ingest.hpp"
#include "iwpca/projection.hpp"

namespace iwpca {

enum class Algorithm { Vanilla, ColumnNormalized, ItemWeighted };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

// Fits one of the three algorithms at rank r. Item-Weighted PCA uses
// inverse-sign-norm weights, the paper's experimental default.
Projection fit_algorithm(const DenseMatrix& X, Algorithm algo, std::size_t r);

struct ExcludedItem {
    std::size_t item;
    std::string reason;
};

struct EvalReport {
    std::vector<std::size_t> items;   // items with a defined AUC
    std::vector<double> per_item_auc; // aligned with items
    std::vector<ExcludedItem> excluded_items;
    double mean_auc = 0.0; // over included items only
    std::size_t rank = 0;
    std::string algorithm;
    std::string dataset;
};

// Mann-Whitney AUC with midrank tie handling.
double auc_score(const std::vector<double>& scores, const std::vector<bool>& labels);

// Scores for item j are column j of X * P' where P' is P with the
// diagonal zeroed; labels are X_.j > 0. Items lacking positives or
// negatives are excluded from the mean.
EvalReport item_auc(const DenseMatrix& X, const Projection& P);
inline EvalReport item_auc(const PreferenceMatrix& X, const Projection& P) {
    return item_auc(X.matrix, P);
}

// ||X_.j - (XP)_.j||^2 / ||X_.j||^2. Throws ZeroColumn.
double normalized_item_error(const DenseMatrix& X, const Projection& P, std::size_t j);

// Smallest r with normalized item error <= 0.5 along the vanilla-PCA
// sequence, for every column, from a single eigendecomposition. Zero
// columns get SIZE_MAX.
std::vector<std::size_t> components_to_half_error_all(const DenseMatrix& X);
std::size_t components_to_half_error(const DenseMatrix& X, std::size_t j);

// Items ranked by popularity (descending), split into contiguous bins of
// near-equal size with the remainder pushed to the less popular bins;
// returns the mean diagonal of P per bin, most popular first.
std::vector<double> diagonal_by_popularity(const Projection& P,
                                           const std::vector<double>& popularity,
                                           std::size_t groups = 3);

std::vector<EvalReport> rank_sweep(const DenseMatrix& X,
                                   const std::vector<Algorithm>& algorithms,
                                   const std::vector<std::size_t>& ranks);

// For each alpha, fit on the corrupted matrix and evaluate against the
// uncorrupted X as label source. Per-cell seeds are derived from
// (seed, alpha index) so evaluation order cannot change results.
std::vector<std::pair<double, double>> robustness_sweep(
    const DenseMatrix& X, Algorithm algo, std::size_t r,
    const std::vector<double>& alphas, std::uint64_t seed);

} // namespace iwpca
