#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iwpca/algorithms.hpp"

namespace iwpca {

// Popular-block Bernoulli columns plus a sparse unpopular tail.
struct StylizedSpec {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t M = 0; // popular column count
    double p_lo = 0.1;
    double p_hi = 1.0;
    std::size_t K = 1; // ones per unpopular column
    std::uint64_t seed = 0;
};

// Block-exclusive binary matrix parameters: every popular item is liked
// by exactly n_p users from a popular-user pool, every unpopular item by
// exactly n_u users from a disjoint pool.
struct BlockSpec {
    std::size_t n_p = 0;
    std::size_t n_u = 0;
    std::size_t d_p = 0;
    std::size_t d_u = 0;
    std::uint64_t seed = 0;
    // 0 = auto (2 * n_b + d_b). Explicit pools below the per-item count
    // throw PoolTooSmall.
    std::size_t pool_p = 0;
    std::size_t pool_u = 0;
};

// Prescribed exponentially-decaying block spectra.
struct SpectrumSpec {
    std::size_t r = 0;    // block rank
    double beta = 2.0;    // decay, > 1
    double lambda1_p = 0.0;
    double lambda1_u = 0.0;
};

struct CheckReport {
    std::string name;
    bool pass = false;
    std::vector<std::uint64_t> seeds;
    std::vector<std::pair<std::string, double>> stats;

    void stat(const std::string& key, double value) { stats.emplace_back(key, value); }
};

DenseMatrix gen_popular_unpopular(const StylizedSpec& spec);

// One distance per schedule entry: ||P_n - I_{n,M}||_F with P_n the
// vanilla-PCA projection at rank M. Requires the schedule sorted by n
// and d_n <= 4 * sqrt(n).
std::vector<std::pair<std::size_t, double>> check_theorem1(
    const std::vector<StylizedSpec>& schedule);

// Median distance over n_seeds per n; passes when medians strictly
// decrease and the final is below half the initial.
CheckReport theorem1_verdict(const std::vector<std::size_t>& ns, std::size_t M,
                             std::size_t K, std::size_t n_seeds,
                             std::uint64_t base_seed);

std::pair<DenseMatrix, ItemPartition> gen_block_exclusive(const BlockSpec& spec);

// Sum of per-block relative squared reconstruction errors, computed from
// the column-masked copies of X and X_hat = XP.
double popnorm_loss(const DenseMatrix& X, const ItemPartition& part,
                    const Projection& P);

// Brute force over all (d choose r) eigenvector subsets of X^T X.
// Valid on block-exclusive matrices, where some optimal projection is
// spanned by eigenvectors of the block-diagonal Gram. d <= 20.
std::pair<double, Projection> oracle_min_popnorm_loss(const DenseMatrix& X,
                                                      const ItemPartition& part,
                                                      std::size_t r);

// Proper-weight Item-Weighted PCA attains the oracle loss and beats both
// baselines.
CheckReport check_theorem3(const BlockSpec& spec, std::size_t r);

// Uniform weights reproduce vanilla PCA's subspace; 1/n weights reproduce
// column-normalized PCA's. Regenerates with a bumped seed when the
// spectrum gap at the cut is below 1e-8.
CheckReport check_proposition4(const BlockSpec& spec, std::size_t r);

// Merges the weighted block spectra and takes the top r; exact ties
// alternate p, u, p, u, ... starting with p.
std::pair<std::size_t, std::size_t> select_components_from_spectra(
    const std::vector<double>& spectra_p, const std::vector<double>& spectra_u,
    double w_p, double w_u, std::size_t r);

// Gram-level interpolation check: block-diagonal G with prescribed
// decaying spectra and random orthonormal bases; asserts the
// (r,0) / (0,r) / (r/2,r/2) component splits for the three weightings.
CheckReport check_theorem5_gram(const SpectrumSpec& spec, std::size_t d_p,
                                std::size_t d_u, double n_p, double n_u,
                                std::size_t r, std::uint64_t seed);

// Every vanilla rank step reduces the error by exactly sigma_r^2.
CheckReport check_diminishing_returns(const DenseMatrix& X);

struct BernoulliRow {
    std::size_t n;
    double mean_smin_sq;
    double p1;
    double p99;
};

// Smallest squared singular value of n x M Bernoulli matrices; the
// Bernoulli parameters are drawn once, the matrix `trials` times per n.
std::vector<BernoulliRow> bernoulli_scaling(std::size_t M,
                                            const std::vector<std::size_t>& ns,
                                            std::size_t trials, std::uint64_t seed);

// Least-squares fit of mean smallest squared singular value against n;
// passes when R^2 >= 0.95.
CheckReport bernoulli_verdict(std::size_t M, const std::vector<std::size_t>& ns,
                              std::size_t trials, std::uint64_t seed);

} // namespace iwpca
