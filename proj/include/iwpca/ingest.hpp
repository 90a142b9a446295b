#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iwpca/matrix.hpp"

namespace iwpca {

enum class Normalization { Raw, RowL1, RowL2, ColumnUnit };

std::string normalization_name(Normalization n);

// Users x items preference matrix with external identifiers.
struct PreferenceMatrix {
    DenseMatrix matrix; // n x d
    std::vector<long long> user_ids;
    std::vector<long long> item_ids;
    Normalization normalization = Normalization::Raw;
};

// Entries are exactly -1, 0 or +1.
struct SignMatrix {
    DenseMatrix matrix;
};

// LastFM user_artists.dat: header line, then TAB-separated
// (userID, artistID, weight). Artists with at least min_artist_listeners
// distinct users are kept first, then users whose total count over the
// surviving artists is at least min_user_total. One pass each, in that
// order.
PreferenceMatrix load_lastfm(const std::string& user_artists_file,
                             std::size_t min_artist_listeners = 50,
                             std::size_t min_user_total = 20);

// MovieLens-1M: ratings.dat rows UserID::MovieID::Rating::Timestamp,
// movies.dat rows MovieID::Title::Genre1|Genre2|...
// Genres are processed in lexicographic order; each contributes its top
// per_genre movies by rating count (ties to the smaller movieID),
// skipping movies already selected. The top_users users by rating count
// over the selected movies are kept. Ratings 1..5 map to -2,-1,1,2,3.
PreferenceMatrix load_movielens(const std::string& ratings_file,
                                const std::string& movies_file,
                                std::size_t per_genre = 30,
                                std::size_t top_users = 2000);

// Divides each row by its L1 norm (L2 behind the flag). Throws ZeroRow.
PreferenceMatrix row_normalize(const PreferenceMatrix& X, bool use_l2 = false);

SignMatrix sign_of(const DenseMatrix& X);
inline SignMatrix sign_of(const PreferenceMatrix& X) { return sign_of(X.matrix); }

// Zeroes exactly round(alpha * nnz) nonzero entries, chosen uniformly
// without replacement. Deterministic per (matrix, alpha, seed).
PreferenceMatrix remove_entries(const PreferenceMatrix& X, double alpha,
                                std::uint64_t seed);

// Column sums.
std::vector<double> popularity(const DenseMatrix& X);
inline std::vector<double> popularity(const PreferenceMatrix& X) {
    return popularity(X.matrix);
}

} // namespace iwpca
