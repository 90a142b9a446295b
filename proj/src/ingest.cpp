#include "iwpca/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "iwpca/rng.hpp"

namespace iwpca {
namespace {

std::vector<std::string> split(const std::string& line, const std::string& sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + sep.size();
    }
    return out;
}

long long parse_ll(const std::string& s, long line_no, const char* field) {
    try {
        std::size_t consumed = 0;
        long long v = std::stoll(s, &consumed);
        if (consumed != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("cannot parse ") + field + " from '" + s + "'",
                         line_no);
    }
}

double parse_double(const std::string& s, long line_no, const char* field) {
    try {
        std::size_t consumed = 0;
        double v = std::stod(s, &consumed);
        if (consumed != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("cannot parse ") + field + " from '" + s + "'",
                         line_no);
    }
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

} // namespace

std::string normalization_name(Normalization n) {
    switch (n) {
        case Normalization::Raw: return "raw";
        case Normalization::RowL1: return "row_l1";
        case Normalization::RowL2: return "row_l2";
        case Normalization::ColumnUnit: return "column_unit";
    }
    return "raw";
}

PreferenceMatrix load_lastfm(const std::string& user_artists_file,
                             std::size_t min_artist_listeners,
                             std::size_t min_user_total) {
    std::ifstream in(user_artists_file);
    if (!in) throw Error("load_lastfm: cannot open " + user_artists_file);

    // (user, artist) -> summed weight; duplicates are aggregated
    std::map<std::pair<long long, long long>, double> entries;
    std::unordered_map<long long, std::set<long long>> listeners; // artist -> users

    std::string line;
    long line_no = 0;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        if (!header_skipped) {
            header_skipped = true;
            continue;
        }
        const auto fields = split(line, "\t");
        if (fields.size() != 3)
            throw ParseError("expected 3 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        const long long user = parse_ll(fields[0], line_no, "userID");
        const long long artist = parse_ll(fields[1], line_no, "artistID");
        const double weight = parse_double(fields[2], line_no, "weight");
        if (weight <= 0.0)
            throw ParseError("weight must be positive, got '" + fields[2] + "'", line_no);
        entries[{user, artist}] += weight;
        listeners[artist].insert(user);
    }

    // Pass 1: artists with enough distinct listeners.
    std::set<long long> kept_artists;
    for (const auto& [artist, users] : listeners)
        if (users.size() >= min_artist_listeners) kept_artists.insert(artist);

    // Pass 2: users with enough total count over surviving artists.
    std::map<long long, double> user_totals;
    for (const auto& [key, weight] : entries)
        if (kept_artists.count(key.second)) user_totals[key.first] += weight;
    std::vector<long long> kept_users;
    for (const auto& [user, total] : user_totals)
        if (total >= static_cast<double>(min_user_total)) kept_users.push_back(user);

    if (kept_artists.empty() || kept_users.empty())
        throw EmptyResult("load_lastfm: filters removed all rows or columns");

    PreferenceMatrix out;
    out.user_ids = kept_users;
    out.item_ids.assign(kept_artists.begin(), kept_artists.end());
    out.normalization = Normalization::Raw;

    std::unordered_map<long long, std::size_t> urow, acol;
    for (std::size_t i = 0; i < out.user_ids.size(); ++i) urow[out.user_ids[i]] = i;
    for (std::size_t j = 0; j < out.item_ids.size(); ++j) acol[out.item_ids[j]] = j;

    out.matrix = DenseMatrix(out.user_ids.size(), out.item_ids.size(), 0.0);
    for (const auto& [key, weight] : entries) {
        auto u = urow.find(key.first);
        auto a = acol.find(key.second);
        if (u != urow.end() && a != acol.end()) out.matrix(u->second, a->second) = weight;
    }
    return out;
}

PreferenceMatrix load_movielens(const std::string& ratings_file,
                                const std::string& movies_file,
                                std::size_t per_genre, std::size_t top_users) {
    std::ifstream movies_in(movies_file);
    if (!movies_in) throw Error("load_movielens: cannot open " + movies_file);

    std::map<std::string, std::vector<long long>> genre_movies;
    {
        std::string line;
        long line_no = 0;
        while (std::getline(movies_in, line)) {
            ++line_no;
            line = strip_cr(line);
            if (line.empty()) continue;
            const auto fields = split(line, "::");
            if (fields.size() != 3)
                throw ParseError("expected MovieID::Title::Genres", line_no);
            const long long movie = parse_ll(fields[0], line_no, "movieID");
            for (const auto& genre : split(fields[2], "|"))
                if (!genre.empty()) genre_movies[genre].push_back(movie);
        }
    }

    std::ifstream ratings_in(ratings_file);
    if (!ratings_in) throw Error("load_movielens: cannot open " + ratings_file);

    struct RatingRow {
        long long user, movie;
        int rating;
    };
    std::vector<RatingRow> ratings;
    std::unordered_map<long long, std::size_t> movie_rating_count;
    {
        std::string line;
        long line_no = 0;
        while (std::getline(ratings_in, line)) {
            ++line_no;
            line = strip_cr(line);
            if (line.empty()) continue;
            const auto fields = split(line, "::");
            if (fields.size() != 4)
                throw ParseError("expected UserID::MovieID::Rating::Timestamp", line_no);
            RatingRow row;
            row.user = parse_ll(fields[0], line_no, "userID");
            row.movie = parse_ll(fields[1], line_no, "movieID");
            row.rating = static_cast<int>(parse_ll(fields[2], line_no, "rating"));
            if (row.rating < 1 || row.rating > 5)
                throw ParseError("rating must be in 1..5, got '" + fields[2] + "'",
                                 line_no);
            ratings.push_back(row);
            ++movie_rating_count[row.movie];
        }
    }

    // Per genre (lexicographic), take the top per_genre movies by rating
    // count, ties to the smaller movieID, skipping already-selected ones.
    std::set<long long> selected_set;
    std::vector<long long> selected;
    for (const auto& [genre, movies] : genre_movies) {
        std::vector<long long> candidates(movies.begin(), movies.end());
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()),
                         candidates.end());
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&](long long a, long long b) {
                             const std::size_t ca = movie_rating_count.count(a)
                                                        ? movie_rating_count.at(a)
                                                        : 0;
                             const std::size_t cb = movie_rating_count.count(b)
                                                        ? movie_rating_count.at(b)
                                                        : 0;
                             if (ca != cb) return ca > cb;
                             return a < b;
                         });
        std::size_t taken = 0;
        for (long long movie : candidates) {
            if (taken == per_genre) break;
            if (selected_set.insert(movie).second) {
                selected.push_back(movie);
                ++taken;
            }
        }
    }
    if (selected.empty()) throw EmptyResult("load_movielens: no movies selected");

    // Top users by number of ratings over the selected movies, ties to the
    // smaller userID.
    std::map<long long, std::size_t> user_counts;
    for (const auto& row : ratings)
        if (selected_set.count(row.movie)) ++user_counts[row.user];
    std::vector<std::pair<long long, std::size_t>> users(user_counts.begin(),
                                                         user_counts.end());
    std::stable_sort(users.begin(), users.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (users.size() > top_users) users.resize(top_users);
    if (users.empty()) throw EmptyResult("load_movielens: no users kept");

    std::vector<long long> kept_users;
    kept_users.reserve(users.size());
    for (const auto& [user, count] : users) kept_users.push_back(user);
    std::sort(kept_users.begin(), kept_users.end());

    std::sort(selected.begin(), selected.end());

    PreferenceMatrix out;
    out.user_ids = kept_users;
    out.item_ids = selected;
    out.normalization = Normalization::Raw;

    std::unordered_map<long long, std::size_t> urow, mcol;
    for (std::size_t i = 0; i < kept_users.size(); ++i) urow[kept_users[i]] = i;
    for (std::size_t j = 0; j < selected.size(); ++j) mcol[selected[j]] = j;

    static const double remap[6] = {0.0, -2.0, -1.0, 1.0, 2.0, 3.0};
    out.matrix = DenseMatrix(kept_users.size(), selected.size(), 0.0);
    for (const auto& row : ratings) {
        auto u = urow.find(row.user);
        auto m = mcol.find(row.movie);
        if (u != urow.end() && m != mcol.end())
            out.matrix(u->second, m->second) = remap[row.rating];
    }
    return out;
}

PreferenceMatrix row_normalize(const PreferenceMatrix& X, bool use_l2) {
    PreferenceMatrix out = X;
    const std::size_t n = X.matrix.rows(), d = X.matrix.cols();
    for (std::size_t i = 0; i < n; ++i) {
        double norm = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double v = X.matrix(i, j);
            norm += use_l2 ? v * v : std::fabs(v);
        }
        if (use_l2) norm = std::sqrt(norm);
        if (norm <= 0.0)
            throw ZeroRow("row_normalize: zero row for user id " +
                          std::to_string(X.user_ids.empty() ? static_cast<long long>(i)
                                                            : X.user_ids[i]));
        for (std::size_t j = 0; j < d; ++j) out.matrix(i, j) = X.matrix(i, j) / norm;
    }
    out.normalization = use_l2 ? Normalization::RowL2 : Normalization::RowL1;
    return out;
}

SignMatrix sign_of(const DenseMatrix& X) {
    SignMatrix S;
    S.matrix = DenseMatrix(X.rows(), X.cols());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) {
            const double v = X(i, j);
            S.matrix(i, j) = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
        }
    return S;
}

PreferenceMatrix remove_entries(const PreferenceMatrix& X, double alpha,
                                std::uint64_t seed) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw Error("remove_entries: alpha must be in [0, 1)");
    PreferenceMatrix out = X;

    std::vector<std::size_t> nonzeros;
    const auto& vals = X.matrix.values();
    for (std::size_t k = 0; k < vals.size(); ++k)
        if (vals[k] != 0.0) nonzeros.push_back(k);

    const std::size_t remove = static_cast<std::size_t>(
        std::llround(alpha * static_cast<double>(nonzeros.size())));
    Rng rng(seed);
    // partial Fisher-Yates: the first `remove` slots are the sample
    for (std::size_t i = 0; i < remove; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(rng.uniform_index(nonzeros.size() - i));
        std::swap(nonzeros[i], nonzeros[j]);
        out.matrix.values()[nonzeros[i]] = 0.0;
    }
    return out;
}

std::vector<double> popularity(const DenseMatrix& X) {
    std::vector<double> sums(X.cols(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) sums[j] += X(i, j);
    return sums;
}

} // namespace iwpca
