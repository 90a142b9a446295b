#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "iwpca/ingest.hpp"
#include "iwpca/rng.hpp"

using namespace iwpca;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path(std::string("/tmp/iwpca_test_") + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("load_lastfm applies the two filter passes in order") {
    // artists: 10 has 3 listeners, 20 has 2, 30 has 1
    const std::string content =
        "userID\tartistID\tweight\n"
        "1\t10\t5\n"
        "1\t20\t4\n"
        "2\t10\t4\n"
        "2\t20\t1\n"
        "3\t10\t8\n"
        "3\t30\t9\n";
    TempFile f("lastfm.dat", content);

    SUBCASE("artist below listener threshold is dropped") {
        const PreferenceMatrix X = load_lastfm(f.path, 2, 1);
        CHECK(X.item_ids == std::vector<long long>{10, 20});
        CHECK(X.user_ids == std::vector<long long>{1, 2, 3});
        CHECK(X.matrix(0, 0) == 5.0);
        CHECK(X.matrix(2, 1) == 0.0); // user 3 never listened to artist 20
    }

    SUBCASE("user filter counts only surviving artists") {
        // artist 30 (user 3's big count) is dropped first, so user 3 has
        // total 8 < 9 and is removed even though its raw total is 17;
        // user 1 (5 + 4 = 9) survives, user 2 (5) does not
        const PreferenceMatrix X = load_lastfm(f.path, 2, 9);
        CHECK(X.user_ids == std::vector<long long>{1});
        CHECK(X.item_ids == std::vector<long long>{10, 20});
    }

    SUBCASE("hand-enumerated fixture shape") {
        // thresholds (2, 3): artists {10, 20} survive; user totals over
        // them: u1=9, u2=5, u3=8 -> all three kept
        const PreferenceMatrix X = load_lastfm(f.path, 2, 3);
        CHECK(X.matrix.rows() == 3);
        CHECK(X.matrix.cols() == 2);
    }
}

TEST_CASE("load_lastfm error paths") {
    TempFile bad("lastfm_bad.dat", "userID\tartistID\tweight\n1\t10\n");
    CHECK_THROWS_AS(load_lastfm(bad.path, 1, 1), ParseError);
    try {
        load_lastfm(bad.path, 1, 1);
    } catch (const ParseError& e) {
        CHECK(e.line_number == 2);
    }

    TempFile empty("lastfm_empty.dat", "userID\tartistID\tweight\n1\t10\t5\n");
    CHECK_THROWS_AS(load_lastfm(empty.path, 99, 1), EmptyResult);
}

TEST_CASE("load_movielens remaps ratings and dedups genre winners") {
    // Movie 1 (Action|Comedy) is the top movie of both genres; it must be
    // selected once. per_genre = 1 gives: Action -> 1, Comedy -> 1 taken,
    // so next comedy movie 2 is selected.
    const std::string movies =
        "1::Alpha (2000)::Action|Comedy\n"
        "2::Beta (2001)::Comedy\n"
        "3::Gamma (2002)::Drama\n";
    const std::string ratings =
        "1::1::3::978300760\n"
        "2::1::5::978300761\n"
        "3::1::1::978300762\n"
        "1::2::4::978300763\n"
        "2::2::2::978300764\n"
        "1::3::5::978300765\n";
    TempFile mf("movies.dat", movies);
    TempFile rf("ratings.dat", ratings);

    const PreferenceMatrix X = load_movielens(rf.path, mf.path, 1, 10);
    CHECK(X.item_ids == std::vector<long long>{1, 2, 3});
    CHECK(X.user_ids == std::vector<long long>{1, 2, 3});
    // remap 1,2,3,4,5 -> -2,-1,1,2,3
    CHECK(X.matrix(0, 0) == 1.0);  // rating 3
    CHECK(X.matrix(1, 0) == 3.0);  // rating 5
    CHECK(X.matrix(2, 0) == -2.0); // rating 1
    CHECK(X.matrix(0, 1) == 2.0);  // rating 4
    CHECK(X.matrix(1, 1) == -1.0); // rating 2
}

TEST_CASE("load_movielens top_users keeps the heaviest raters") {
    const std::string movies = "1::Alpha::Action\n";
    const std::string ratings =
        "1::1::5::1\n"
        "2::1::4::2\n"
        "3::1::3::3\n";
    TempFile mf("movies2.dat", movies);
    TempFile rf("ratings2.dat", ratings);
    const PreferenceMatrix X = load_movielens(rf.path, mf.path, 1, 2);
    CHECK(X.user_ids.size() == 2);
    // equal counts, ties to smaller userID
    CHECK(X.user_ids == std::vector<long long>{1, 2});
}

TEST_CASE("row_normalize") {
    PreferenceMatrix X;
    X.matrix = DenseMatrix(1, 3, {2.0, 2.0, 0.0});
    X.user_ids = {7};
    X.item_ids = {1, 2, 3};
    const PreferenceMatrix Y = row_normalize(X);
    CHECK(Y.matrix(0, 0) == doctest::Approx(0.5));
    CHECK(Y.matrix(0, 1) == doctest::Approx(0.5));
    CHECK(Y.matrix(0, 2) == 0.0);
    CHECK(Y.normalization == Normalization::RowL1);

    // idempotence
    const PreferenceMatrix Z = row_normalize(Y);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(std::fabs(Z.matrix.values()[k] - Y.matrix.values()[k]) <= 1e-12);

    // random nonnegative rows sum to 1
    Rng rng(17);
    PreferenceMatrix R;
    R.matrix = DenseMatrix(10, 4);
    for (auto& v : R.matrix.values()) v = rng.uniform() + 0.01;
    const PreferenceMatrix Rn = row_normalize(R);
    for (std::size_t i = 0; i < 10; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 4; ++j) s += Rn.matrix(i, j);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }

    PreferenceMatrix zero;
    zero.matrix = DenseMatrix(1, 2, 0.0);
    zero.user_ids = {42};
    zero.item_ids = {1, 2};
    CHECK_THROWS_AS(row_normalize(zero), ZeroRow);
}

TEST_CASE("sign_of") {
    DenseMatrix X(2, 2, {2.0, -3.0, 0.0, 1.0});
    const SignMatrix S = sign_of(X);
    CHECK(S.matrix.values() == std::vector<double>{1.0, -1.0, 0.0, 1.0});

    const SignMatrix Z = sign_of(DenseMatrix(2, 3, 0.0));
    for (double v : Z.matrix.values()) CHECK(v == 0.0);

    // idempotence on sign matrices
    const SignMatrix S2 = sign_of(S.matrix);
    CHECK(S2.matrix.values() == S.matrix.values());
}

TEST_CASE("remove_entries") {
    PreferenceMatrix X;
    X.matrix = DenseMatrix(2, 5, {1, 0, 2, 3, 0, 4, 5, 0, 6, 7}); // 7 nonzeros
    X.user_ids = {1, 2};
    X.item_ids = {1, 2, 3, 4, 5};

    SUBCASE("alpha 0 is the identity") {
        const PreferenceMatrix Y = remove_entries(X, 0.0, 123);
        CHECK(Y.matrix.values() == X.matrix.values());
    }

    SUBCASE("exact removal count and no new nonzeros") {
        PreferenceMatrix ten;
        ten.matrix = DenseMatrix(2, 5, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
        const PreferenceMatrix Y = remove_entries(ten, 0.5, 9);
        std::size_t nnz = 0;
        for (std::size_t k = 0; k < 10; ++k) {
            const double v = Y.matrix.values()[k];
            if (v != 0.0) {
                ++nnz;
                CHECK(v == ten.matrix.values()[k]); // untouched entries bit-exact
            }
        }
        CHECK(nnz == 5);
    }

    SUBCASE("same seed, same output") {
        const PreferenceMatrix A = remove_entries(X, 0.4, 77);
        const PreferenceMatrix B = remove_entries(X, 0.4, 77);
        CHECK(A.matrix.values() == B.matrix.values());
    }

    CHECK_THROWS_AS(remove_entries(X, 1.0, 0), Error);
}

TEST_CASE("popularity is column sums") {
    CHECK(popularity(DenseMatrix::identity(3)) == std::vector<double>{1.0, 1.0, 1.0});

    Rng rng(4);
    DenseMatrix X(6, 3);
    for (auto& v : X.values()) v = rng.normal();
    const auto pops = popularity(X);
    for (std::size_t j = 0; j < 3; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < 6; ++i) s += X(i, j);
        CHECK(pops[j] == doctest::Approx(s));
    }
}
