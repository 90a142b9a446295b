#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iwpca/algorithms.hpp"
#include "iwpca/evaluation.hpp"
#include "iwpca/ingest.hpp"
#include "iwpca/io.hpp"
#include "iwpca/rng.hpp"
#include "iwpca/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace iwpca;

namespace {

// JSON config files for --config: top-level keys are option names, nested
// objects address subcommands, e.g. {"fit": {"rank": 3}}.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::vector<CLI::ConfigItem> out;
        collect(json::parse(input), {}, out);
        return out;
    }

  private:
    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void collect(const json& node, const std::vector<std::string>& parents,
                        std::vector<CLI::ConfigItem>& out) {
        if (!node.is_object())
            throw CLI::ConversionError("config: expected a JSON object");
        for (auto it = node.begin(); it != node.end(); ++it) {
            if (it.value().is_object()) {
                auto nested = parents;
                nested.push_back(it.key());
                collect(it.value(), nested, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it.value().is_array())
                for (const auto& v : it.value()) item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(it.value()));
            out.push_back(std::move(item));
        }
    }
};

DenseMatrix load_matrix(const std::string& path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        return read_matrix_json(path);
    return read_matrix_csv(path);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << text;
}

WeightVector make_weights(const DenseMatrix& X, const std::string& scheme,
                          std::size_t popular_count) {
    const WeightScheme ws = weight_scheme_from_name(scheme);
    switch (ws) {
        case WeightScheme::Uniform:
            return weights_uniform(X.cols());
        case WeightScheme::InverseSignNorm:
            return weights_inverse_sign_norm(sign_of(X));
        case WeightScheme::Proper: {
            if (popular_count == 0)
                throw Error("scheme 'proper' needs --popular-count");
            return weights_proper(X, contiguous_partition(popular_count, X.cols()));
        }
        case WeightScheme::Interpolate:
        case WeightScheme::InterpolateText: {
            if (popular_count == 0)
                throw Error("interpolate schemes need --popular-count");
            const ItemPartition part = contiguous_partition(popular_count, X.cols());
            // per-block mean column support stands in for n_p, n_u
            auto mean_nnz = [&](const std::vector<std::size_t>& cols) {
                double total = 0.0;
                for (std::size_t j : cols)
                    for (std::size_t i = 0; i < X.rows(); ++i)
                        if (X(i, j) != 0.0) total += 1.0;
                return total / static_cast<double>(cols.size());
            };
            const double n_p = mean_nnz(part.popular), n_u = mean_nnz(part.unpopular);
            return ws == WeightScheme::Interpolate
                       ? weights_interpolate(part, n_p, n_u)
                       : weights_interpolate_text(part, n_p, n_u);
        }
        case WeightScheme::Custom:
            throw Error("scheme 'custom' is only available through the library API");
    }
    throw Error("unreachable");
}

int run_ingest(const std::string& dataset, const std::string& input,
               const std::string& ratings, const std::string& movies,
               std::size_t min_artist_listeners, std::size_t min_user_total,
               std::size_t per_genre, std::size_t top_users,
               const std::string& row_norm, const std::string& out_dir) {
    PreferenceMatrix X;
    json params;
    if (dataset == "lastfm") {
        X = load_lastfm(input, min_artist_listeners, min_user_total);
        params = {{"min_artist_listeners", min_artist_listeners},
                  {"min_user_total", min_user_total}};
    } else if (dataset == "movielens") {
        X = load_movielens(ratings, movies, per_genre, top_users);
        params = {{"per_genre", per_genre}, {"top_users", top_users}};
    } else {
        throw Error("unknown dataset '" + dataset + "' (lastfm or movielens)");
    }
    if (row_norm == "l1")
        X = row_normalize(X, false);
    else if (row_norm == "l2")
        X = row_normalize(X, true);
    else if (row_norm != "none")
        throw Error("--row-norm must be none, l1 or l2");

    fs::create_directories(out_dir);
    write_matrix_csv(X.matrix, out_dir + "/matrix.csv");
    write_ids_json(X, out_dir + "/ids.json");
    json manifest{{"dataset", dataset},
                  {"shape", {X.matrix.rows(), X.matrix.cols()}},
                  {"normalization", normalization_name(X.normalization)},
                  {"params", params}};
    write_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << out_dir << " shape " << X.matrix.rows() << " x "
              << X.matrix.cols() << "\n";
    return 0;
}

int run_fit(const std::string& matrix_path, const std::string& algorithm,
            std::size_t rank, const std::string& scheme, std::size_t popular_count,
            double slack, bool unconstrained, bool keep_zero_cols,
            const std::string& out_path) {
    const DenseMatrix X = load_matrix(matrix_path);
    Projection P;
    SolveReport report;
    std::string scheme_tag = "n/a";
    if (algorithm == "vanilla") {
        P = vanilla_pca(X, rank);
        report.objective_value = -reconstruction_error(X, P);
        report.achieved_rank = P.rank;
    } else if (algorithm == "colnorm") {
        P = column_normalized_pca(X, rank, keep_zero_cols);
        report.objective_value = -reconstruction_error(X, P);
        report.achieved_rank = P.rank;
    } else if (algorithm == "iwpca") {
        const WeightVector w = make_weights(X, scheme, popular_count);
        scheme_tag = weight_scheme_name(w.scheme);
        if (unconstrained || slack < 0.0)
            std::tie(P, report) = item_weighted_pca(X, w, rank);
        else
            std::tie(P, report) = item_weighted_pca_constrained(X, w, rank, slack);
    } else {
        throw Error("unknown algorithm '" + algorithm + "'");
    }
    write_projection_json(P, scheme_tag, report, out_path);
    std::cout << "wrote " << out_path << " rank " << P.rank << "\n";
    return 0;
}

int run_eval(const std::string& matrix_path, const std::string& projection_path,
             const std::string& dataset_tag, std::size_t groups,
             const std::string& out_json, const std::string& out_csv) {
    const DenseMatrix X = load_matrix(matrix_path);
    const Projection P = read_projection_json(projection_path);
    EvalReport report = item_auc(X, P);
    report.dataset = dataset_tag;
    if (!out_json.empty()) write_file(out_json, eval_report_to_json(report));

    if (!out_csv.empty()) {
        std::vector<TidyRow> rows;
        for (std::size_t k = 0; k < report.items.size(); ++k)
            rows.push_back({dataset_tag, report.algorithm, "", static_cast<long long>(P.rank),
                            -1.0, static_cast<long long>(report.items[k]), "item_auc",
                            report.per_item_auc[k]});
        rows.push_back({dataset_tag, report.algorithm, "", static_cast<long long>(P.rank),
                        -1.0, -1, "mean_auc", report.mean_auc});
        const auto diag = diagonal_by_popularity(P, popularity(X), groups);
        for (std::size_t g = 0; g < diag.size(); ++g)
            rows.push_back({dataset_tag, report.algorithm, "",
                            static_cast<long long>(P.rank), -1.0,
                            static_cast<long long>(g), "diag_by_popularity", diag[g]});
        write_tidy_csv(rows, out_csv);
    }
    std::cout << "mean_auc " << report.mean_auc << " over " << report.items.size()
              << " items (" << report.excluded_items.size() << " excluded)\n";
    return 0;
}

int run_sweep(const std::string& matrix_path, const std::vector<std::string>& algos,
              const std::vector<std::size_t>& ranks, const std::string& dataset_tag,
              const std::string& out_csv) {
    const DenseMatrix X = load_matrix(matrix_path);
    std::vector<Algorithm> algorithms;
    for (const auto& a : algos) algorithms.push_back(algorithm_from_name(a));
    const auto reports = rank_sweep(X, algorithms, ranks);

    std::vector<TidyRow> rows;
    for (const auto& report : reports)
        rows.push_back({dataset_tag, report.algorithm, "",
                        static_cast<long long>(report.rank), -1.0, -1, "mean_auc",
                        report.mean_auc});
    write_tidy_csv(rows, out_csv);
    std::cout << "wrote " << rows.size() << " rows to " << out_csv << "\n";
    return 0;
}

int run_robustness(const std::string& matrix_path, const std::string& algorithm,
                   std::size_t rank, const std::vector<double>& alphas,
                   std::uint64_t seed, const std::string& dataset_tag,
                   const std::string& out_csv) {
    const DenseMatrix X = load_matrix(matrix_path);
    const auto results = robustness_sweep(X, algorithm_from_name(algorithm), rank,
                                          alphas, seed);
    std::vector<TidyRow> rows;
    for (const auto& [alpha, mean_auc] : results)
        rows.push_back({dataset_tag, algorithm, "", static_cast<long long>(rank), alpha,
                        -1, "mean_auc", mean_auc});
    write_tidy_csv(rows, out_csv);
    std::cout << "wrote " << rows.size() << " rows to " << out_csv << "\n";
    return 0;
}

int run_theory(const std::string& check, std::uint64_t seed, bool full,
               const std::string& out_dir) {
    const std::vector<std::string> known = {"theorem1",     "theorem3", "proposition4",
                                            "theorem5",     "diminishing",
                                            "bernoulli"};
    std::vector<std::string> selected;
    if (check == "all")
        selected = known;
    else if (std::find(known.begin(), known.end(), check) != known.end())
        selected = {check};
    else {
        std::cerr << "unknown check '" << check << "'\n";
        return 2;
    }

    std::vector<CheckReport> reports;
    for (const auto& name : selected) {
        if (name == "theorem1") {
            const std::vector<std::size_t> ns =
                full ? std::vector<std::size_t>{200, 2000, 20000}
                     : std::vector<std::size_t>{200, 1000, 5000};
            reports.push_back(theorem1_verdict(ns, 5, 3, full ? 10 : 5, seed));
        } else if (name == "theorem3") {
            CheckReport agg;
            agg.name = "theorem3";
            agg.pass = true;
            const std::size_t instances = full ? 20 : 5;
            for (std::size_t i = 0; i < instances; ++i) {
                BlockSpec spec{40, 5, 4, 8, derive_seed(seed, i)};
                const CheckReport one = check_theorem3(spec, 2 + i % 3);
                agg.seeds.push_back(spec.seed);
                agg.pass = agg.pass && one.pass;
            }
            agg.stat("instances", static_cast<double>(instances));
            reports.push_back(agg);
        } else if (name == "proposition4") {
            CheckReport agg;
            agg.name = "proposition4";
            agg.pass = true;
            const std::size_t instances = full ? 20 : 5;
            for (std::size_t i = 0; i < instances; ++i) {
                BlockSpec spec{40, 5, 4, 8, derive_seed(seed, 1000 + i)};
                const CheckReport one = check_proposition4(spec, 3);
                agg.seeds.insert(agg.seeds.end(), one.seeds.begin(), one.seeds.end());
                agg.pass = agg.pass && one.pass;
            }
            agg.stat("instances", static_cast<double>(instances));
            reports.push_back(agg);
        } else if (name == "theorem5") {
            CheckReport agg;
            agg.name = "theorem5";
            agg.pass = true;
            const std::size_t bases = full ? 10 : 3;
            for (std::size_t i = 0; i < bases; ++i) {
                SpectrumSpec spec{4, 2.0, 16.0, 1.0};
                const CheckReport one =
                    check_theorem5_gram(spec, 4, 64, 256.0, 1.0, 4, derive_seed(seed, 2000 + i));
                agg.seeds.insert(agg.seeds.end(), one.seeds.begin(), one.seeds.end());
                agg.pass = agg.pass && one.pass;
            }
            agg.stat("bases", static_cast<double>(bases));
            reports.push_back(agg);
        } else if (name == "diminishing") {
            CheckReport agg;
            agg.name = "diminishing_returns";
            agg.pass = true;
            double worst = 0.0;
            const std::size_t instances = full ? 50 : 10;
            for (std::size_t i = 0; i < instances; ++i) {
                Rng rng(derive_seed(seed, 3000 + i));
                DenseMatrix X(30, 12);
                for (auto& v : X.values()) v = rng.normal();
                const CheckReport one = check_diminishing_returns(X);
                agg.pass = agg.pass && one.pass;
                worst = std::max(worst, one.stats[0].second);
            }
            agg.seeds.push_back(seed);
            agg.stat("max_deviation", worst);
            reports.push_back(agg);
        } else if (name == "bernoulli") {
            const std::vector<std::size_t> ns =
                full ? std::vector<std::size_t>{500, 1000, 2000, 4000}
                     : std::vector<std::size_t>{500, 1000, 2000};
            reports.push_back(bernoulli_verdict(20, ns, full ? 100 : 30, seed));
        }
    }

    if (!out_dir.empty()) fs::create_directories(out_dir);
    bool all_pass = true;
    for (const auto& report : reports) {
        all_pass = all_pass && report.pass;
        std::cout << report.name << ": " << (report.pass ? "PASS" : "FAIL");
        if (!report.pass && !report.stats.empty()) {
            std::cout << " (";
            for (std::size_t i = 0; i < report.stats.size(); ++i) {
                if (i) std::cout << ", ";
                std::cout << report.stats[i].first << "=" << report.stats[i].second;
            }
            std::cout << ")";
        }
        std::cout << "\n";
        if (!out_dir.empty())
            write_file(out_dir + "/" + report.name + ".json",
                       check_report_to_json(report));
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Item-Weighted PCA toolkit"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file mirroring the flags");

    // ingest
    std::string dataset, input, ratings, movies, row_norm = "none", out_dir = "out";
    std::size_t min_artist_listeners = 50, min_user_total = 20;
    std::size_t per_genre = 30, top_users = 2000;
    auto* ingest = app.add_subcommand("ingest", "load and filter a raw dataset")->configurable();
    ingest->add_option("--dataset", dataset, "lastfm or movielens")->required();
    ingest->add_option("--input", input, "lastfm user_artists.dat");
    ingest->add_option("--ratings", ratings, "movielens ratings.dat");
    ingest->add_option("--movies", movies, "movielens movies.dat");
    ingest->add_option("--min-artist-listeners", min_artist_listeners);
    ingest->add_option("--min-user-total", min_user_total);
    ingest->add_option("--per-genre", per_genre);
    ingest->add_option("--top-users", top_users);
    ingest->add_option("--row-norm", row_norm, "none, l1 or l2");
    ingest->add_option("--out", out_dir)->required();

    // fit
    std::string matrix_path, algorithm = "vanilla", scheme = "inverse_sign_norm";
    std::string out_path = "projection.json";
    std::size_t rank = 1, popular_count = 0;
    double slack = -1.0;
    bool unconstrained = false, keep_zero_cols = false;
    auto* fit = app.add_subcommand("fit", "fit a projection")->configurable();
    fit->add_option("--matrix", matrix_path)->required();
    fit->add_option("--algorithm", algorithm, "vanilla, colnorm or iwpca");
    fit->add_option("--rank", rank)->required();
    fit->add_option("--weights", scheme, "weight scheme for iwpca");
    fit->add_option("--popular-count", popular_count, "d_p for block schemes");
    fit->add_option("--slack", slack, "reconstruction-error slack (iwpca)");
    fit->add_flag("--unconstrained", unconstrained);
    fit->add_flag("--keep-zero-cols", keep_zero_cols);
    fit->add_option("--out", out_path)->required();

    // eval
    std::string projection_path, dataset_tag = "dataset", out_json, out_csv;
    std::size_t groups = 3;
    auto* eval = app.add_subcommand("eval", "item-level AUC evaluation")->configurable();
    eval->add_option("--matrix", matrix_path)->required();
    eval->add_option("--projection", projection_path)->required();
    eval->add_option("--dataset-tag", dataset_tag);
    eval->add_option("--groups", groups, "popularity groups for diagnostics");
    eval->add_option("--out", out_json);
    eval->add_option("--csv", out_csv);

    // sweep
    std::vector<std::string> sweep_algos = {"vanilla", "colnorm", "iwpca"};
    std::vector<std::size_t> ranks;
    auto* sweep = app.add_subcommand("sweep", "rank sweep across algorithms")->configurable();
    sweep->add_option("--matrix", matrix_path)->required();
    sweep->add_option("--algorithms", sweep_algos)->delimiter(',');
    sweep->add_option("--ranks", ranks)->delimiter(',')->required();
    sweep->add_option("--dataset-tag", dataset_tag);
    sweep->add_option("--csv", out_csv)->required();

    // robustness
    std::vector<double> alphas = {0.0, 0.2, 0.4, 0.6, 0.8};
    std::uint64_t seed = 0;
    std::size_t rob_rank = 106;
    auto* robustness = app.add_subcommand("robustness", "missing-data sweep")->configurable();
    robustness->add_option("--matrix", matrix_path)->required();
    robustness->add_option("--algorithm", algorithm)->required();
    robustness->add_option("--rank", rob_rank);
    robustness->add_option("--alphas", alphas)->delimiter(',');
    robustness->add_option("--seed", seed);
    robustness->add_option("--dataset-tag", dataset_tag);
    robustness->add_option("--csv", out_csv)->required();

    // theory
    std::string check = "all", theory_out;
    bool full = false;
    auto* theory = app.add_subcommand("theory", "run executable theorem checks")->configurable();
    theory->add_option("check", check, "check name or 'all'");
    theory->add_option("--seed", seed);
    theory->add_flag("--full", full, "acceptance-scale parameters");
    theory->add_option("--out", theory_out, "directory for verdict JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*ingest)
            return run_ingest(dataset, input, ratings, movies, min_artist_listeners,
                              min_user_total, per_genre, top_users, row_norm, out_dir);
        if (*fit)
            return run_fit(matrix_path, algorithm, rank, scheme, popular_count, slack,
                           unconstrained, keep_zero_cols, out_path);
        if (*eval)
            return run_eval(matrix_path, projection_path, dataset_tag, groups, out_json,
                            out_csv);
        if (*sweep) return run_sweep(matrix_path, sweep_algos, ranks, dataset_tag, out_csv);
        if (*robustness)
            return run_robustness(matrix_path, algorithm, rob_rank, alphas, seed,
                                  dataset_tag, out_csv);
        if (*theory) return run_theory(check, seed, full, theory_out);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
