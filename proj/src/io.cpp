#include "iwpca/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace iwpca {
namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json solve_report_to_json_obj(const SolveReport& report) {
    return json{{"objective_value", report.objective_value},
                {"achieved_rank", report.achieved_rank},
                {"multiplier", report.multiplier},
                {"iterations", report.iterations},
                {"degenerate_cut", report.degenerate_cut}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

void write_matrix_csv(const DenseMatrix& A, const std::string& path) {
    std::ostringstream out;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) {
            if (j) out << ',';
            out << fmt_double(A(i, j));
        }
        out << '\n';
    }
    write_text(path, out.str());
}

DenseMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::vector<double> data;
    std::size_t rows = 0, cols = 0;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t row_cols = 0;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                data.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError("cannot parse '" + cell + "' as a number", line_no);
            }
            ++row_cols;
        }
        if (rows == 0)
            cols = row_cols;
        else if (row_cols != cols)
            throw ParseError("row has " + std::to_string(row_cols) +
                                 " columns, expected " + std::to_string(cols),
                             line_no);
        ++rows;
    }
    if (rows == 0) throw EmptyResult("read_matrix_csv: " + path + " is empty");
    return DenseMatrix(rows, cols, std::move(data));
}

void write_matrix_json(const DenseMatrix& A, const std::string& path) {
    json j{{"rows", A.rows()}, {"cols", A.cols()}, {"data", A.values()}};
    write_text(path, j.dump(2) + "\n");
}

DenseMatrix read_matrix_json(const std::string& path) {
    const json j = json::parse(read_text(path));
    return DenseMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                       j.at("data").get<std::vector<double>>());
}

void write_ids_json(const PreferenceMatrix& X, const std::string& path) {
    json j{{"user_ids", X.user_ids},
           {"item_ids", X.item_ids},
           {"normalization", normalization_name(X.normalization)}};
    write_text(path, j.dump(2) + "\n");
}

void write_projection_json(const Projection& P, const std::string& scheme,
                           const SolveReport& report, const std::string& path) {
    json j{{"d", P.dim()},
           {"r", P.rank},
           {"U", P.basis.values()},
           {"scheme", scheme},
           {"solve_report", solve_report_to_json_obj(report)}};
    write_text(path, j.dump(2) + "\n");
}

Projection read_projection_json(const std::string& path) {
    const json j = json::parse(read_text(path));
    const std::size_t d = j.at("d").get<std::size_t>();
    const std::size_t r = j.at("r").get<std::size_t>();
    DenseMatrix U(d, r, j.at("U").get<std::vector<double>>());
    if (r == 0) return zero_projection(d);
    return projection_from_basis(U);
}

std::string eval_report_to_json(const EvalReport& report) {
    json excluded = json::array();
    for (const auto& e : report.excluded_items)
        excluded.push_back(json{{"item", e.item}, {"reason", e.reason}});
    json j{{"items", report.items},
           {"per_item_auc", report.per_item_auc},
           {"excluded_items", excluded},
           {"mean_auc", report.mean_auc},
           {"rank", report.rank},
           {"algorithm", report.algorithm},
           {"dataset", report.dataset}};
    return j.dump(2) + "\n";
}

std::string check_report_to_json(const CheckReport& report) {
    json stats = json::object();
    for (const auto& [key, value] : report.stats) stats[key] = value;
    json j{{"name", report.name},
           {"pass", report.pass},
           {"seeds", report.seeds},
           {"statistics", stats}};
    return j.dump(2) + "\n";
}

void write_tidy_csv(const std::vector<TidyRow>& rows, const std::string& path) {
    std::ostringstream out;
    out << "dataset,algorithm,weight_scheme,r,alpha,item_id,metric,value\n";
    for (const auto& row : rows) {
        out << row.dataset << ',' << row.algorithm << ',' << row.weight_scheme << ',';
        if (row.r >= 0) out << row.r;
        out << ',';
        if (row.alpha >= 0.0) out << fmt_double(row.alpha);
        out << ',';
        if (row.item_id >= 0) out << row.item_id;
        out << ',' << row.metric << ',' << fmt_double(row.value) << '\n';
    }
    write_text(path, out.str());
}

} // namespace iwpca
