#pragma once

#include <string>
#include <vector>

#include "iwpca/algorithms.hpp"
#include "iwpca/evaluation.hpp"
#include "iwpca/ingest.hpp"
#include "iwpca/projection.hpp"
#include "iwpca/theory.hpp"

namespace iwpca {

// Headerless CSV, one row per line, comma separated.
void write_matrix_csv(const DenseMatrix& A, const std::string& path);
DenseMatrix read_matrix_csv(const std::string& path);

// JSON envelope {rows, cols, data:[...row-major...]} for test fixtures.
void write_matrix_json(const DenseMatrix& A, const std::string& path);
DenseMatrix read_matrix_json(const std::string& path);

// Sidecar ids: {user_ids, item_ids, normalization}.
void write_ids_json(const PreferenceMatrix& X, const std::string& path);

// Projection JSON {d, r, U: row-major, scheme, solve_report}.
void write_projection_json(const Projection& P, const std::string& scheme,
                           const SolveReport& report, const std::string& path);
Projection read_projection_json(const std::string& path);

std::string eval_report_to_json(const EvalReport& report);
std::string check_report_to_json(const CheckReport& report);

// Tidy plot CSV, one metric value per row.
struct TidyRow {
    std::string dataset;
    std::string algorithm;
    std::string weight_scheme;
    long long r = -1;        // -1 renders empty
    double alpha = -1.0;     // < 0 renders empty
    long long item_id = -1;  // -1 renders empty
    std::string metric;
    double value = 0.0;
};

void write_tidy_csv(const std::vector<TidyRow>& rows, const std::string& path);

} // namespace iwpca
