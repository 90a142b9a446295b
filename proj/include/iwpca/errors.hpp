#pragma once

#include <stdexcept>
#include <string>

namespace iwpca {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct NonSymmetric : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };
struct RankOutOfRange : Error { using Error::Error; };

// ingestion
struct ParseError : Error {
    ParseError(const std::string& msg, long line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
    long line_number;
};
struct EmptyResult : Error { using Error::Error; };
struct ZeroRow : Error { using Error::Error; };
struct ZeroColumn : Error { using Error::Error; };

// algorithms / theory
struct EmptyBlock : Error { using Error::Error; };
struct PoolTooSmall : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct HypothesisViolated : Error { using Error::Error; };
struct BisectionStall : Error {
    BisectionStall(const std::string& msg, double violation)
        : Error(msg), constraint_violation(violation) {}
    double constraint_violation;
};

} // namespace iwpca
