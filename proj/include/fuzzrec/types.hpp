#ifndef FUZZREC_TYPES_HPP
#define FUZZREC_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

/**
 * @file types.hpp
 * @brief Core value types shared by the granulation and degranulation stages.
 *
 * Data matrices are row-major (one observation per row). Partition matrices are
 * cluster-major (row j = cluster, column i = datum) and stored column-major so
 * that the grades of one datum are contiguous.
 */

namespace fuzzrec {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// N x n numeric data with optional feature labels.
struct Dataset {
    Matrix rows;
    std::vector<std::string> feature_names;
    std::string source_id;

    std::size_t size() const { return static_cast<std::size_t>(rows.rows()); }
    std::size_t dims() const { return static_cast<std::size_t>(rows.cols()); }

    std::span<const double> row(std::size_t i) const {
        return {rows.data() + i * dims(), dims()};
    }
};

/// Checks the dataset invariants: at least two rows, one column, finite entries.
inline void validate(const Dataset& d) {
    detail::require(d.rows.rows() >= 2, Errc::empty_input,
                    "dataset '" + d.source_id + "' needs at least 2 rows");
    detail::require(d.rows.cols() >= 1, Errc::empty_input,
                    "dataset '" + d.source_id + "' has no columns");
    detail::require(d.rows.allFinite(), Errc::parse,
                    "dataset '" + d.source_id + "' contains non-finite values");
    detail::require(d.feature_names.empty() || d.feature_names.size() == d.dims(),
                    Errc::structure, "feature name count does not match column count");
}

/// C x n matrix, row j is the prototype of cluster j.
struct Prototypes {
    Matrix centers;

    std::size_t count() const { return static_cast<std::size_t>(centers.rows()); }
    std::size_t dims() const { return static_cast<std::size_t>(centers.cols()); }

    std::span<const double> row(std::size_t j) const {
        return {centers.data() + j * dims(), dims()};
    }
};

/// Membership grades mu_ij, C x N.
struct PartitionMatrix {
    Eigen::MatrixXd grades;

    std::size_t clusters() const { return static_cast<std::size_t>(grades.rows()); }
    std::size_t data() const { return static_cast<std::size_t>(grades.cols()); }
};

/// Grades raised to their per-cluster fuzzifier, mu_ij^{m_j}, C x N.
/// Column sums are positive but only equal one in special cases.
struct PoweredPartition {
    Eigen::MatrixXd grades_pow;

    std::size_t clusters() const { return static_cast<std::size_t>(grades_pow.rows()); }
    std::size_t data() const { return static_cast<std::size_t>(grades_pow.cols()); }
};

/// Per-cluster fuzzification factors. Every entry must exceed one.
class FuzzifierVector {
public:
    FuzzifierVector() = default;

    explicit FuzzifierVector(std::vector<double> values) : values_(std::move(values)) {
        for (std::size_t j = 0; j < values_.size(); ++j) {
            detail::require(std::isfinite(values_[j]) && values_[j] > 1.0, Errc::parameter,
                            "fuzzifier m_" + std::to_string(j + 1) + " = " +
                                std::to_string(values_[j]) + " must be finite and > 1");
        }
    }

    static FuzzifierVector uniform(std::size_t c, double m) {
        return FuzzifierVector(std::vector<double>(c, m));
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }
    const std::vector<double>& values() const { return values_; }

    bool is_uniform() const {
        for (double v : values_) {
            if (v != values_.front()) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const FuzzifierVector&, const FuzzifierVector&) = default;

private:
    std::vector<double> values_;
};

} // namespace fuzzrec

#endif
