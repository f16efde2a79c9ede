#ifndef FUZZREC_DATASET_HPP
#define FUZZREC_DATASET_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "types.hpp"

/**
 * @file dataset.hpp
 * @brief CSV ingestion, feature scaling, k-fold plans and the synthetic blob benchmark.
 */

namespace fuzzrec {

struct CsvOptions {
    bool has_header = false;
    /// Drop the trailing column (e.g. a class label) before numeric parsing.
    bool drop_last_column = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\v\f";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

inline bool parse_double(std::string_view cell, double& out) {
    if (cell.empty()) {
        return false;
    }
    if (cell.front() == '+') {
        cell.remove_prefix(1);
    }
    const auto* first = cell.data();
    const auto* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

} // namespace detail

/// Parses comma-separated numeric rows. Blank lines are skipped; row numbers in
/// error messages are 1-based line numbers of the input.
inline Dataset parse_csv(std::istream& in, const CsvOptions& opts, std::string source_id = "csv") {
    Dataset out;
    out.source_id = std::move(source_id);

    std::vector<double> values;
    std::size_t width = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    bool header_pending = opts.has_header;

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (line_no == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") {
            view.remove_prefix(3);
        }
        if (detail::trim(view).empty()) {
            continue;
        }

        auto cells = detail::split_commas(view);
        if (opts.drop_last_column) {
            cells.pop_back();
        }
        detail::require(!cells.empty(), Errc::structure,
                        "row " + std::to_string(line_no) + " has no feature columns");

        if (header_pending) {
            header_pending = false;
            for (auto c : cells) {
                out.feature_names.emplace_back(c);
            }
            continue;
        }

        if (rows == 0) {
            width = cells.size();
        } else {
            detail::require(cells.size() == width, Errc::structure,
                            "row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                " columns, expected " + std::to_string(width));
        }

        for (std::size_t k = 0; k < cells.size(); ++k) {
            double v = 0.0;
            detail::require(detail::parse_double(cells[k], v), Errc::parse,
                            "non-numeric cell '" + std::string(cells[k]) + "' at row " +
                                std::to_string(line_no) + ", column " + std::to_string(k + 1));
            values.push_back(v);
        }
        ++rows;
    }

    detail::require(rows > 0, Errc::empty_input, "no data rows in '" + out.source_id + "'");
    if (!out.feature_names.empty()) {
        detail::require(out.feature_names.size() == width, Errc::structure,
                        "header has " + std::to_string(out.feature_names.size()) +
                            " columns, data has " + std::to_string(width));
    }

    out.rows = Eigen::Map<Matrix>(values.data(), static_cast<Eigen::Index>(rows),
                                  static_cast<Eigen::Index>(width));
    return out;
}

inline Dataset load_csv(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path);
    detail::require(static_cast<bool>(in), Errc::io, "cannot open '" + path + "'");
    return parse_csv(in, opts, path);
}

/// Writes rows with full round-trip precision; optional header from feature names.
inline void write_csv(std::ostream& out, const Matrix& rows, const std::vector<std::string>& header = {}) {
    if (!header.empty()) {
        for (std::size_t k = 0; k < header.size(); ++k) {
            out << (k ? "," : "") << header[k];
        }
        out << '\n';
    }
    char buf[32];
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index k = 0; k < rows.cols(); ++k) {
            const auto res = std::to_chars(buf, buf + sizeof(buf), rows(i, k));
            out << (k ? "," : "") << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Feature scaling

enum class Scaling { none, zscore, minmax };

inline const char* to_string(Scaling s) {
    switch (s) {
    case Scaling::none: return "none";
    case Scaling::zscore: return "zscore";
    case Scaling::minmax: return "minmax";
    }
    return "none";
}

inline Scaling parse_scaling(std::string_view s) {
    if (s == "none") return Scaling::none;
    if (s == "zscore") return Scaling::zscore;
    if (s == "minmax") return Scaling::minmax;
    throw Error(Errc::parameter, "unknown normalization '" + std::string(s) + "'");
}

/// Per-column affine map x -> (x - center) / scale.
/// For z-scoring, center holds column means and scale the sample standard
/// deviations (divisor N-1); for min-max scaling, minima and ranges.
struct NormalizationParams {
    Scaling kind = Scaling::zscore;
    Vector center;
    Vector scale;

    const Vector& means() const { return center; }
    const Vector& stds() const { return scale; }
};

namespace detail {

inline std::string column_label(const Dataset& d, std::size_t k) {
    if (k < d.feature_names.size()) {
        return "'" + d.feature_names[k] + "' (column " + std::to_string(k + 1) + ")";
    }
    return "column " + std::to_string(k + 1);
}

} // namespace detail

inline Matrix apply_normalization(const Matrix& rows, const NormalizationParams& p) {
    detail::require(p.kind == Scaling::none || static_cast<Eigen::Index>(p.center.size()) == rows.cols(),
                    Errc::dimension, "normalization parameters do not match column count");
    if (p.kind == Scaling::none) {
        return rows;
    }
    Matrix out = rows;
    for (Eigen::Index k = 0; k < rows.cols(); ++k) {
        out.col(k) = (rows.col(k).array() - p.center(k)) / p.scale(k);
    }
    return out;
}

inline Matrix denormalize(const Matrix& rows, const NormalizationParams& p) {
    if (p.kind == Scaling::none) {
        return rows;
    }
    detail::require(static_cast<Eigen::Index>(p.center.size()) == rows.cols(), Errc::dimension,
                    "normalization parameters do not match column count");
    Matrix out = rows;
    for (Eigen::Index k = 0; k < rows.cols(); ++k) {
        out.col(k) = rows.col(k).array() * p.scale(k) + p.center(k);
    }
    return out;
}

inline NormalizationParams fit_normalization(const Dataset& d, Scaling kind) {
    validate(d);
    NormalizationParams p;
    p.kind = kind;
    const auto n = d.rows.cols();
    if (kind == Scaling::none) {
        p.center = Vector::Zero(n);
        p.scale = Vector::Ones(n);
        return p;
    }
    p.center.resize(n);
    p.scale.resize(n);
    const double count = static_cast<double>(d.rows.rows());
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto col = d.rows.col(k);
        if (kind == Scaling::zscore) {
            const double mean = col.sum() / count;
            const double ss = (col.array() - mean).square().sum();
            p.center(k) = mean;
            p.scale(k) = std::sqrt(ss / (count - 1.0));
        } else {
            p.center(k) = col.minCoeff();
            p.scale(k) = col.maxCoeff() - p.center(k);
        }
        detail::require(p.scale(k) > 0.0, Errc::degenerate_feature,
                        detail::column_label(d, static_cast<std::size_t>(k)) + " is constant");
    }
    return p;
}

inline std::pair<Dataset, NormalizationParams> normalize(const Dataset& d, Scaling kind) {
    auto params = fit_normalization(d, kind);
    Dataset out = d;
    out.rows = apply_normalization(d.rows, params);
    return {std::move(out), std::move(params)};
}

/// Zero mean, unit sample standard deviation per column.
inline std::pair<Dataset, NormalizationParams> normalize_zscore(const Dataset& d) {
    return normalize(d, Scaling::zscore);
}

/// Each column mapped onto [0, 1].
inline std::pair<Dataset, NormalizationParams> normalize_minmax(const Dataset& d) {
    return normalize(d, Scaling::minmax);
}

// ---------------------------------------------------------------------------
// Cross-validation folds

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;

    std::vector<std::size_t> test_indices(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            if (assignments[i] == fold) {
                out.push_back(i);
            }
        }
        return out;
    }

    std::vector<std::size_t> train_indices(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            if (assignments[i] != fold) {
                out.push_back(i);
            }
        }
        return out;
    }

    std::vector<std::size_t> fold_sizes() const {
        std::vector<std::size_t> sizes(k, 0);
        for (auto a : assignments) {
            ++sizes[a];
        }
        return sizes;
    }

    friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Shuffled round-robin assignment: fold sizes differ by at most one.
inline FoldPlan kfold_split(std::size_t n_rows, std::size_t k, std::uint64_t seed) {
    detail::require(k >= 2 && k <= n_rows, Errc::parameter,
                    "fold count " + std::to_string(k) + " must lie in [2, " + std::to_string(n_rows) + "]");
    std::vector<std::size_t> order(n_rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    FoldPlan plan;
    plan.k = k;
    plan.assignments.assign(n_rows, 0);
    for (std::size_t pos = 0; pos < n_rows; ++pos) {
        plan.assignments[order[pos]] = pos % k;
    }
    return plan;
}

inline Dataset select_rows(const Dataset& d, const std::vector<std::size_t>& indices) {
    Dataset out;
    out.feature_names = d.feature_names;
    out.source_id = d.source_id;
    out.rows.resize(static_cast<Eigen::Index>(indices.size()), d.rows.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        detail::require(indices[r] < d.size(), Errc::dimension, "row index out of range");
        out.rows.row(static_cast<Eigen::Index>(r)) = d.rows.row(static_cast<Eigen::Index>(indices[r]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic benchmark

/// Isotropic Gaussian blobs in the plane. The default is nine blobs of fifty
/// points on a 3 x 3 grid, well separated relative to their spread.
struct SyntheticSpec {
    std::size_t blob_count = 9;
    std::size_t points_per_blob = 50;
    std::vector<std::array<double, 2>> blob_centers = default_centers();
    std::vector<double> blob_stds = std::vector<double>(9, 0.3);
    std::uint64_t seed = 0;

    static std::vector<std::array<double, 2>> default_centers() {
        std::vector<std::array<double, 2>> c;
        for (double y : {-2.0, 0.0, 2.0}) {
            for (double x : {-2.0, 0.0, 2.0}) {
                c.push_back({x, y});
            }
        }
        return c;
    }

    std::size_t total_points() const { return blob_count * points_per_blob; }
};

inline Dataset gen_synthetic(const SyntheticSpec& spec) {
    detail::require(spec.blob_centers.size() == spec.blob_count, Errc::parameter,
                    "blob_centers has " + std::to_string(spec.blob_centers.size()) + " entries, expected " +
                        std::to_string(spec.blob_count));
    detail::require(spec.blob_stds.size() == spec.blob_count, Errc::parameter,
                    "blob_stds has " + std::to_string(spec.blob_stds.size()) + " entries, expected " +
                        std::to_string(spec.blob_count));
    detail::require(spec.points_per_blob >= 1 && spec.blob_count >= 1, Errc::parameter,
                    "synthetic spec needs at least one blob and one point per blob");
    for (double s : spec.blob_stds) {
        detail::require(std::isfinite(s) && s >= 0.0, Errc::parameter, "blob std must be finite and >= 0");
    }

    Dataset out;
    out.source_id = "synthetic";
    out.feature_names = {"x", "y"};
    out.rows.resize(static_cast<Eigen::Index>(spec.total_points()), 2);

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Index r = 0;
    for (std::size_t b = 0; b < spec.blob_count; ++b) {
        for (std::size_t p = 0; p < spec.points_per_blob; ++p, ++r) {
            for (int k = 0; k < 2; ++k) {
                const double z = gauss(rng);
                out.rows(r, k) = spec.blob_stds[b] == 0.0 ? spec.blob_centers[b][static_cast<std::size_t>(k)]
                                                          : spec.blob_centers[b][static_cast<std::size_t>(k)] +
                                                                spec.blob_stds[b] * z;
            }
        }
    }
    return out;
}

} // namespace fuzzrec

#endif
