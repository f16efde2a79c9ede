#ifndef FUZZREC_SERIALIZE_HPP
#define FUZZREC_SERIALIZE_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataset.hpp"
#include "degranulation.hpp"
#include "error.hpp"
#include "fcm.hpp"
#include "pipeline.hpp"
#include "pso.hpp"
#include "types.hpp"

/**
 * @file serialize.hpp
 * @brief JSON forms of the model and plan types. Matrices are arrays of rows.
 * Non-finite scalars are written as null and read back as +inf.
 */

namespace fuzzrec {

using json = nlohmann::json;

namespace detail {

inline json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

inline double number_or_inf(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

template <typename Derived>
json matrix_to_json(const Eigen::MatrixBase<Derived>& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            row.push_back(m(i, k));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename M>
M matrix_from_json(const json& j) {
    require(j.is_array(), Errc::structure, "matrix must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j.front().size()) : 0;
    M m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols, Errc::structure,
                "ragged matrix row " + std::to_string(i + 1));
        for (Eigen::Index k = 0; k < cols; ++k) {
            m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
        }
    }
    return m;
}

inline json vector_to_json(const Vector& v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

inline Vector vector_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace detail

/// Runs `fn`, converting JSON library errors into parse errors.
template <typename Fn>
auto with_json_errors(const std::string& what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw Error(Errc::parse, what + ": " + e.what());
    }
}

inline void to_json(json& j, const FoldPlan& p) {
    j = json{{"k", p.k}, {"assignments", p.assignments}};
}

inline void from_json(const json& j, FoldPlan& p) {
    p.k = j.at("k").get<std::size_t>();
    p.assignments = j.at("assignments").get<std::vector<std::size_t>>();
}

inline void to_json(json& j, const NormalizationParams& p) {
    j = json{{"kind", to_string(p.kind)},
             {"center", detail::vector_to_json(p.center)},
             {"scale", detail::vector_to_json(p.scale)}};
}

inline void from_json(const json& j, NormalizationParams& p) {
    p.kind = parse_scaling(j.at("kind").get<std::string>());
    p.center = detail::vector_from_json(j.at("center"));
    p.scale = detail::vector_from_json(j.at("scale"));
}

inline void to_json(json& j, const FuzzifierVector& m) {
    j = m.values();
}

inline void from_json(const json& j, FuzzifierVector& m) {
    m = FuzzifierVector(j.get<std::vector<double>>());
}

inline void to_json(json& j, const Prototypes& v) {
    j = detail::matrix_to_json(v.centers);
}

inline void from_json(const json& j, Prototypes& v) {
    v.centers = detail::matrix_from_json<Matrix>(j);
}

inline void to_json(json& j, const FcmModel& m) {
    j = json{{"prototypes", m.prototypes},
             {"partition", detail::matrix_to_json(m.partition.grades)},
             {"fuzzifier", m.fuzzifier},
             {"iterations_run", m.iterations_run},
             {"final_delta", detail::finite_or_null(m.final_delta)},
             {"converged", m.converged},
             {"objective_trace", m.objective_trace}};
}

inline void from_json(const json& j, FcmModel& m) {
    m.prototypes = j.at("prototypes").get<Prototypes>();
    m.partition.grades = detail::matrix_from_json<Eigen::MatrixXd>(j.at("partition"));
    m.fuzzifier = j.at("fuzzifier").get<double>();
    m.iterations_run = j.at("iterations_run").get<std::size_t>();
    m.final_delta = detail::number_or_inf(j.at("final_delta"));
    m.converged = j.at("converged").get<bool>();
    m.objective_trace = j.at("objective_trace").get<std::vector<double>>();
}

inline void to_json(json& j, const ReconstructionResult& r) {
    j = json{{"error", r.error}, {"raw_norm", r.raw_norm}, {"x_hat", detail::matrix_to_json(r.x_hat)}};
}

inline void to_json(json& j, const PsoResult& r) {
    j = json{{"best_position", detail::vector_to_json(r.best_position)},
             {"best_value", detail::finite_or_null(r.best_value)},
             {"history", r.history},
             {"iterations_run", r.iterations_run},
             {"stopped_early", r.stopped_early}};
}

inline void to_json(json& j, const RefinedModel& m) {
    j = json{{"base", m.base},
             {"fuzzifiers", m.fuzzifiers},
             {"prototypes", m.prototypes},
             {"train_error", m.train_error},
             {"baseline_train_error", m.baseline_train_error},
             {"m0", m.m0},
             {"train_size", m.train_size},
             {"pso_history", m.pso_history},
             {"fuzzifier_trace", m.fuzzifier_trace},
             {"pso_iterations", m.pso_iterations},
             {"stopped_early", m.stopped_early}};
}

inline void from_json(const json& j, RefinedModel& m) {
    m.base = j.at("base").get<FcmModel>();
    m.fuzzifiers = j.at("fuzzifiers").get<FuzzifierVector>();
    m.prototypes = j.at("prototypes").get<Prototypes>();
    m.train_error = j.at("train_error").get<double>();
    m.baseline_train_error = j.at("baseline_train_error").get<double>();
    m.m0 = j.at("m0").get<double>();
    m.train_size = j.at("train_size").get<std::size_t>();
    m.pso_history = j.at("pso_history").get<std::vector<double>>();
    m.fuzzifier_trace = j.at("fuzzifier_trace").get<std::vector<std::vector<double>>>();
    m.pso_iterations = j.at("pso_iterations").get<std::size_t>();
    m.stopped_early = j.at("stopped_early").get<bool>();
}

} // namespace fuzzrec

#endif
