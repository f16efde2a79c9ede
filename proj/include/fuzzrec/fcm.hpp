#ifndef FUZZREC_FCM_HPP
#define FUZZREC_FCM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "types.hpp"

/**
 * @file fcm.hpp
 * @brief Classic fuzzy c-means: membership and prototype updates, the cost
 * function, and the alternating fit loop.
 */

namespace fuzzrec {

inline double sq_distance(std::span<const double> x, std::span<const double> v) {
    detail::require(x.size() == v.size(), Errc::dimension,
                    "vector lengths " + std::to_string(x.size()) + " and " + std::to_string(v.size()) + " differ");
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - v[k];
        acc += d * d;
    }
    return acc;
}

namespace detail {

inline void check_shapes(const Dataset& X, const Prototypes& V) {
    require(X.dims() == V.dims(), Errc::dimension,
            "data has " + std::to_string(X.dims()) + " columns, prototypes have " + std::to_string(V.dims()));
    require(V.count() >= 1, Errc::parameter, "at least one prototype is required");
}

/// Squared distances of every datum to every prototype, N x C (column j = prototype j).
inline Eigen::MatrixXd sq_distances(const Matrix& X, const Matrix& V) {
    const auto N = X.rows();
    const auto C = V.rows();
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(N, C);
    for (Eigen::Index j = 0; j < C; ++j) {
        for (Eigen::Index k = 0; k < X.cols(); ++k) {
            d2.col(j).array() += (X.col(k).array() - V(j, k)).square();
        }
    }
    return d2;
}

/// Natural logs of the squared distances plus the rows that touch a prototype.
struct LogDistances {
    Eigen::ArrayXXd logs;                 // N x C
    std::vector<Eigen::Index> coincident; // rows with at least one zero distance
    Eigen::MatrixXd d2;                   // N x C
};

inline LogDistances log_distances(Eigen::MatrixXd d2) {
    LogDistances out;
    out.logs = d2.array().log();
    for (Eigen::Index i = 0; i < d2.rows(); ++i) {
        if (d2.row(i).minCoeff() == 0.0) {
            out.coincident.push_back(i);
        }
    }
    out.d2 = std::move(d2);
    return out;
}

/**
 * Membership grades from log squared distances, returned cluster-major (C x N).
 * With `powered` set, grade (j, i) is [sum_k (d_ij/d_ik)^{2/(m_j-1)}]^{-m_j};
 * otherwise the outer exponent is -1.
 *
 * A datum that coincides with one or more prototypes is shared equally among
 * the coincident clusters (grade 1/z, or (1/z)^{m_j} when powered) and gets
 * zero grade elsewhere.
 */
inline Eigen::MatrixXd grades_from_logs(const LogDistances& ld, const std::vector<double>& m, bool powered) {
    const auto N = ld.logs.rows();
    const auto C = ld.logs.cols();
    Eigen::ArrayXXd G(N, C);
    Eigen::ArrayXd s(N);
    for (Eigen::Index j = 0; j < C; ++j) {
        // Ratio of squared distances, so the exponent 2/(m-1) becomes 1/(m-1).
        const double a = 1.0 / (m[static_cast<std::size_t>(j)] - 1.0);
        s.setOnes();
        for (Eigen::Index k = 0; k < C; ++k) {
            if (k != j) {
                s += (a * (ld.logs.col(j) - ld.logs.col(k))).exp();
            }
        }
        if (powered) {
            G.col(j) = (-m[static_cast<std::size_t>(j)] * s.log()).exp();
        } else {
            G.col(j) = s.inverse();
        }
    }
    for (Eigen::Index i : ld.coincident) {
        const auto zeros = (ld.d2.row(i).array() == 0.0).count();
        const double share = 1.0 / static_cast<double>(zeros);
        for (Eigen::Index j = 0; j < C; ++j) {
            G(i, j) = ld.d2(i, j) == 0.0 ? (powered ? std::pow(share, m[static_cast<std::size_t>(j)]) : share) : 0.0;
        }
    }
    return G.matrix().transpose();
}

} // namespace detail

/// Partition matrix for scalar fuzzifier m (columns sum to one).
inline PartitionMatrix update_memberships(const Dataset& X, const Prototypes& V, double m) {
    detail::check_shapes(X, V);
    detail::require(m > 1.0 && std::isfinite(m), Errc::parameter, "fuzzifier must be > 1");
    const std::vector<double> mv(V.count(), m);
    return {detail::grades_from_logs(detail::log_distances(detail::sq_distances(X.rows, V.centers)), mv, false)};
}

/// Weighted means v_j = sum_i mu_ij^m x_i / sum_i mu_ij^m.
inline Prototypes update_prototypes(const Dataset& X, const PartitionMatrix& U, double m) {
    detail::require(U.data() == X.size(), Errc::dimension,
                    "partition has " + std::to_string(U.data()) + " columns, data has " +
                        std::to_string(X.size()) + " rows");
    detail::require(m > 1.0 && std::isfinite(m), Errc::parameter, "fuzzifier must be > 1");
    const Eigen::MatrixXd W = U.grades.array().pow(m).matrix();
    const Eigen::VectorXd denom = W.rowwise().sum();
    for (Eigen::Index j = 0; j < denom.size(); ++j) {
        detail::require(denom(j) > 0.0, Errc::dead_cluster,
                        "cluster " + std::to_string(j + 1) + " has zero total membership");
    }
    Prototypes V;
    V.centers = W * X.rows;
    for (Eigen::Index j = 0; j < denom.size(); ++j) {
        V.centers.row(j) /= denom(j);
    }
    return V;
}

/// J = sum_i sum_j mu_ij^m ||x_i - v_j||^2.
inline double objective_j(const Dataset& X, const PartitionMatrix& U, const Prototypes& V, double m) {
    detail::check_shapes(X, V);
    detail::require(U.clusters() == V.count() && U.data() == X.size(), Errc::dimension,
                    "partition shape does not match data and prototypes");
    const auto d2 = detail::sq_distances(X.rows, V.centers);
    return (U.grades.array().pow(m) * d2.transpose().array()).sum();
}

/// c distinct data rows sampled without replacement.
inline Prototypes init_prototypes(const Dataset& X, std::size_t c, std::uint64_t seed) {
    detail::require(c >= 1, Errc::parameter, "cluster count must be >= 1");
    std::vector<std::size_t> order(X.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::size_t> picked;
    for (std::size_t idx : order) {
        const bool dup = std::any_of(picked.begin(), picked.end(), [&](std::size_t p) {
            return X.rows.row(static_cast<Eigen::Index>(p)) == X.rows.row(static_cast<Eigen::Index>(idx));
        });
        if (!dup) {
            picked.push_back(idx);
            if (picked.size() == c) {
                break;
            }
        }
    }
    detail::require(picked.size() == c, Errc::degenerate_data,
                    "need " + std::to_string(c) + " distinct rows, found " + std::to_string(picked.size()));

    Prototypes V;
    V.centers.resize(static_cast<Eigen::Index>(c), X.rows.cols());
    for (std::size_t j = 0; j < c; ++j) {
        V.centers.row(static_cast<Eigen::Index>(j)) = X.rows.row(static_cast<Eigen::Index>(picked[j]));
    }
    return V;
}

struct FcmConfig {
    std::size_t c = 2;
    double m = 2.0;
    /// Stop once the largest elementwise change of the partition is <= tol.
    double tol = 1e-5;
    std::size_t max_iter = 300;
    std::uint64_t seed = 0;

    void validate() const {
        detail::require(c >= 2, Errc::parameter, "cluster count must be >= 2");
        detail::require(std::isfinite(m) && m > 1.0, Errc::parameter, "fuzzifier must be > 1");
        detail::require(tol > 0.0, Errc::parameter, "tolerance must be > 0");
    }
};

struct FcmModel {
    Prototypes prototypes;
    /// Memberships computed from `prototypes`.
    PartitionMatrix partition;
    double fuzzifier = 2.0;
    std::size_t iterations_run = 0;
    double final_delta = 0.0;
    bool converged = false;
    /// J after initialization and after every full iteration.
    std::vector<double> objective_trace;
};

/// Alternating optimization from explicit initial prototypes.
inline FcmModel fcm_fit_from(const Dataset& X, Prototypes init, const FcmConfig& cfg) {
    detail::require(cfg.m > 1.0 && std::isfinite(cfg.m), Errc::parameter, "fuzzifier must be > 1");
    detail::require(cfg.tol > 0.0, Errc::parameter, "tolerance must be > 0");
    detail::check_shapes(X, init);

    FcmModel model;
    model.fuzzifier = cfg.m;
    model.prototypes = std::move(init);
    model.partition = update_memberships(X, model.prototypes, cfg.m);
    model.objective_trace.push_back(objective_j(X, model.partition, model.prototypes, cfg.m));
    model.final_delta = std::numeric_limits<double>::infinity();

    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        Prototypes V = update_prototypes(X, model.partition, cfg.m);
        PartitionMatrix U = update_memberships(X, V, cfg.m);
        detail::require(V.centers.allFinite() && U.grades.allFinite(), Errc::numeric,
                        "non-finite value at FCM iteration " + std::to_string(it));

        model.final_delta = (U.grades - model.partition.grades).cwiseAbs().maxCoeff();
        model.prototypes = std::move(V);
        model.partition = std::move(U);
        model.iterations_run = it;
        model.objective_trace.push_back(objective_j(X, model.partition, model.prototypes, cfg.m));

        if (model.final_delta <= cfg.tol) {
            model.converged = true;
            break;
        }
    }
    return model;
}

inline FcmModel fcm_fit(const Dataset& X, const FcmConfig& cfg) {
    cfg.validate();
    validate(X);
    return fcm_fit_from(X, init_prototypes(X, cfg.c, cfg.seed), cfg);
}

} // namespace fuzzrec

#endif
