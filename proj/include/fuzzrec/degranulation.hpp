#ifndef FUZZREC_DEGRANULATION_HPP
#define FUZZREC_DEGRANULATION_HPP

#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"
#include "fcm.hpp"
#include "types.hpp"

/**
 * @file degranulation.hpp
 * @brief Reconstruction of numeric data from prototypes and (powered) partition
 * matrices, and the spectral-norm reconstruction error.
 *
 * The generic FCM decoder weights every prototype by mu_ij^m. The refined
 * decoder generalizes the exponent to one fuzzifier per cluster: the powered
 * grade of datum i in cluster j is
 *
 *     [ sum_k (||x_i - v_j|| / ||x_i - v_k||)^{2/(m_j-1)} ]^{-m_j}
 *
 * and both prototype refinement (row normalization) and reconstruction
 * (column normalization) are driven by that matrix.
 */

namespace fuzzrec {

inline PoweredPartition powered_memberships(const Dataset& X, const Prototypes& V, const FuzzifierVector& m) {
    detail::check_shapes(X, V);
    detail::require(m.size() == V.count(), Errc::parameter,
                    "fuzzifier vector has " + std::to_string(m.size()) + " entries for " +
                        std::to_string(V.count()) + " clusters");
    return {detail::grades_from_logs(detail::log_distances(detail::sq_distances(X.rows, V.centers)), m.values(), true)};
}

/// Upow-weighted means of the data rows: diag(1 / row sums) * Upow * X.
inline Prototypes refine_prototypes(const Dataset& X, const PoweredPartition& Upow) {
    detail::require(Upow.data() == X.size(), Errc::dimension,
                    "powered partition has " + std::to_string(Upow.data()) + " columns, data has " +
                        std::to_string(X.size()) + " rows");
    const Eigen::VectorXd row_sums = Upow.grades_pow.rowwise().sum();
    for (Eigen::Index j = 0; j < row_sums.size(); ++j) {
        detail::require(row_sums(j) > 0.0, Errc::dead_cluster,
                        "cluster " + std::to_string(j + 1) + " has zero total powered membership");
    }
    Prototypes V;
    V.centers = Upow.grades_pow * X.rows;
    for (Eigen::Index j = 0; j < row_sums.size(); ++j) {
        V.centers.row(j) /= row_sums(j);
    }
    return V;
}

/// x_hat_i = sum_j Upow_ji v_j / sum_j Upow_ji, N x n.
inline Matrix reconstruct(const PoweredPartition& Upow, const Prototypes& V) {
    detail::require(Upow.clusters() == V.count(), Errc::dimension,
                    "powered partition has " + std::to_string(Upow.clusters()) + " rows, " +
                        std::to_string(V.count()) + " prototypes given");
    const Eigen::VectorXd col_sums = Upow.grades_pow.colwise().sum().transpose();
    for (Eigen::Index i = 0; i < col_sums.size(); ++i) {
        detail::require(col_sums(i) > 0.0, Errc::isolated_datum,
                        "datum " + std::to_string(i + 1) + " has zero total powered membership");
    }
    Matrix Xhat = Upow.grades_pow.transpose() * V.centers;
    for (Eigen::Index i = 0; i < col_sums.size(); ++i) {
        Xhat.row(i) /= col_sums(i);
    }
    return Xhat;
}

/// Generic FCM degranulation with a scalar fuzzifier.
inline Matrix reconstruct_scalar(const Dataset& X, const Prototypes& V, double m) {
    return reconstruct(powered_memberships(X, V, FuzzifierVector::uniform(V.count(), m)), V);
}

struct SpectralNormOptions {
    /// Relative change of the Rayleigh quotient that counts as converged.
    double tol = 1e-15;
    std::size_t max_iter = 1000;
};

/**
 * Largest singular value by power iteration on the Gram matrix. The smaller of
 * A^T A and A A^T is used; both share the nonzero spectrum.
 *
 * The start vector is the dominant column of a high power of the Gram matrix,
 * obtained by repeated squaring, so even nearly tied leading eigenvalues leave
 * a Rayleigh quotient accurate to rounding.
 */
inline double spectral_norm(const Eigen::Ref<const Eigen::MatrixXd>& A, const SpectralNormOptions& opt = {}) {
    detail::require(A.allFinite(), Errc::numeric, "spectral norm of a non-finite matrix");
    detail::require(opt.tol > 0.0, Errc::parameter, "tolerance must be > 0");
    if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0) {
        return 0.0;
    }

    const Eigen::MatrixXd G = A.rows() >= A.cols() ? Eigen::MatrixXd(A.transpose() * A)
                                                   : Eigen::MatrixXd(A * A.transpose());

    Eigen::MatrixXd M = G / G.cwiseAbs().maxCoeff();
    for (int k = 0; k < 64; ++k) {
        Eigen::MatrixXd M2 = M * M;
        M2 /= M2.cwiseAbs().maxCoeff();
        const double change = (M2 - M).cwiseAbs().maxCoeff();
        M = std::move(M2);
        if (change <= 1e-15) {
            break;
        }
    }
    Eigen::Index col = 0;
    M.colwise().squaredNorm().maxCoeff(&col);
    Eigen::VectorXd x = M.col(col).normalized();

    double lambda = x.dot(G * x);
    for (std::size_t it = 0; it < opt.max_iter; ++it) {
        const Eigen::VectorXd y = G * x;
        const double ny = y.norm();
        if (ny == 0.0) {
            return 0.0;
        }
        x = y / ny;
        const double rq = x.dot(G * x);
        if (std::abs(rq - lambda) <= opt.tol * std::abs(rq)) {
            return std::sqrt(std::max(std::max(rq, lambda), 0.0));
        }
        lambda = rq;
    }
    throw Error(Errc::numeric, "power iteration did not converge in " + std::to_string(opt.max_iter) +
                                   " iterations (last estimate " + std::to_string(std::sqrt(std::max(lambda, 0.0))) +
                                   ")");
}

struct ReconstructionResult {
    Matrix x_hat;
    /// raw_norm / N
    double error = 0.0;
    /// ||X_hat - X||_2
    double raw_norm = 0.0;
};

inline ReconstructionResult reconstruction_error(const Matrix& X_hat, const Matrix& X) {
    detail::require(X_hat.rows() == X.rows() && X_hat.cols() == X.cols(), Errc::dimension,
                    "reconstruction is " + std::to_string(X_hat.rows()) + "x" + std::to_string(X_hat.cols()) +
                        ", data is " + std::to_string(X.rows()) + "x" + std::to_string(X.cols()));
    detail::require(X.rows() > 0, Errc::empty_input, "cannot score an empty matrix");
    ReconstructionResult r;
    r.raw_norm = spectral_norm(X_hat - X);
    r.error = r.raw_norm / static_cast<double>(X.rows());
    r.x_hat = X_hat;
    return r;
}

/// Prototypes produced by weighting the data with the powered memberships
/// taken from `V`; with a uniform vector this is one classic FCM prototype step.
inline Prototypes granulate(const Dataset& X, const Prototypes& V, const FuzzifierVector& m) {
    return refine_prototypes(X, powered_memberships(X, V, m));
}

struct CompositeResult {
    /// ||X_hat - X||_2, +inf when the vector produced a dead cluster or an isolated datum.
    double f = std::numeric_limits<double>::infinity();
    Prototypes prototypes;
    PoweredPartition powered;
};

/**
 * Single pass of the refinement stage for one fuzzifier vector: powered
 * memberships from the base prototypes, refined prototypes, powered
 * memberships from the refined prototypes, reconstruction, residual norm.
 *
 * Distances to the base prototypes do not depend on the vector and are cached,
 * which matters when a swarm evaluates thousands of vectors. Holds a reference
 * to the data set.
 */
class CompositeObjective {
public:
    CompositeObjective(const Dataset& X, const Prototypes& base)
        : X_(X), clusters_(base.count()) {
        detail::check_shapes(X, base);
        base_logs_ = detail::log_distances(detail::sq_distances(X.rows, base.centers));
    }

    std::size_t clusters() const { return clusters_; }

    CompositeResult evaluate(const FuzzifierVector& m) const {
        detail::require(m.size() == clusters_, Errc::parameter,
                        "fuzzifier vector has " + std::to_string(m.size()) + " entries for " +
                            std::to_string(clusters_) + " clusters");
        CompositeResult out;
        try {
            const PoweredPartition initial{detail::grades_from_logs(base_logs_, m.values(), true)};
            out.prototypes = refine_prototypes(X_, initial);
            out.powered = powered_memberships(X_, out.prototypes, m);
            const Matrix Xhat = reconstruct(out.powered, out.prototypes);
            out.f = spectral_norm(Xhat - X_.rows);
        } catch (const Error& e) {
            if (category(e.code()) != ErrorCategory::numeric) {
                throw;
            }
            out.f = std::numeric_limits<double>::infinity();
        }
        return out;
    }

    double operator()(const FuzzifierVector& m) const { return evaluate(m).f; }

private:
    const Dataset& X_;
    std::size_t clusters_;
    detail::LogDistances base_logs_;
};

inline CompositeResult composite_objective(const Dataset& X, const Prototypes& base, const FuzzifierVector& m) {
    return CompositeObjective(X, base).evaluate(m);
}

inline CompositeResult composite_objective(const Dataset& X, const FcmModel& base, const FuzzifierVector& m) {
    return composite_objective(X, base.prototypes, m);
}

} // namespace fuzzrec

#endif
