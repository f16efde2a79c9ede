#ifndef FUZZREC_TESTS_ORACLES_HPP
#define FUZZREC_TESTS_ORACLES_HPP

// Straight-line reference implementations with nested loops and std::pow.
// They share no code with the library kernels.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include <fuzzrec/types.hpp>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

inline Rows rows_of(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    Rows r(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            r[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = m(i, k);
        }
    }
    return r;
}

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += (a[k] - b[k]) * (a[k] - b[k]);
    }
    return std::sqrt(s);
}

/// Grade (j, i) = [sum_k (d_ij/d_ik)^{2/(m_j-1)}]^{-p_j}, with p_j = 1 for
/// memberships and p_j = m_j for powered grades. Assumes nonzero distances.
inline Rows grades(const Rows& X, const Rows& V, const std::vector<double>& m, bool powered) {
    const std::size_t N = X.size();
    const std::size_t C = V.size();
    Rows G(C, std::vector<double>(N));
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < C; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < C; ++k) {
                s += std::pow(dist(X[i], V[j]) / dist(X[i], V[k]), 2.0 / (m[j] - 1.0));
            }
            G[j][i] = std::pow(s, powered ? -m[j] : -1.0);
        }
    }
    return G;
}

/// Rows of V: sum_i W_ji x_i / sum_i W_ji.
inline Rows weighted_means(const Rows& X, const Rows& W) {
    Rows V(W.size(), std::vector<double>(X.front().size(), 0.0));
    for (std::size_t j = 0; j < W.size(); ++j) {
        double den = 0.0;
        for (std::size_t i = 0; i < X.size(); ++i) {
            den += W[j][i];
            for (std::size_t k = 0; k < X[i].size(); ++k) {
                V[j][k] += W[j][i] * X[i][k];
            }
        }
        for (double& v : V[j]) {
            v /= den;
        }
    }
    return V;
}

/// x_hat_i = sum_j W_ji v_j / sum_j W_ji.
inline Rows reconstruct(const Rows& W, const Rows& V) {
    const std::size_t N = W.front().size();
    Rows Xh(N, std::vector<double>(V.front().size(), 0.0));
    for (std::size_t i = 0; i < N; ++i) {
        double den = 0.0;
        for (std::size_t j = 0; j < V.size(); ++j) {
            den += W[j][i];
            for (std::size_t k = 0; k < V[j].size(); ++k) {
                Xh[i][k] += W[j][i] * V[j][k];
            }
        }
        for (double& x : Xh[i]) {
            x /= den;
        }
    }
    return Xh;
}

inline Rows pow_each(Rows G, double m) {
    for (auto& row : G) {
        for (double& g : row) {
            g = std::pow(g, m);
        }
    }
    return G;
}

/// Largest singular value via a dense symmetric eigensolver on A^T A.
inline double spectral_norm(const Eigen::MatrixXd& A) {
    const Eigen::MatrixXd G = A.transpose() * A;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline double spectral_norm(const Rows& R) {
    Eigen::MatrixXd A(static_cast<Eigen::Index>(R.size()), static_cast<Eigen::Index>(R.front().size()));
    for (std::size_t i = 0; i < R.size(); ++i) {
        for (std::size_t k = 0; k < R[i].size(); ++k) {
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = R[i][k];
        }
    }
    return spectral_norm(A);
}

inline Rows minus(const Rows& A, const Rows& B) {
    Rows D = A;
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t k = 0; k < A[i].size(); ++k) {
            D[i][k] -= B[i][k];
        }
    }
    return D;
}

/// Generic FCM decoder: one prototype step with u^m weights, then reconstruction.
inline double generic_error(const Rows& X, const Rows& V, double m) {
    const std::vector<double> mv(V.size(), m);
    const Rows W = pow_each(grades(X, V, mv, false), m);
    const Rows trained = weighted_means(X, W);
    const Rows W2 = pow_each(grades(X, trained, mv, false), m);
    return spectral_norm(minus(reconstruct(W2, trained), X)) / static_cast<double>(X.size());
}

/// Refinement chain for a fuzzifier vector: returns ||X_hat - X||_2.
inline double composite(const Rows& X, const Rows& V, const std::vector<double>& m) {
    const Rows refined = weighted_means(X, grades(X, V, m, true));
    return spectral_norm(minus(reconstruct(grades(X, refined, m, true), refined), X));
}

/// Random data set with entries uniform in [-scale, scale].
inline fuzzrec::Dataset random_dataset(std::size_t N, std::size_t n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    fuzzrec::Dataset d;
    d.rows.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < d.rows.rows(); ++i) {
        for (Eigen::Index k = 0; k < d.rows.cols(); ++k) {
            d.rows(i, k) = u(rng);
        }
    }
    d.source_id = "random";
    return d;
}

inline fuzzrec::Dataset make(std::initializer_list<std::initializer_list<double>> rows) {
    fuzzrec::Dataset d;
    d.rows.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index k = 0;
        for (double v : r) {
            d.rows(i, k++) = v;
        }
        ++i;
    }
    d.source_id = "inline";
    return d;
}

inline fuzzrec::Prototypes protos(std::initializer_list<std::initializer_list<double>> rows) {
    return fuzzrec::Prototypes{make(rows).rows};
}

} // namespace oracle

#endif
