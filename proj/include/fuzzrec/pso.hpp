#ifndef FUZZREC_PSO_HPP
#define FUZZREC_PSO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "types.hpp"

/**
 * @file pso.hpp
 * @brief Bounded global-best particle swarm minimizer.
 *
 * Velocity: V' = w V + c1 r1 (P_i - X) + c2 r2 (P_g - X), clamped to the box
 * width per dimension. Position: X' = clamp(X + V'); a clamped component has
 * its velocity reset to zero.
 */

namespace fuzzrec {

struct PsoConfig {
    std::size_t particles = 75;
    std::size_t max_iter = 500;
    double inertia_w = 0.8;
    double cognitive_c1 = 1.49445;
    double social_c2 = 1.49445;
    /// Stop after this many consecutive iterations with g_best improving by less than stall_eps.
    std::size_t stall_window = 75;
    double stall_eps = 1e-12;
    /// Per-dimension box. A single entry is broadcast to every dimension.
    std::vector<double> bounds_low = {1.05};
    std::vector<double> bounds_high = {10.0};
    std::uint64_t seed = 0;

    /// ceil(0.15 * max_iter), the default stall window for a given iteration budget.
    static std::size_t default_stall_window(std::size_t max_iter) {
        return (15 * max_iter + 99) / 100;
    }
};

struct Particle {
    Vector position;
    Vector velocity;
    Vector best_position;
    double best_value = std::numeric_limits<double>::infinity();
};

struct PsoResult {
    Vector best_position;
    double best_value = std::numeric_limits<double>::infinity();
    /// g_best value after initialization and after every iteration.
    std::vector<double> history;
    /// g_best position after initialization and after every iteration.
    std::vector<Vector> position_history;
    std::size_t iterations_run = 0;
    bool stopped_early = false;
};

struct Bounds {
    Vector low;
    Vector high;
};

inline Bounds resolve_bounds(const PsoConfig& cfg, std::size_t dim) {
    auto expand = [dim](const std::vector<double>& v, const char* name) {
        detail::require(v.size() == 1 || v.size() == dim, Errc::parameter,
                        std::string(name) + " must have 1 or " + std::to_string(dim) + " entries");
        Vector out(static_cast<Eigen::Index>(dim));
        for (std::size_t d = 0; d < dim; ++d) {
            out(static_cast<Eigen::Index>(d)) = v.size() == 1 ? v[0] : v[d];
        }
        return out;
    };
    Bounds b{expand(cfg.bounds_low, "bounds_low"), expand(cfg.bounds_high, "bounds_high")};
    for (Eigen::Index d = 0; d < b.low.size(); ++d) {
        detail::require(std::isfinite(b.low(d)) && std::isfinite(b.high(d)) && b.low(d) < b.high(d),
                        Errc::parameter, "bounds_low must be < bounds_high in dimension " + std::to_string(d + 1));
    }
    return b;
}

inline void validate(const PsoConfig& cfg) {
    detail::require(cfg.particles >= 2, Errc::parameter, "swarm needs at least 2 particles");
    detail::require(cfg.inertia_w >= 0.0, Errc::parameter, "inertia weight must be >= 0");
    detail::require(cfg.cognitive_c1 >= 0.0 && cfg.social_c2 >= 0.0, Errc::parameter,
                    "acceleration coefficients must be >= 0");
    detail::require(cfg.stall_window >= 1, Errc::parameter, "stall window must be >= 1");
}

/// New velocity; components are clamped to +/- (high - low) when bounds are given.
inline Vector update_velocity(const Particle& p, const Vector& g_best, const PsoConfig& cfg, const Vector& r1,
                              const Vector& r2, const Bounds* bounds = nullptr) {
    Vector v = cfg.inertia_w * p.velocity +
               cfg.cognitive_c1 * r1.cwiseProduct(p.best_position - p.position) +
               cfg.social_c2 * r2.cwiseProduct(g_best - p.position);
    if (bounds != nullptr) {
        const Vector vmax = bounds->high - bounds->low;
        v = v.cwiseMax(-vmax).cwiseMin(vmax);
    }
    return v;
}

/// Moves the particle by v_new and clamps it into the box.
inline void update_position(Particle& p, const Vector& v_new, const Bounds& bounds) {
    p.velocity = v_new;
    p.position += v_new;
    for (Eigen::Index d = 0; d < p.position.size(); ++d) {
        if (p.position(d) < bounds.low(d)) {
            p.position(d) = bounds.low(d);
            p.velocity(d) = 0.0;
        } else if (p.position(d) > bounds.high(d)) {
            p.position(d) = bounds.high(d);
            p.velocity(d) = 0.0;
        }
    }
}

using Fitness = std::function<double(const Vector&)>;

/**
 * Minimizes `fitness` over the configured box. When `seed_position` is given,
 * particle 0 starts there with zero velocity, so the result is never worse than
 * the seed. NaN fitness is treated as +inf.
 */
inline PsoResult pso_minimize(const Fitness& fitness, std::size_t dim, const PsoConfig& cfg,
                              const std::optional<Vector>& seed_position = std::nullopt) {
    detail::require(dim >= 1, Errc::parameter, "dimension must be >= 1");
    validate(cfg);
    const Bounds bounds = resolve_bounds(cfg, dim);
    const auto D = static_cast<Eigen::Index>(dim);

    auto evaluate = [&](const Vector& x) {
        const double f = fitness(x);
        return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
    };

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Particle> swarm(cfg.particles);
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        auto& p = swarm[i];
        p.velocity = Vector::Zero(D);
        if (i == 0 && seed_position) {
            detail::require(seed_position->size() == D, Errc::dimension, "seed position has wrong dimension");
            detail::require(((seed_position->array() >= bounds.low.array()) &&
                             (seed_position->array() <= bounds.high.array()))
                                .all(),
                            Errc::parameter, "seed position lies outside the search bounds");
            p.position = *seed_position;
        } else {
            p.position.resize(D);
            for (Eigen::Index d = 0; d < D; ++d) {
                p.position(d) = bounds.low(d) + unit(rng) * (bounds.high(d) - bounds.low(d));
            }
        }
    }

    PsoResult result;
    std::size_t g = swarm.size();
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        auto& p = swarm[i];
        p.best_value = evaluate(p.position);
        p.best_position = p.position;
        if (g == swarm.size() ? std::isfinite(p.best_value) : p.best_value < swarm[g].best_value) {
            g = i;
        }
    }
    detail::require(g < swarm.size(), Errc::optimizer_degenerate, "every initial particle has infinite fitness");

    result.best_position = swarm[g].best_position;
    result.best_value = swarm[g].best_value;
    result.history.push_back(result.best_value);
    result.position_history.push_back(result.best_position);

    std::size_t stall = 0;
    Vector r1(D);
    Vector r2(D);
    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        for (auto& p : swarm) {
            for (Eigen::Index d = 0; d < D; ++d) {
                r1(d) = unit(rng);
                r2(d) = unit(rng);
            }
            const Vector v = update_velocity(p, result.best_position, cfg, r1, r2, &bounds);
            update_position(p, v, bounds);
        }

        // Fitness evaluations are independent; the reduction below is ordered
        // by particle index so ties always go to the lowest index.
        std::vector<double> values(swarm.size());
        for (std::size_t i = 0; i < swarm.size(); ++i) {
            values[i] = evaluate(swarm[i].position);
        }

        const double previous = result.best_value;
        for (std::size_t i = 0; i < swarm.size(); ++i) {
            auto& p = swarm[i];
            if (values[i] < p.best_value) {
                p.best_value = values[i];
                p.best_position = p.position;
            }
            if (p.best_value < result.best_value) {
                result.best_value = p.best_value;
                result.best_position = p.best_position;
            }
        }
        result.history.push_back(result.best_value);
        result.position_history.push_back(result.best_position);
        result.iterations_run = it;

        stall = previous - result.best_value < cfg.stall_eps ? stall + 1 : 0;
        if (stall >= cfg.stall_window) {
            result.stopped_early = true;
            break;
        }
    }
    return result;
}

} // namespace fuzzrec

#endif
