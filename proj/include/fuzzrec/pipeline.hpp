#ifndef FUZZREC_PIPELINE_HPP
#define FUZZREC_PIPELINE_HPP

#include <cmath>
#include <string>
#include <vector>

#include "degranulation.hpp"
#include "error.hpp"
#include "fcm.hpp"
#include "pso.hpp"
#include "types.hpp"

/**
 * @file pipeline.hpp
 * @brief Two-stage model: FCM granulation, then a swarm search over per-cluster
 * fuzzifiers that minimizes the training reconstruction residual.
 *
 * Both methods decode through the same operators. The baseline evaluates the
 * fitted FCM model at the uniform vector [m, ..., m]; the refined model
 * evaluates it at the optimized vector. Because the swarm is seeded with the
 * uniform vector and keeps its best-so-far, the refined training error never
 * exceeds the baseline one.
 */

namespace fuzzrec {

struct RefinedModel {
    FcmModel base;
    FuzzifierVector fuzzifiers;
    /// Refined prototypes at the optimized fuzzifier vector.
    Prototypes prototypes;
    double train_error = 0.0;
    /// Training error of the uniform seed vector (the generic FCM decoder).
    double baseline_train_error = 0.0;
    double m0 = 2.0;
    std::size_t train_size = 0;
    /// g_best residual norm per swarm iteration.
    std::vector<double> pso_history;
    /// g_best fuzzifier vector per swarm iteration.
    std::vector<std::vector<double>> fuzzifier_trace;
    std::size_t pso_iterations = 0;
    bool stopped_early = false;
};

struct EvalScores {
    double train_error = 0.0;
    double test_error = 0.0;
};

/// Prototypes used by the generic decoder of a fitted FCM model.
inline Prototypes baseline_prototypes(const Dataset& X_train, const FcmModel& model) {
    return granulate(X_train, model.prototypes, FuzzifierVector::uniform(model.prototypes.count(), model.fuzzifier));
}

/// Generic FCM degranulation error of `X` against already trained prototypes.
inline double baseline_error(const Dataset& X, const Prototypes& trained, double m) {
    detail::require(X.dims() == trained.dims(), Errc::dimension,
                    "data has " + std::to_string(X.dims()) + " columns, model expects " +
                        std::to_string(trained.dims()));
    return reconstruction_error(reconstruct_scalar(X, trained, m), X.rows).error;
}

inline EvalScores evaluate_baseline(const FcmModel& model, const Dataset& X_train, const Dataset& X_eval) {
    const Prototypes trained = baseline_prototypes(X_train, model);
    return {baseline_error(X_train, trained, model.fuzzifier), baseline_error(X_eval, trained, model.fuzzifier)};
}

inline EvalScores evaluate_baseline(const Dataset& X_train, const Dataset& X_eval, std::size_t c, double m,
                                    FcmConfig fcm_cfg) {
    fcm_cfg.c = c;
    fcm_cfg.m = m;
    return evaluate_baseline(fcm_fit(X_train, fcm_cfg), X_train, X_eval);
}

/**
 * Supervised refinement of an already fitted FCM model. With
 * `pso_cfg.max_iter == 0` the search is disabled and the uniform vector is
 * kept, which reproduces the generic decoder exactly.
 */
inline RefinedModel refine_model(const Dataset& X_train, FcmModel base, const PsoConfig& pso_cfg) {
    const std::size_t c = base.prototypes.count();
    const double m0 = base.fuzzifier;
    const double N = static_cast<double>(X_train.size());

    RefinedModel model;
    model.m0 = m0;
    model.train_size = X_train.size();

    const Vector seed = Vector::Constant(static_cast<Eigen::Index>(c), m0);
    const CompositeObjective objective(X_train, base.prototypes);
    auto fitness = [&](const Vector& x) {
        return objective(FuzzifierVector(std::vector<double>(x.data(), x.data() + x.size())));
    };

    PsoResult search;
    if (pso_cfg.max_iter == 0) {
        search.best_position = seed;
        search.best_value = fitness(seed);
        detail::require(std::isfinite(search.best_value), Errc::optimizer_degenerate,
                        "uniform fuzzifier vector has infinite fitness");
        search.history = {search.best_value};
        search.position_history = {seed};
    } else {
        search = pso_minimize(fitness, c, pso_cfg, seed);
    }

    model.fuzzifiers = FuzzifierVector(std::vector<double>(search.best_position.data(),
                                                           search.best_position.data() + search.best_position.size()));
    const auto best = objective.evaluate(model.fuzzifiers);
    detail::require(std::isfinite(best.f), Errc::numeric, "optimized fuzzifier vector is infeasible");
    model.prototypes = best.prototypes;
    model.train_error = best.f / N;
    model.baseline_train_error = search.history.front() / N;
    model.pso_history = std::move(search.history);
    for (const auto& p : search.position_history) {
        model.fuzzifier_trace.emplace_back(p.data(), p.data() + p.size());
    }
    model.pso_iterations = search.iterations_run;
    model.stopped_early = search.stopped_early;
    model.base = std::move(base);
    return model;
}

inline RefinedModel train_refined(const Dataset& X_train, std::size_t c, double m0, FcmConfig fcm_cfg,
                                  const PsoConfig& pso_cfg) {
    fcm_cfg.c = c;
    fcm_cfg.m = m0;
    return refine_model(X_train, fcm_fit(X_train, fcm_cfg), pso_cfg);
}

/// Reconstruction error of `X` under the refined prototypes and fuzzifiers.
inline double evaluate_refined(const RefinedModel& model, const Dataset& X) {
    detail::require(X.dims() == model.prototypes.dims(), Errc::dimension,
                    "data has " + std::to_string(X.dims()) + " columns, model expects " +
                        std::to_string(model.prototypes.dims()));
    const auto Upow = powered_memberships(X, model.prototypes, model.fuzzifiers);
    return reconstruction_error(reconstruct(Upow, model.prototypes), X.rows).error;
}

} // namespace fuzzrec

#endif
