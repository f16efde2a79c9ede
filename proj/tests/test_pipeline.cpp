#include <gtest/gtest.h>

#include <fuzzrec/dataset.hpp>
#include <fuzzrec/pipeline.hpp>
#include <fuzzrec/serialize.hpp>

#include "oracles.hpp"

using namespace fuzzrec;

namespace {

PsoConfig small_pso(std::uint64_t seed, std::size_t iters = 40) {
    PsoConfig cfg;
    cfg.particles = 12;
    cfg.max_iter = iters;
    cfg.seed = seed;
    return cfg;
}

FcmConfig fcm_cfg(std::size_t c, double m, std::uint64_t seed) {
    FcmConfig cfg;
    cfg.c = c;
    cfg.m = m;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST(Baseline, MatchesOracleDecoder) {
    for (std::uint64_t s = 0; s < 6; ++s) {
        const auto X = oracle::random_dataset(40, 2, s);
        const auto model = fcm_fit(X, fcm_cfg(3, 1.6 + 0.4 * static_cast<double>(s), s));
        const auto scores = evaluate_baseline(model, X, X);
        const double want =
            oracle::generic_error(oracle::rows_of(X.rows), oracle::rows_of(model.prototypes.centers), model.fuzzifier);
        EXPECT_NEAR(scores.train_error, want, 1e-12);
    }
}

TEST(Baseline, ConvenienceOverloadFitsFirst) {
    const auto X = oracle::random_dataset(30, 2, 1);
    const auto a = evaluate_baseline(X, X, 3, 2.0, fcm_cfg(9, 9.0, 4));
    const auto b = evaluate_baseline(fcm_fit(X, fcm_cfg(3, 2.0, 4)), X, X);
    EXPECT_EQ(a.train_error, b.train_error);
}

TEST(Refined, DisabledSearchReproducesBaseline) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto X = oracle::random_dataset(50, 1 + s % 4, s + 20);
        const auto base = fcm_fit(X, fcm_cfg(2 + s % 3, 2.0, s));
        const auto refined = refine_model(X, base, small_pso(s, 0));
        const auto scores = evaluate_baseline(base, X, X);
        EXPECT_TRUE(refined.fuzzifiers.is_uniform());
        EXPECT_NEAR(refined.train_error, scores.train_error, 1e-12);
        EXPECT_NEAR(evaluate_refined(refined, X), scores.train_error, 1e-12);
        EXPECT_EQ(refined.pso_history.size(), 1u);
    }
}

TEST(Refined, NeverWorseThanBaselineOnTrain) {
    for (std::uint64_t s = 0; s < 8; ++s) {
        const auto X = oracle::random_dataset(60, 2, s + 40);
        const double m0 = 1.1 + 0.5 * static_cast<double>(s);
        const auto base = fcm_fit(X, fcm_cfg(3, m0, s));
        const auto refined = refine_model(X, base, small_pso(s));
        EXPECT_LE(refined.train_error, evaluate_baseline(base, X, X).train_error) << "seed " << s;
        EXPECT_EQ(refined.baseline_train_error, evaluate_baseline(base, X, X).train_error);
    }
}

TEST(Refined, TrainErrorMatchesHeldOutScorerOnTrainRows) {
    const auto X = oracle::random_dataset(45, 3, 7);
    const auto refined = train_refined(X, 3, 2.0, FcmConfig{}, small_pso(3));
    EXPECT_EQ(refined.train_error, evaluate_refined(refined, X));
    EXPECT_EQ(refined.m0, 2.0);
    EXPECT_EQ(refined.train_size, 45u);
}

TEST(Refined, TestRowsUseTrainedPrototypes) {
    const auto X = oracle::random_dataset(60, 2, 8);
    const auto plan = kfold_split(60, 5, 1);
    const auto train = select_rows(X, plan.train_indices(0));
    const auto test = select_rows(X, plan.test_indices(0));
    const auto refined = train_refined(train, 3, 2.0, FcmConfig{}, small_pso(2));
    const double want = oracle::spectral_norm(oracle::minus(
                            oracle::reconstruct(oracle::grades(oracle::rows_of(test.rows),
                                                               oracle::rows_of(refined.prototypes.centers),
                                                               refined.fuzzifiers.values(), true),
                                                oracle::rows_of(refined.prototypes.centers)),
                            oracle::rows_of(test.rows))) /
                        12.0;
    EXPECT_NEAR(evaluate_refined(refined, test), want, 1e-12);
    EXPECT_THROW(evaluate_refined(refined, oracle::random_dataset(5, 3, 1)), Error);
}

TEST(Refined, JsonRoundTrip) {
    const auto X = oracle::random_dataset(30, 2, 9);
    const auto refined = train_refined(X, 2, 1.6, FcmConfig{}, small_pso(5, 10));
    const json j = refined;
    const auto back = json::parse(j.dump()).get<RefinedModel>();
    EXPECT_EQ(back.fuzzifiers, refined.fuzzifiers);
    EXPECT_EQ(back.prototypes.centers, refined.prototypes.centers);
    EXPECT_EQ(back.pso_history, refined.pso_history);
    EXPECT_EQ(back.fuzzifier_trace, refined.fuzzifier_trace);
    EXPECT_EQ(back.base.partition.grades, refined.base.partition.grades);
    EXPECT_EQ(back.train_error, refined.train_error);
    EXPECT_EQ(json(back).dump(), j.dump());
}

TEST(Serialize, FoldPlanAndNormalizationRoundTrip) {
    const auto plan = kfold_split(23, 4, 2);
    EXPECT_EQ(json(plan).get<FoldPlan>(), plan);
    const auto [d, p] = normalize_minmax(oracle::random_dataset(10, 3, 1));
    const auto back = json(p).get<NormalizationParams>();
    EXPECT_EQ(back.kind, p.kind);
    EXPECT_EQ(back.center, p.center);
    EXPECT_EQ(back.scale, p.scale);
}

TEST(Serialize, InfinityIsWrittenAsNull) {
    FcmModel m;
    m.prototypes = oracle::protos({{0.0}, {1.0}});
    m.partition.grades = Eigen::MatrixXd::Ones(2, 1);
    m.final_delta = std::numeric_limits<double>::infinity();
    const json j = m;
    EXPECT_TRUE(j.at("final_delta").is_null());
    EXPECT_TRUE(std::isinf(j.get<FcmModel>().final_delta));
}

TEST(PipelineProperty, BitDeterministicUnderFixedSeeds) {
    const auto X = normalize_zscore(oracle::random_dataset(70, 3, 31)).first;
    const auto a = train_refined(X, 4, 2.1, fcm_cfg(4, 2.1, 8), small_pso(8));
    const auto b = train_refined(X, 4, 2.1, fcm_cfg(4, 2.1, 8), small_pso(8));
    EXPECT_EQ(a.fuzzifiers, b.fuzzifiers);
    EXPECT_EQ(a.prototypes.centers, b.prototypes.centers);
    EXPECT_EQ(a.pso_history, b.pso_history);
    EXPECT_EQ(a.train_error, b.train_error);
    EXPECT_EQ(json(a).dump(), json(b).dump());
}
