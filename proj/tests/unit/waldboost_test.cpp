#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include <lsprt/data.hpp>
#include <lsprt/error.hpp>
#include <lsprt/waldboost.hpp>

using namespace lsprt;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Ensemble constant_ensemble(std::vector<int> polarities, std::vector<double> weights, double prior) {
    Ensemble e;
    e.dim = 1;
    e.prior_log_odds = prior;
    for (int p : polarities) e.stumps.push_back({0, -kInf, p});
    e.weights = std::move(weights);
    return e;
}

} // namespace

TEST(StumpWeight, QuarterError) { EXPECT_EQ(stump_weight(0.25), 0.5 * std::log(3.0)); }

TEST(StumpWeight, ClampsAtFloor) {
    EXPECT_NEAR(stump_weight(0.0), 11.512925464920228, 1e-9);
    EXPECT_EQ(stump_weight(0.0), stump_weight(1e-10));
}

TEST(AdaBoost, SeparableDataHitsClamp) {
    LabeledDataset d;
    d.dim = 1;
    for (int i = 0; i < 5; ++i) {
        d.class0.push_back(Sample::Constant(1, -1.0 - i));
        d.class1.push_back(Sample::Constant(1, 1.0 + i));
    }
    AdaBoostConfig cfg;
    cfg.rounds = 1;
    AdaBoostTrace trace;
    const auto e = train_adaboost(d, cfg, &trace);
    ASSERT_EQ(e.stumps.size(), 1u);
    EXPECT_LE(trace.weighted_errors.front(), 1e-15);
    EXPECT_NEAR(e.weights.front(), 11.512925464920228, 1e-9);
    EXPECT_EQ(e.stumps.front().predict(Sample::Constant(1, 0.5)), 1);
    EXPECT_EQ(e.stumps.front().predict(Sample::Constant(1, -0.5)), -1);
}

TEST(AdaBoost, ExponentialLossNonIncreasing) {
    const auto d = gen_labeled(reference_synthetic_task(), 2000, 2000, 42);
    AdaBoostTrace trace;
    const auto e = train_adaboost(d, AdaBoostConfig{}, &trace);
    EXPECT_EQ(e.stumps.size(), 200u);
    ASSERT_EQ(trace.exp_loss.size(), e.stumps.size());
    EXPECT_LT(trace.exp_loss.front(), 1.0);
    for (std::size_t i = 1; i < trace.exp_loss.size(); ++i) EXPECT_LE(trace.exp_loss[i], trace.exp_loss[i - 1] * (1 + 1e-12));
}

TEST(AdaBoost, TiesPickLowestFeature) {
    LabeledDataset d;
    d.dim = 2;
    for (int i = 0; i < 4; ++i) {
        d.class0.push_back(Sample::Constant(2, -1.0 - i));
        d.class1.push_back(Sample::Constant(2, 1.0 + i));
    }
    AdaBoostConfig cfg;
    cfg.rounds = 1;
    EXPECT_EQ(train_adaboost(d, cfg).stumps.front().feature, 0u);
}

TEST(AdaBoost, DefaultPriorIsClassRatio) {
    const auto d = gen_labeled(reference_synthetic_task(), 300, 100, 1);
    AdaBoostConfig cfg;
    cfg.rounds = 3;
    EXPECT_NEAR(train_adaboost(d, cfg).prior_log_odds, std::log(3.0), 1e-15);
    cfg.prior_log_odds = 0.25;
    EXPECT_EQ(train_adaboost(d, cfg).prior_log_odds, 0.25);
}

TEST(AdaBoost, DeterministicForSameData) {
    const auto d = gen_labeled(reference_synthetic_task(), 200, 200, 9);
    const auto a = train_adaboost(d, AdaBoostConfig{});
    const auto b = train_adaboost(d, AdaBoostConfig{});
    ASSERT_EQ(a.stumps.size(), b.stumps.size());
    for (std::size_t i = 0; i < a.stumps.size(); ++i) {
        EXPECT_EQ(a.stumps[i].threshold, b.stumps[i].threshold);
        EXPECT_EQ(a.weights[i], b.weights[i]);
    }
}

TEST(EnsembleScore, TwiceMarginPlusPrior) {
    const auto x = Sample::Constant(1, 0.0);
    EXPECT_DOUBLE_EQ(ensemble_score(constant_ensemble({1}, {0.3}, 0.0), x), 0.6);
    const auto one = constant_ensemble({1}, {0.5 * std::log(3.0)}, 0.2);
    EXPECT_NEAR(ensemble_score(one, x), 1.0986122886681098 + 0.2, 1e-15);
    const auto cancel = constant_ensemble({1, -1}, {0.2, 0.2}, std::log(0.75 / 0.25));
    EXPECT_EQ(ensemble_margin(cancel, x), 0.0);
    EXPECT_NEAR(ensemble_score(cancel, x), 1.0986122886681098, 1e-15);
}

TEST(EnsembleScorer, MatchesFreeFunction) {
    const auto d = gen_labeled(reference_synthetic_task(), 100, 100, 2);
    const auto e = train_adaboost(d, AdaBoostConfig{});
    EnsembleScorer s(e);
    for (const auto& x : d.class0) EXPECT_EQ(s.score(x), ensemble_score(e, x));
    EXPECT_NE(s.descriptor().find("waldboost"), std::string::npos);
}

TEST(Ensemble, ValidateRejectsMismatch) {
    auto e = constant_ensemble({1}, {0.3, 0.1}, 0.0);
    EXPECT_THROW(e.validate(), ConfigError);
}
