#include <cmath>

#include <gtest/gtest.h>

#include <lsprt/data.hpp>
#include <lsprt/error.hpp>
#include <lsprt/scorer.hpp>
#include <lsprt/sprt.hpp>

using namespace lsprt;

TEST(Thresholds, SymmetricTargets) {
    const auto t = thresholds_from_errors({0.1, 0.1});
    EXPECT_NEAR(t.a, -std::log(9.0), 1e-15);
    EXPECT_NEAR(t.b, std::log(9.0), 1e-15);
}

TEST(Thresholds, AsymmetricTargets) {
    const auto t = thresholds_from_errors({0.01, 0.05});
    EXPECT_NEAR(t.a, -2.9856819377004896, 1e-14);
    EXPECT_NEAR(t.b, 4.5538768916005408, 1e-14);
    const auto e = errors_from_thresholds({-2.985682, 4.553877});
    EXPECT_NEAR(e.pf, 0.01, 1e-6);
    EXPECT_NEAR(e.pm, 0.05, 1e-6);
}

TEST(Thresholds, RoundTripGrid) {
    for (int i = 1; i <= 20; ++i) {
        for (int j = 1; j <= 20; ++j) {
            const ErrorTargets in{0.0225 * i, 0.0225 * j};
            const auto out = errors_from_thresholds(thresholds_from_errors(in));
            EXPECT_NEAR(out.pf, in.pf, 1e-12);
            EXPECT_NEAR(out.pm, in.pm, 1e-12);
        }
    }
}

TEST(Thresholds, SymmetricInverse) {
    const auto e = errors_from_thresholds({-std::log(9.0), std::log(9.0)});
    EXPECT_NEAR(e.pf, 0.1, 1e-15);
    EXPECT_NEAR(e.pm, 0.1, 1e-15);
}

TEST(Thresholds, UpperLimit) {
    const auto e = errors_from_thresholds({-1.5, 60.0});
    EXPECT_NEAR(e.pm, std::exp(-1.5), 1e-12);
}

TEST(Thresholds, InvalidInputs) {
    EXPECT_THROW(thresholds_from_errors({0.6, 0.5}), ConfigError);
    EXPECT_THROW(thresholds_from_errors({0.0, 0.1}), ConfigError);
    EXPECT_THROW(errors_from_thresholds({0.5, 1.0}), ConfigError);
}

namespace {

struct ZeroStream final : SampleSource {
    Sample x = Sample::Zero(2);
    std::size_t count = 0;
    const Sample& next() override {
        ++count;
        return x;
    }
};

} // namespace

TEST(RunSprt, ConstantPositive) {
    ZeroStream s;
    const auto o = run_sprt(ConstantScorer(1.0), s, {-2.5, 2.5}, 100);
    EXPECT_EQ(o.n_samples, 3u);
    EXPECT_EQ(o.final_stat, 3.0);
    EXPECT_EQ(o.decision, Decision::H1);
    EXPECT_FALSE(o.truncated);
    EXPECT_EQ(s.count, 3u);
}

TEST(RunSprt, ConstantNegative) {
    ZeroStream s;
    const auto o = run_sprt(ConstantScorer(-1.0), s, {-2.5, 2.5}, 100);
    EXPECT_EQ(o.n_samples, 3u);
    EXPECT_EQ(o.decision, Decision::H0);
}

TEST(RunSprt, BoundaryIsInclusive) {
    ZeroStream s;
    const auto o = run_sprt(ConstantScorer(1.0), s, {-2.0, 2.0}, 100);
    EXPECT_EQ(o.n_samples, 2u);
    EXPECT_EQ(o.decision, Decision::H1);
}

TEST(RunSprt, ZeroScoreTruncatesToH0) {
    ZeroStream s;
    const auto o = run_sprt(ConstantScorer(0.0), s, {-2.5, 2.5}, 50);
    EXPECT_TRUE(o.truncated);
    EXPECT_EQ(o.n_samples, 50u);
    EXPECT_EQ(o.decision, Decision::H0);
}

TEST(RunSprt, NonFiniteScoreAborts) {
    ZeroStream s;
    EXPECT_THROW(run_sprt(ConstantScorer(std::nan("")), s, {-2.5, 2.5}, 50), RunError);
}

TEST(TheoreticalCost, SymmetricHandValue) {
    const auto c = theoretical_cost({0.1, 0.1}, 1.0, 1.0, 0.5, 0.5);
    EXPECT_NEAR(c.n0, 1.7577796618689755, 1e-14);
    EXPECT_NEAR(c.n1, 1.7577796618689755, 1e-14);
    EXPECT_NEAR(c.total, 1.7577796618689755, 1e-14);
    const auto h = theoretical_cost({0.1, 0.1}, 2.0, 2.0, 0.5, 0.5);
    EXPECT_NEAR(h.n0, c.n0 / 2, 1e-15);
    EXPECT_NEAR(h.total, c.total / 2, 1e-15);
}

TEST(TheoreticalCost, AsymmetricHandValue) {
    EXPECT_NEAR(theoretical_cost({0.01, 0.05}, 1.0, 1.0, 0.5, 0.5).n1, 4.1768989501354893, 1e-13);
}

TEST(WaldIdentity, OracleMeansAreOne) {
    const auto task = reference_synthetic_task();
    const auto r = wald_identity_check(*oracle_scorer(task), task, thresholds_from_errors({0.1, 0.1}), 4000, 10000, 5);
    EXPECT_EQ(r.truncated_h0 + r.truncated_h1, 0u);
    EXPECT_LE(std::abs(r.mean_exp_lambda_h0 - 1.0), 3.0 * r.se_exp_lambda_h0);
    EXPECT_LE(std::abs(r.mean_exp_neg_lambda_h1 - 1.0), 3.0 * r.se_exp_neg_lambda_h1);
}

TEST(WaldIdentity, AllTruncatedIsAnError) {
    const auto task = reference_synthetic_task();
    EXPECT_THROW(wald_identity_check(ConstantScorer(0.0), task, {-1.0, 1.0}, 10, 20, 1), RunError);
}

TEST(WaldIdentity, ThreadIndependent) {
    const auto task = reference_synthetic_task();
    const auto s = oracle_scorer(task);
    const auto t = thresholds_from_errors({0.05, 0.05});
    const auto a = wald_identity_check(*s, task, t, 500, 1000, 9, 1);
    const auto b = wald_identity_check(*s, task, t, 500, 1000, 9, 4);
    EXPECT_EQ(a.mean_exp_lambda_h0, b.mean_exp_lambda_h0);
    EXPECT_EQ(a.se_exp_neg_lambda_h1, b.se_exp_neg_lambda_h1);
}
