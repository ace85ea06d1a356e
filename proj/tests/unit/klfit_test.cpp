#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <lsprt/data.hpp>
#include <lsprt/kernel.hpp>
#include <lsprt/klfit.hpp>
#include <lsprt/scorer.hpp>

#include "test_support.hpp"

using namespace lsprt;

namespace {

struct Features {
    Eigen::MatrixXd phi0, phi1, gram;
};

Features features(const LabeledDataset& d, const KernelGeometry& g) {
    return {feature_matrix(d.class0, g), feature_matrix(d.class1, g), kernel_matrix(g)};
}

} // namespace

TEST(KlObjective, ZeroAlphaIsZero) {
    const auto d = gen_labeled(reference_synthetic_task(), 50, 50, 1);
    const auto f = features(d, {pick_centers(d, 10, 1), 1.0});
    EXPECT_EQ(kl_objective(Eigen::VectorXd::Zero(10), f.phi0, f.phi1, 0.5, f.gram), 0.0);
}

TEST(KlObjective, ScalarReduction) {
    // One center on top of the single sample of each class: g = alpha.
    Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
    for (double c : {-2.0, -0.5, 0.0, 0.3, 1.7})
        EXPECT_NEAR(kl_objective(Eigen::VectorXd::Constant(1, c), one, one, 0.0, one), c - std::exp(c) + 1.0, 1e-15);

    LabeledDataset d;
    d.dim = 2;
    d.class0 = {Sample::Zero(2)};
    d.class1 = {Sample::Zero(2)};
    KlFitConfig cfg;
    cfg.lambda = 0.0;
    const auto fit = fit_kl(d, cfg, {Sample::Zero(2)});
    EXPECT_NEAR(fit.model.alpha(0), 0.0, 1e-8);
}

TEST(KlGradient, AtZeroIsMeanDifference) {
    const auto d = gen_labeled(reference_synthetic_task(), 80, 60, 2);
    const auto f = features(d, {pick_centers(d, 12, 3), 0.8});
    const Eigen::VectorXd diff = f.phi1.colwise().mean().transpose() - f.phi0.colwise().mean().transpose();
    const auto g = kl_gradient(Eigen::VectorXd::Zero(12), f.phi0, f.phi1, 0.1, f.gram);
    EXPECT_LE((g - diff).norm(), 1e-14);
}

TEST(KlGradient, MatchesCentralDifferences) {
    const auto d = gen_labeled(reference_synthetic_task(), 80, 60, 2);
    const auto f = features(d, {pick_centers(d, 12, 3), 0.8});
    std::mt19937_64 gen(6);
    std::normal_distribution<double> z;
    auto obj = [&](const Eigen::VectorXd& a) { return kl_objective(a, f.phi0, f.phi1, 0.05, f.gram); };
    for (int i = 0; i < 10; ++i) {
        const Eigen::VectorXd a = Eigen::VectorXd::NullaryExpr(12, [&] { return 0.4 * z(gen); });
        const auto g = kl_gradient(a, f.phi0, f.phi1, 0.05, f.gram);
        const auto fd = testkit::central_difference(obj, a, 1e-6 * (1.0 + a.norm()));
        EXPECT_LE((fd - g).norm() / g.norm(), 1e-5);
    }
}

TEST(KlObjective, PopulationValueAtOracleIsDivergence) {
    // E1[g] - E0[e^g] + 1 at g = log p1/p0 equals KL(p1||p0).
    const auto e1g = testkit::reference_mc_mean(1, 1000000, 31, testkit::reference_log_ratio);
    const auto e0r = testkit::reference_mc_mean(0, 1000000, 32, [](double a, double b) {
        return std::exp(testkit::reference_log_ratio(a, b));
    });
    EXPECT_LE(std::abs(e0r.mean - 1.0), 3.0 * e0r.se);
    const double value = e1g.mean - e0r.mean + 1.0;
    EXPECT_LE(std::abs(value - e1g.mean), 3.0 * e0r.se);
}

TEST(FitKl, StaysBelowDivergence) {
    const auto data = gen_labeled(reference_synthetic_task(), 2000, 2000, 42);
    KlFitConfig cfg;
    cfg.sigma = 1.0;
    cfg.seed = 42;
    const auto fit = fit_kl(data, cfg);
    EXPECT_TRUE(fit.diagnostics.converged);
    const auto kl = testkit::reference_mc_mean(1, 1000000, 33, testkit::reference_log_ratio);
    EXPECT_GT(fit.diagnostics.objective, 0.0);
    EXPECT_LE(fit.diagnostics.objective, kl.mean + 3.0 * kl.se);
    ASSERT_FALSE(fit.diagnostics.trace.empty());
    EXPECT_EQ(fit.diagnostics.trace.front(), 0.0);
    for (std::size_t i = 1; i < fit.diagnostics.trace.size(); ++i)
        EXPECT_GE(fit.diagnostics.trace[i], fit.diagnostics.trace[i - 1]);
}

TEST(FitKl, IdenticalClassesGiveZeroModel) {
    auto data = gen_labeled(reference_synthetic_task(), 100, 100, 5);
    data.class1 = data.class0;
    KlFitConfig cfg;
    cfg.num_centers = 10;
    const auto fit = fit_kl(data, cfg);
    EXPECT_LE(fit.model.alpha.norm(), 1e-6);
    EXPECT_NEAR(fit.diagnostics.objective, 0.0, 1e-12);
}

TEST(CrossValidateKl, SelectsFiniteScore) {
    const auto data = gen_labeled(reference_synthetic_task(), 400, 400, 8);
    const auto cv = cross_validate_kl(data, {0.5, 1, 2}, {1e-3, 1e-1}, 0.3, 3, KlFitConfig{});
    bool found = false;
    for (const auto& row : cv.table) {
        EXPECT_TRUE(std::isfinite(row.score));
        if (row.sigma == cv.sigma && row.lambda == cv.lambda) found = true;
    }
    EXPECT_TRUE(found);
}
