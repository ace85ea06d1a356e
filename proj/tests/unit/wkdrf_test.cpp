#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <lsprt/data.hpp>
#include <lsprt/error.hpp>
#include <lsprt/kernel.hpp>
#include <lsprt/wkdrf.hpp>

#include "test_support.hpp"

using namespace lsprt;

namespace {

const double kQ = std::exp(-1.0);

Sample v2(double a, double b) {
    Sample x(2);
    x << a, b;
    return x;
}

// Two centers at kernel value e^-1 from each other, one training sample per
// class sitting on its class's center.
struct Toy {
    KernelGeometry geometry{{v2(0, 0), v2(1, 1)}, std::sqrt(2.0)};
    LabeledDataset data;
    BoundProblem problem;

    explicit Toy(double lambda) {
        data.dim = 2;
        data.class0 = {v2(0, 0)};
        data.class1 = {v2(1, 1)};
        problem = BoundProblem::build(data, geometry, {1.0, 1.0}, lambda);
    }

    double objective(const Eigen::VectorXd& a) const {
        return bound_objective(a, problem.u0, problem.u1, problem.weights, problem.lambda, problem.gram);
    }
};

// Synthetic problem with random centers for the property checks.
BoundProblem synthetic_problem(double sigma, double lambda) {
    const auto data = gen_labeled(reference_synthetic_task(), 300, 300, 17);
    KernelGeometry g{pick_centers(data, 25, 5), sigma};
    return BoundProblem::build(data, g, weights_from_targets(0.1, 0.1, 0.5, 0.5), lambda);
}

// Strictly feasible alphas with positive divergences, by perturbing the
// initializer and rejecting infeasible draws.
std::vector<Eigen::VectorXd> feasible_points(const BoundProblem& p, std::size_t count, std::uint64_t seed) {
    const auto start = init_alpha(p.u0, p.u1, p.phi0, p.phi1).alpha;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> scale(0.2, 3.0);
    std::vector<Eigen::VectorXd> out;
    while (out.size() < count) {
        Eigen::VectorXd a = scale(gen) * start;
        for (Eigen::Index i = 0; i < a.size(); ++i) a(i) += 0.3 * start.norm() * z(gen) / std::sqrt(double(a.size()));
        const auto c = normalization_constraints(a, p.phi0, p.phi1);
        const auto d = empirical_divergences(a, p.u0, p.u1);
        if (c.strictly_feasible() && d.d01 > 0 && d.d10 > 0) out.push_back(a);
    }
    return out;
}

} // namespace

TEST(CostWeights, SymmetricTargets) {
    const auto w = weights_from_targets(0.1, 0.1, 0.5, 0.5);
    EXPECT_NEAR(w.omega0, 0.87888983093448775, 1e-14);
    EXPECT_NEAR(w.omega1, 0.87888983093448775, 1e-14);
}

TEST(CostWeights, EqualTargetsGiveEqualBrackets) {
    for (double p : {0.01, 0.05, 0.2, 0.35}) {
        const auto w = weights_from_targets(p, p, 0.3, 0.7);
        EXPECT_EQ(w.omega0 / 0.3, w.omega1 / 0.7);
    }
}

TEST(CostWeights, AsymmetricTargets) {
    EXPECT_NEAR(weights_from_targets(0.01, 0.05, 0.5, 0.5).omega1, 2.0884494750677447, 1e-13);
}

TEST(BoundObjective, ToyHandValues) {
    const Eigen::Vector2d a(-1.0, 1.0);
    EXPECT_NEAR(Toy(0.0).objective(a), 3.1639534137386528, 1e-13);
    EXPECT_NEAR(Toy(1.0).objective(a), 3.7960739725672105, 1e-13);
    const auto d = empirical_divergences(a, Toy(0.0).problem.u0, Toy(0.0).problem.u1);
    EXPECT_NEAR(d.d01, 1.0 - kQ, 1e-15);
    EXPECT_NEAR(d.d10, 1.0 - kQ, 1e-15);
}

TEST(BoundObjective, HomogeneousWithoutPenalty) {
    const auto p = synthetic_problem(1.0, 0.0);
    for (const auto& a : feasible_points(p, 5, 1)) {
        for (double t : {0.5, 2.0, 7.0}) {
            const double f1 = bound_objective(a, p.u0, p.u1, p.weights, 0.0, p.gram);
            const double ft = bound_objective(t * a, p.u0, p.u1, p.weights, 0.0, p.gram);
            EXPECT_NEAR(ft, f1 / t, 1e-12 * f1);
            const Eigen::VectorXd g1 = bound_gradient(a, p.u0, p.u1, p.weights, 0.0, p.gram);
            const Eigen::VectorXd gt = bound_gradient(t * a, p.u0, p.u1, p.weights, 0.0, p.gram);
            EXPECT_LE((gt - g1 / (t * t)).norm(), 1e-12 * g1.norm());
        }
    }
}

TEST(BoundObjective, NonPositiveDivergenceIsDomainError) {
    const Toy toy(0.0);
    EXPECT_THROW(toy.objective(Eigen::Vector2d(1.0, -1.0)), DomainError);
    EXPECT_THROW(toy.objective(Eigen::Vector2d::Zero()), DomainError);
}

TEST(BoundGradient, ToyHandValue) {
    const Toy toy(0.0);
    const auto g = bound_gradient(Eigen::Vector2d(-1.0, 1.0), toy.problem.u0, toy.problem.u1, toy.problem.weights,
                                  0.0, toy.problem.gram);
    EXPECT_NEAR(g(0), 1.5819767068693264, 1e-12);
    EXPECT_NEAR(g(1), -1.5819767068693264, 1e-12);
}

TEST(BoundGradient, MatchesCentralDifferences) {
    const auto p = synthetic_problem(1.0, 1e-2);
    auto f = [&](const Eigen::VectorXd& a) { return bound_objective(a, p.u0, p.u1, p.weights, p.lambda, p.gram); };
    for (const auto& a : feasible_points(p, 10, 2)) {
        const auto g = bound_gradient(a, p.u0, p.u1, p.weights, p.lambda, p.gram);
        const auto fd = testkit::central_difference(f, a, 1e-6 * (1.0 + a.norm()));
        EXPECT_LE((fd - g).norm() / g.norm(), 1e-5);
    }
}

TEST(BoundObjective, MidpointConvex) {
    const auto p = synthetic_problem(0.5, 1e-3);
    const auto pts = feasible_points(p, 200, 3);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
        const auto& a = pts[i];
        const auto& b = pts[i + 1];
        const double fa = bound_objective(a, p.u0, p.u1, p.weights, p.lambda, p.gram);
        const double fb = bound_objective(b, p.u0, p.u1, p.weights, p.lambda, p.gram);
        const double fm = bound_objective(0.5 * (a + b), p.u0, p.u1, p.weights, p.lambda, p.gram);
        EXPECT_LE(fm, 0.5 * (fa + fb) + 1e-12 * std::abs(fa + fb));
    }
}

TEST(Constraints, ZeroAlphaIsOnBoundary) {
    const Toy toy(0.0);
    const auto c = normalization_constraints(Eigen::Vector2d::Zero(), toy.problem.phi0, toy.problem.phi1);
    EXPECT_EQ(c.c0, 0.0);
    EXPECT_EQ(c.c1, 0.0);
    EXPECT_FALSE(c.strictly_feasible());
}

TEST(Constraints, ToyHandValue) {
    const Toy toy(0.0);
    const auto c = normalization_constraints(Eigen::Vector2d(-1.0, 1.0), toy.problem.phi0, toy.problem.phi1);
    EXPECT_NEAR(c.c0, -0.46853639461338433, 1e-14);
    EXPECT_NEAR(c.c1, -0.46853639461338433, 1e-14);
}

TEST(Constraints, StrictFeasibilityImpliesPositiveDivergences) {
    const auto p = synthetic_problem(1.0, 0.0);
    std::mt19937_64 gen(8);
    std::normal_distribution<double> z;
    int found = 0;
    for (int tries = 0; found < 100 && tries < 1000000; ++tries) {
        Eigen::VectorXd a = Eigen::VectorXd::NullaryExpr(p.u0.size(), [&] { return 0.3 * z(gen); });
        if (!normalization_constraints(a, p.phi0, p.phi1).strictly_feasible()) continue;
        ++found;
        const auto d = empirical_divergences(a, p.u0, p.u1);
        EXPECT_GT(d.d01, 0.0);
        EXPECT_GT(d.d10, 0.0);
    }
    EXPECT_EQ(found, 100);
}

TEST(InitAlpha, EquipartitionDirection) {
    Eigen::MatrixXd phi0(1, 2), phi1(1, 2);
    phi0 << 1.0, 0.0;
    phi1 << 0.0, 1.0;
    const auto r = init_alpha(phi0.row(0).transpose(), phi1.row(0).transpose(), phi0, phi1);
    EXPECT_EQ(r.path, InitPath::Equipartition);
    const Eigen::VectorXd dir = r.alpha.normalized();
    EXPECT_NEAR(dir(0), -0.70710678118654752, 1e-12);
    EXPECT_NEAR(dir(1), 0.70710678118654752, 1e-12);
}

TEST(InitAlpha, PostconditionsOnSyntheticProblem) {
    const auto p = synthetic_problem(1.0, 1e-3);
    const auto r = init_alpha(p.u0, p.u1, p.phi0, p.phi1);
    const auto c = normalization_constraints(r.alpha, p.phi0, p.phi1);
    const auto d = empirical_divergences(r.alpha, p.u0, p.u1);
    EXPECT_TRUE(c.strictly_feasible());
    EXPECT_GT(d.d01, 0.0);
    EXPECT_GT(d.d10, 0.0);
}

TEST(InitAlpha, IdenticalMeansAreInfeasible) {
    Eigen::MatrixXd phi(2, 2);
    phi << 1.0, 0.5, 0.5, 1.0;
    const Eigen::VectorXd u = phi.colwise().mean().transpose();
    EXPECT_THROW(init_alpha(u, u, phi, phi), InfeasibleError);
}

TEST(FitWkdrf, ToyConvergesWithinBudget) {
    const Toy toy(0.1);
    WkdrfConfig cfg;
    cfg.lambda = 0.1;
    cfg.sigma = std::sqrt(2.0);
    const auto fit = fit_wkdrf(toy.data, cfg, toy.geometry.centers);
    ASSERT_FALSE(fit.diagnostics.stages.empty());
    EXPECT_TRUE(fit.diagnostics.converged);
    EXPECT_NE(fit.diagnostics.stages.back().stop, StopReason::IterationBudget);
    EXPECT_LE(fit.diagnostics.stages.back().final_grad_norm, 1e-4);
    EXPECT_LT(fit.diagnostics.objective, fit.diagnostics.init_objective);
}

TEST(FitWkdrf, TraceIsFeasibleAndDescending) {
    const auto data = gen_labeled(reference_synthetic_task(), 500, 500, 23);
    WkdrfConfig cfg;
    cfg.sigma = 1.0;
    cfg.lambda = 1e-3;
    cfg.seed = 4;
    cfg.record_trace = true;
    const auto fit = fit_wkdrf(data, cfg);
    ASSERT_FALSE(fit.diagnostics.trace.empty());
    for (std::size_t i = 0; i < fit.diagnostics.trace.size(); ++i) {
        const auto& t = fit.diagnostics.trace[i];
        EXPECT_LT(t.c0, 0.0);
        EXPECT_LT(t.c1, 0.0);
        if (i > 0 && fit.diagnostics.trace[i - 1].stage == t.stage)
            EXPECT_LE(t.barrier_value, fit.diagnostics.trace[i - 1].barrier_value);
    }
}

TEST(FitWkdrf, IdenticalClassesAreInfeasible) {
    auto data = gen_labeled(reference_synthetic_task(), 50, 50, 2);
    data.class1 = data.class0;
    EXPECT_THROW(fit_wkdrf(data, WkdrfConfig{}), InfeasibleError);
}

TEST(FitWkdrf, SyntheticFitGeneralizes) {
    const auto task = reference_synthetic_task();
    const auto data = gen_labeled(task, 2000, 2000, 42);
    const auto cv = cross_validate_wkdrf(data, {0.3, 0.5, 1, 2, 4}, {1e-4, 1e-3, 1e-2, 1e-1}, 0.3, 11, WkdrfConfig{});
    WkdrfConfig cfg;
    cfg.sigma = cv.sigma;
    cfg.lambda = cv.lambda;
    cfg.seed = 42;
    const auto fit = fit_wkdrf(data, cfg);
    EXPECT_TRUE(fit.diagnostics.converged);
    EXPECT_LT(fit.diagnostics.objective, fit.diagnostics.init_objective);
    const auto holdout = gen_labeled(task, 5000, 5000, 99);
    const auto p = BoundProblem::build(holdout, fit.model.geometry, fit.diagnostics.weights, 0.0);
    const auto d = empirical_divergences(fit.model.alpha, p.u0, p.u1);
    EXPECT_GT(d.d01, 0.0);
    EXPECT_GT(d.d10, 0.0);
    EXPECT_TRUE(std::isfinite(holdout_bound(fit.model, holdout, fit.diagnostics.weights)));
}

TEST(CrossValidation, SinglePointGrid) {
    const auto data = gen_labeled(reference_synthetic_task(), 200, 200, 3);
    const auto cv = cross_validate_wkdrf(data, {0.8}, {1e-2}, 0.3, 1, WkdrfConfig{});
    EXPECT_EQ(cv.sigma, 0.8);
    EXPECT_EQ(cv.lambda, 1e-2);
    ASSERT_EQ(cv.table.size(), 1u);
}

TEST(CrossValidation, InfiniteScoresNeverWin) {
    const double inf = std::numeric_limits<double>::infinity();
    const auto cv = select_grid_minimum({{0.3, 1e-4, inf, "infeasible"}, {1.0, 1e-2, 5.0, ""}, {2.0, 1e-3, 4.0, ""}});
    EXPECT_EQ(cv.sigma, 2.0);
    EXPECT_EQ(cv.lambda, 1e-3);
    EXPECT_THROW(select_grid_minimum({{0.3, 1e-4, inf, "x"}}), InfeasibleError);
}

TEST(CrossValidation, TiesPreferSmallerSigmaThenLambda) {
    const auto cv = select_grid_minimum({{2.0, 1e-4, 1.0, ""}, {1.0, 1e-2, 1.0, ""}, {1.0, 1e-3, 1.0, ""}});
    EXPECT_EQ(cv.sigma, 1.0);
    EXPECT_EQ(cv.lambda, 1e-3);
}

TEST(CrossValidation, ReproducibleAndThreadIndependent) {
    const auto data = gen_labeled(reference_synthetic_task(), 2000, 2000, 42);
    const std::vector<double> sg{0.3, 0.5, 1, 2, 4}, lg{1e-4, 1e-3, 1e-2, 1e-1};
    const auto a = cross_validate_wkdrf(data, sg, lg, 0.3, 11, WkdrfConfig{}, 1);
    const auto b = cross_validate_wkdrf(data, sg, lg, 0.3, 11, WkdrfConfig{}, 3);
    EXPECT_EQ(a.sigma, b.sigma);
    EXPECT_EQ(a.lambda, b.lambda);
    ASSERT_EQ(a.table.size(), b.table.size());
    for (std::size_t i = 0; i < a.table.size(); ++i) EXPECT_EQ(a.table[i].score, b.table[i].score);
}
