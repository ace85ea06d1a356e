#include <cmath>

#include <gtest/gtest.h>

#include <lsprt/error.hpp>
#include <lsprt/solver.hpp>

using namespace lsprt;

namespace {

// Ill-conditioned quadratic with minimizer (1, -2, 3).
Evaluation quadratic(const Eigen::VectorXd& x) {
    const Eigen::Vector3d d(1.0, 10.0, 100.0);
    const Eigen::Vector3d target(1.0, -2.0, 3.0);
    Evaluation e;
    e.ok = true;
    const Eigen::VectorXd r = x - target;
    e.value = 0.5 * r.dot(d.asDiagonal() * r);
    e.gradient = d.asDiagonal() * r;
    return e;
}

} // namespace

TEST(Minimize, LbfgsSolvesQuadratic) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
    const auto r = minimize(quadratic, x, SolverTolerances{}, 500);
    EXPECT_EQ(r.stop, StopReason::GradientNorm);
    EXPECT_LE(r.grad_norm, 1e-6);
    EXPECT_NEAR(x(1), -2.0, 1e-6);
}

TEST(Minimize, SteepestDescendsMonotonically) {
    SolverTolerances tol;
    tol.direction = SearchDirection::Steepest;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
    double last = quadratic(x).value;
    minimize(quadratic, x, tol, 50, [&](const Eigen::VectorXd&, double v) {
        EXPECT_LE(v, last);
        last = v;
    });
    EXPECT_LT(last, quadratic(Eigen::VectorXd::Zero(3)).value);
}

TEST(Minimize, NeverLeavesDomain) {
    // -log(x) + x on x > 0, minimized at 1; starting far right forces
    // trial steps across zero.
    auto f = [](const Eigen::VectorXd& x) {
        Evaluation e;
        if (x(0) <= 0.0) return e;
        e.ok = true;
        e.value = -std::log(x(0)) + x(0);
        e.gradient = Eigen::VectorXd::Constant(1, -1.0 / x(0) + 1.0);
        return e;
    };
    Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 40.0);
    minimize(f, x, SolverTolerances{}, 200, [](const Eigen::VectorXd& p, double) { EXPECT_GT(p(0), 0.0); });
    EXPECT_NEAR(x(0), 1.0, 1e-6);
}

TEST(Minimize, BudgetStop) {
    SolverTolerances tol;
    tol.direction = SearchDirection::Steepest;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
    const auto r = minimize(quadratic, x, tol, 3);
    EXPECT_EQ(r.stop, StopReason::IterationBudget);
    EXPECT_EQ(r.iterations, 3);
}

TEST(SolverTolerances, Validate) {
    SolverTolerances t;
    t.step_shrink = 1.5;
    EXPECT_THROW(t.validate(), ConfigError);
    t = SolverTolerances{};
    t.max_inner = 0;
    EXPECT_THROW(t.validate(), ConfigError);
}
