#pragma once

#include <functional>

#include <Eigen/Core>

namespace lsprt {

enum class SearchDirection { LBfgs, Steepest };

// Stopping rules and line-search constants shared by the first-order solvers.
struct SolverTolerances {
    double grad_norm = 1e-6;
    double rel_objective = 1e-9;
    int max_stages = 9;             // barrier stages: mu = 1, 1/10, ..., 1e-8
    double barrier_decrement = 10.0;
    double initial_mu = 1.0;
    int max_inner = 500;            // iterations per stage
    double initial_step = 1.0;      // Armijo backtracking
    double step_shrink = 0.5;
    double armijo_slope = 1e-4;
    int max_backtracks = 80;
    SearchDirection direction = SearchDirection::LBfgs;
    int lbfgs_memory = 10;

    void validate() const;
};

enum class StopReason { GradientNorm, RelativeObjective, LineSearchStalled, IterationBudget };

const char* to_string(StopReason r);
const char* to_string(SearchDirection d);

// Value and gradient of a smooth function on an open domain. ok == false
// marks a point outside the domain; the line search treats it as a failed
// trial step.
struct Evaluation {
    bool ok = false;
    double value = 0.0;
    Eigen::VectorXd gradient;
};

using SmoothObjective = std::function<Evaluation(const Eigen::VectorXd&)>;

struct MinimizeReport {
    int iterations = 0;
    double value = 0.0;
    double grad_norm = 0.0;
    StopReason stop = StopReason::IterationBudget;
};

// Descent with Armijo backtracking from `x`, which must be inside the domain.
// Steps are L-BFGS or steepest-descent directions per tol.direction. Each
// accepted iterate is reported through on_accept. `x` holds the final iterate.
MinimizeReport minimize(const SmoothObjective& f, Eigen::VectorXd& x, const SolverTolerances& tol,
                        int max_iterations,
                        const std::function<void(const Eigen::VectorXd&, double)>& on_accept = {});

} // namespace lsprt
