#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lsprt/data.hpp"
#include "lsprt/kernel.hpp"
#include "lsprt/solver.hpp"

namespace lsprt {

struct WkdrfConfig {
    double target_pf = 0.1;
    double target_pm = 0.1;
    double prior0 = 0.5;
    double lambda = 1e-3;
    double sigma = 1.0;
    std::size_t num_centers = 25;
    std::uint64_t seed = 0;
    SolverTolerances solver;
    bool record_trace = false;

    double prior1() const { return 1.0 - prior0; }
    void validate() const;
};

// Per-hypothesis sampling-cost weights: the prior times the bracket of the
// SPRT expected-sample-size formula at the target error pair.
struct CostWeights {
    double omega0 = 0.0;
    double omega1 = 0.0;
};

// omega0 = pi0 [pf log(pf/(1-pm)) + (1-pf) log((1-pf)/pm)]
// omega1 = pi1 [pm log(pm/(1-pf)) + (1-pm) log((1-pm)/pf)]
CostWeights weights_from_targets(double pf, double pm, double pi0, double pi1);

// Empirical pieces of the relaxed program. Rows of phi0/phi1 are kernel
// features of the class-0/class-1 training samples; u0/u1 are their column
// means.
struct BoundProblem {
    Eigen::MatrixXd phi0;
    Eigen::MatrixXd phi1;
    Eigen::VectorXd u0;
    Eigen::VectorXd u1;
    Eigen::MatrixXd gram;  // kernel matrix of the centers
    CostWeights weights;
    double lambda = 0.0;

    static BoundProblem build(const LabeledDataset& train, const KernelGeometry& geometry,
                              const CostWeights& weights, double lambda);
};

// D01 = -u0.alpha and D10 = u1.alpha; both must be positive.
struct Divergences {
    double d01 = 0.0;
    double d10 = 0.0;
};

Divergences empirical_divergences(const Eigen::VectorXd& alpha, const Eigen::VectorXd& u0,
                                  const Eigen::VectorXd& u1);

// omega0/D01 + omega1/D10 + (lambda/2) alpha' K alpha. Throws DomainError
// unless both divergences are positive.
double bound_objective(const Eigen::VectorXd& alpha, const Eigen::VectorXd& u0,
                       const Eigen::VectorXd& u1, const CostWeights& weights, double lambda,
                       const Eigen::MatrixXd& gram);

// omega0 u0/D01^2 - omega1 u1/D10^2 + lambda K alpha.
Eigen::VectorXd bound_gradient(const Eigen::VectorXd& alpha, const Eigen::VectorXd& u0,
                               const Eigen::VectorXd& u1, const CostWeights& weights,
                               double lambda, const Eigen::MatrixXd& gram);

// c0 = mean_j exp(g(x0_j)) - 1, c1 = mean_i exp(-g(x1_i)) - 1. Overflow
// yields +inf. Feasible iff both are <= 0.
struct ConstraintValues {
    double c0 = 0.0;
    double c1 = 0.0;
    bool strictly_feasible() const { return c0 < 0.0 && c1 < 0.0; }
};

ConstraintValues normalization_constraints(const Eigen::VectorXd& alpha,
                                           const Eigen::MatrixXd& phi0,
                                           const Eigen::MatrixXd& phi1);

enum class InitPath { Equipartition, SubgradientFallback };

const char* to_string(InitPath p);

struct InitResult {
    Eigen::VectorXd alpha;
    InitPath path = InitPath::Equipartition;
    int halvings = 0;
};

// Strictly feasible starting point along the normalized equipartition of
// -u0 and u1, shrunk by halving until every strict condition holds. Throws
// InfeasibleError when no such point can be found.
InitResult init_alpha(const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                      const Eigen::MatrixXd& phi0, const Eigen::MatrixXd& phi1);

struct BarrierTracePoint {
    int stage = 0;
    double mu = 0.0;
    double barrier_value = 0.0;
    double objective = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double d01 = 0.0;
    double d10 = 0.0;
};

struct StageReport {
    double mu = 0.0;
    int iterations = 0;
    double final_grad_norm = 0.0;
    StopReason stop = StopReason::IterationBudget;
};

struct FitDiagnostics {
    double objective = std::numeric_limits<double>::quiet_NaN();
    double init_objective = std::numeric_limits<double>::quiet_NaN();
    double c0 = 0.0;
    double c1 = 0.0;
    double d01 = 0.0;
    double d10 = 0.0;
    CostWeights weights;
    InitPath init_path = InitPath::Equipartition;
    std::vector<StageReport> stages;
    bool converged = false;
    bool jitter_applied = false;
    std::vector<BarrierTracePoint> trace;  // filled when record_trace is set
};

struct WkdrfFit {
    KernelModel model;
    FitDiagnostics diagnostics;
};

// Minimizes the bound subject to c0 <= 0, c1 <= 0 with a log-barrier method.
// Centers are drawn from the training pool with config.seed.
WkdrfFit fit_wkdrf(const LabeledDataset& train, const WkdrfConfig& config);

// Same, with caller-supplied centers (config.num_centers and seed ignored).
WkdrfFit fit_wkdrf(const LabeledDataset& train, const WkdrfConfig& config,
                   std::vector<Sample> centers);

// Unregularized omega0/D01 + omega1/D10 of a model on a dataset; +inf when a
// divergence estimate is not positive.
double holdout_bound(const KernelModel& model, const LabeledDataset& data,
                     const CostWeights& weights);

struct GridScore {
    double sigma = 0.0;
    double lambda = 0.0;
    double score = std::numeric_limits<double>::infinity();
    std::string note;  // failure message for unscorable points
};

struct CrossValidation {
    double sigma = 0.0;
    double lambda = 0.0;
    std::vector<GridScore> table;
};

// Smallest finite score, ties toward smaller sigma then smaller lambda.
// Throws InfeasibleError when no entry is finite.
CrossValidation select_grid_minimum(std::vector<GridScore> table);

// Fits each (sigma, lambda) on the train side of a split and scores the
// holdout bound. Picks the minimum, ties toward smaller sigma then smaller
// lambda. Throws InfeasibleError when no grid point scores finitely.
CrossValidation cross_validate_wkdrf(const LabeledDataset& data, const std::vector<double>& sigma_grid,
                                     const std::vector<double>& lambda_grid, double holdout_fraction,
                                     std::uint64_t seed, const WkdrfConfig& base,
                                     unsigned threads = 1);

} // namespace lsprt
