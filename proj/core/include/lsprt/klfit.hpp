#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "lsprt/data.hpp"
#include "lsprt/kernel.hpp"
#include "lsprt/solver.hpp"
#include "lsprt/wkdrf.hpp"

namespace lsprt {

// Baseline that fits the log-ratio by maximizing the variational lower bound
//   L(alpha) = mean_i g(x1_i) - mean_j exp(g(x0_j)) + 1 - (lambda/2) alpha' K alpha
// on KL(p1 || p0). Its unregularized population maximizer is log(p1/p0).
struct KlFitConfig {
    double sigma = 1.0;
    std::size_t num_centers = 25;
    double lambda = 1e-3;
    std::uint64_t seed = 0;
    SolverTolerances solver;
    int max_iterations = 4500;

    void validate() const;
};

// Returns -inf when the exponential term overflows.
double kl_objective(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& phi0,
                    const Eigen::MatrixXd& phi1, double lambda, const Eigen::MatrixXd& gram);

Eigen::VectorXd kl_gradient(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& phi0,
                            const Eigen::MatrixXd& phi1, double lambda, const Eigen::MatrixXd& gram);

struct KlFitDiagnostics {
    double objective = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    double final_grad_norm = 0.0;
    StopReason stop = StopReason::IterationBudget;
    bool converged = false;
    std::vector<double> trace;  // objective after every accepted step, starting at alpha = 0
};

struct KlFit {
    KernelModel model;
    KlFitDiagnostics diagnostics;
};

// Armijo gradient ascent from alpha = 0.
KlFit fit_kl(const LabeledDataset& train, const KlFitConfig& config);
KlFit fit_kl(const LabeledDataset& train, const KlFitConfig& config, std::vector<Sample> centers);

// Grid scores are the negated unregularized holdout objective so the shared
// minimum selection applies.
CrossValidation cross_validate_kl(const LabeledDataset& data, const std::vector<double>& sigma_grid,
                                  const std::vector<double>& lambda_grid, double holdout_fraction,
                                  std::uint64_t seed, const KlFitConfig& base, unsigned threads = 1);

} // namespace lsprt
