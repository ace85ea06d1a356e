#include "lsprt/klfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsprt/error.hpp"
#include "lsprt/parallel.hpp"

namespace lsprt {

void KlFitConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be non-negative");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
    if (num_centers < 1) throw ConfigError("num_centers must be at least 1");
    if (max_iterations < 1) throw ConfigError("max_iterations must be positive");
    solver.validate();
}

double kl_objective(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& phi0,
                    const Eigen::MatrixXd& phi1, double lambda, const Eigen::MatrixXd& gram) {
    const double exp_term = (phi0 * alpha).array().exp().mean();
    if (!std::isfinite(exp_term)) return -std::numeric_limits<double>::infinity();
    return (phi1 * alpha).mean() - exp_term + 1.0 - 0.5 * lambda * alpha.dot(gram * alpha);
}

Eigen::VectorXd kl_gradient(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& phi0,
                            const Eigen::MatrixXd& phi1, double lambda, const Eigen::MatrixXd& gram) {
    const Eigen::VectorXd e0 = (phi0 * alpha).array().exp().matrix();
    return phi1.colwise().mean().transpose() -
           phi0.transpose() * e0 / static_cast<double>(phi0.rows()) - lambda * (gram * alpha);
}

KlFit fit_kl(const LabeledDataset& train, const KlFitConfig& config) {
    config.validate();
    train.validate();
    return fit_kl(train, config, pick_centers(train, config.num_centers, config.seed));
}

KlFit fit_kl(const LabeledDataset& train, const KlFitConfig& config, std::vector<Sample> centers) {
    config.validate();
    train.validate();
    KernelGeometry geometry{std::move(centers), config.sigma};
    geometry.validate();
    if (geometry.dim() != train.dim)
        throw DimensionMismatch("kernel centers and training data differ in dimension");
    const Eigen::MatrixXd phi0 = feature_matrix(train.class0, geometry);
    const Eigen::MatrixXd phi1 = feature_matrix(train.class1, geometry);
    const Eigen::MatrixXd gram = kernel_matrix(geometry);

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(geometry.num_centers()));
    KlFit fit;
    auto& diag = fit.diagnostics;

    // Ascent on L is descent on -L.
    const SmoothObjective negated = [&](const Eigen::VectorXd& a) {
        Evaluation ev;
        const double v = kl_objective(a, phi0, phi1, config.lambda, gram);
        if (!std::isfinite(v)) return ev;
        ev.value = -v;
        ev.gradient = -kl_gradient(a, phi0, phi1, config.lambda, gram);
        ev.ok = ev.gradient.allFinite();
        return ev;
    };
    const MinimizeReport rep = minimize(negated, alpha, config.solver, config.max_iterations,
                                        [&](const Eigen::VectorXd&, double v) { diag.trace.push_back(-v); });
    diag.objective = -rep.value;
    diag.iterations = rep.iterations;
    diag.final_grad_norm = rep.grad_norm;
    diag.stop = rep.stop;
    diag.converged = rep.stop != StopReason::IterationBudget;
    fit.model.geometry = std::move(geometry);
    fit.model.alpha = std::move(alpha);
    return fit;
}

CrossValidation cross_validate_kl(const LabeledDataset& data, const std::vector<double>& sigma_grid,
                                  const std::vector<double>& lambda_grid, double holdout_fraction,
                                  std::uint64_t seed, const KlFitConfig& base, unsigned threads) {
    if (sigma_grid.empty() || lambda_grid.empty()) throw ConfigError("cross-validation grids must be non-empty");
    const auto [train, holdout] = split(data, holdout_fraction, seed);
    const auto centers = pick_centers(train, base.num_centers, base.seed);

    std::vector<GridScore> table(sigma_grid.size() * lambda_grid.size());
    parallel_for(table.size(), threads, [&](std::size_t k) {
        GridScore& cell = table[k];
        cell.sigma = sigma_grid[k / lambda_grid.size()];
        cell.lambda = lambda_grid[k % lambda_grid.size()];
        KlFitConfig cfg = base;
        cfg.sigma = cell.sigma;
        cfg.lambda = cell.lambda;
        const auto fit = fit_kl(train, cfg, centers);
        const KernelGeometry& geo = fit.model.geometry;
        const double value = kl_objective(fit.model.alpha, feature_matrix(holdout.class0, geo),
                                          feature_matrix(holdout.class1, geo), 0.0, kernel_matrix(geo));
        cell.score = std::isfinite(value) ? -value : std::numeric_limits<double>::infinity();
        if (!std::isfinite(value)) cell.note = "holdout objective overflowed";
    });
    return select_grid_minimum(std::move(table));
}

} // namespace lsprt
