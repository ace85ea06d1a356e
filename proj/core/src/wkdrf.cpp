#include "lsprt/wkdrf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <string>

#include "lsprt/error.hpp"
#include "lsprt/parallel.hpp"

namespace lsprt {

const char* to_string(InitPath p) {
    return p == InitPath::Equipartition ? "equipartition" : "subgradient_fallback";
}

namespace {

void check_targets(double pf, double pm) {
    if (!(pf > 0.0 && pf < 0.5) || !(pm > 0.0 && pm < 0.5))
        throw ConfigError("target error rates must lie in (0, 0.5)");
    if (!(pf + pm < 1.0)) throw ConfigError("target error rates must sum to less than 1");
}

} // namespace

void WkdrfConfig::validate() const {
    check_targets(target_pf, target_pm);
    if (!(prior0 > 0.0 && prior0 < 1.0)) throw ConfigError("prior0 must lie in (0,1)");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be non-negative");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
    if (num_centers < 1) throw ConfigError("num_centers must be at least 1");
    solver.validate();
}

CostWeights weights_from_targets(double pf, double pm, double pi0, double pi1) {
    check_targets(pf, pm);
    if (!(pi0 > 0.0) || !(pi1 > 0.0)) throw ConfigError("priors must be positive");
    CostWeights w;
    w.omega0 = pi0 * (pf * std::log(pf / (1.0 - pm)) + (1.0 - pf) * std::log((1.0 - pf) / pm));
    w.omega1 = pi1 * (pm * std::log(pm / (1.0 - pf)) + (1.0 - pm) * std::log((1.0 - pm) / pf));
    return w;
}

BoundProblem BoundProblem::build(const LabeledDataset& train, const KernelGeometry& geometry,
                                 const CostWeights& weights, double lambda) {
    train.validate();
    geometry.validate();
    if (geometry.dim() != train.dim)
        throw DimensionMismatch("kernel centers and training data differ in dimension");
    BoundProblem p;
    p.phi0 = feature_matrix(train.class0, geometry);
    p.phi1 = feature_matrix(train.class1, geometry);
    p.u0 = p.phi0.colwise().mean().transpose();
    p.u1 = p.phi1.colwise().mean().transpose();
    p.gram = kernel_matrix(geometry);
    p.weights = weights;
    p.lambda = lambda;
    return p;
}

Divergences empirical_divergences(const Eigen::VectorXd& alpha, const Eigen::VectorXd& u0,
                                  const Eigen::VectorXd& u1) {
    return {-u0.dot(alpha), u1.dot(alpha)};
}

double bound_objective(const Eigen::VectorXd& alpha, const Eigen::VectorXd& u0,
                       const Eigen::VectorXd& u1, const CostWeights& weights, double lambda,
                       const Eigen::MatrixXd& gram) {
    const auto d = empirical_divergences(alpha, u0, u1);
    if (!(d.d01 > 0.0) || !(d.d10 > 0.0))
        throw DomainError("coefficients outside the open domain (non-positive divergence estimate)");
    return weights.omega0 / d.d01 + weights.omega1 / d.d10 + 0.5 * lambda * alpha.dot(gram * alpha);
}

Eigen::VectorXd bound_gradient(const Eigen::VectorXd& alpha, const Eigen::VectorXd& u0,
                               const Eigen::VectorXd& u1, const CostWeights& weights,
                               double lambda, const Eigen::MatrixXd& gram) {
    const auto d = empirical_divergences(alpha, u0, u1);
    if (!(d.d01 > 0.0) || !(d.d10 > 0.0))
        throw DomainError("coefficients outside the open domain (non-positive divergence estimate)");
    return (weights.omega0 / (d.d01 * d.d01)) * u0 - (weights.omega1 / (d.d10 * d.d10)) * u1 +
           lambda * (gram * alpha);
}

ConstraintValues normalization_constraints(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& phi0,
                                           const Eigen::MatrixXd& phi1) {
    ConstraintValues c;
    c.c0 = (phi0 * alpha).array().exp().mean() - 1.0;
    c.c1 = (-(phi1 * alpha)).array().exp().mean() - 1.0;
    if (std::isnan(c.c0)) c.c0 = std::numeric_limits<double>::infinity();
    if (std::isnan(c.c1)) c.c1 = std::numeric_limits<double>::infinity();
    return c;
}

namespace {

// Which of the four strict conditions fails at alpha, or nullptr.
const char* failed_condition(const Eigen::VectorXd& alpha, const Eigen::VectorXd& u0,
                             const Eigen::VectorXd& u1, const Eigen::MatrixXd& phi0,
                             const Eigen::MatrixXd& phi1) {
    const auto d = empirical_divergences(alpha, u0, u1);
    if (!(d.d01 > 0.0)) return "class-0 divergence estimate -u0.alpha > 0";
    if (!(d.d10 > 0.0)) return "class-1 divergence estimate u1.alpha > 0";
    const auto c = normalization_constraints(alpha, phi0, phi1);
    if (!(c.c0 < 0.0)) return "class-0 normalization c0 < 0";
    if (!(c.c1 < 0.0)) return "class-1 normalization c1 < 0";
    return nullptr;
}

double sign_margin(const Eigen::VectorXd& d, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1) {
    return std::min(-u0.dot(d), u1.dot(d));
}

} // namespace

InitResult init_alpha(const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                      const Eigen::MatrixXd& phi0, const Eigen::MatrixXd& phi1) {
    const double n0 = u0.norm();
    const double n1 = u1.norm();
    if (!(n0 > 0.0) || !(n1 > 0.0))
        throw InfeasibleError("initialization needs non-zero class feature means");

    InitResult out;
    Eigen::VectorXd dir = -u0 / n0 + u1 / n1;
    if (!(sign_margin(dir, u0, u1) > 0.0)) {
        // Maximize min(-u0.d, u1.d) over the unit sphere by projected subgradient ascent.
        out.path = InitPath::SubgradientFallback;
        Eigen::VectorXd d = dir.norm() > 0.0 ? Eigen::VectorXd(dir / dir.norm())
                                             : Eigen::VectorXd((u1 - u0).normalized());
        if (!d.allFinite() || d.norm() == 0.0) d = Eigen::VectorXd::Unit(u0.size(), 0);
        Eigen::VectorXd best = d;
        double best_margin = sign_margin(d, u0, u1);
        const double scale = std::max(n0, n1);
        for (int k = 0; k < 200; ++k) {
            const bool zero_side = -u0.dot(d) <= u1.dot(d);
            const Eigen::VectorXd g = zero_side ? Eigen::VectorXd(-u0) : Eigen::VectorXd(u1);
            d += (1.0 / (scale * std::sqrt(k + 1.0))) * g;
            const double nd = d.norm();
            if (!(nd > 0.0)) break;
            d /= nd;
            const double m = sign_margin(d, u0, u1);
            if (m > best_margin) {
                best_margin = m;
                best = d;
            }
        }
        if (!(best_margin > 0.0)) {
            const bool d01_fails = -u0.dot(best) <= u1.dot(best);
            throw InfeasibleError(std::string("no coefficient direction separates the classes: ") +
                                  (d01_fails ? "class-0 divergence estimate -u0.alpha > 0"
                                             : "class-1 divergence estimate u1.alpha > 0") +
                                  " cannot be satisfied together with the other sign condition");
        }
        dir = best;
    }

    double t = 1.0;
    const char* failing = nullptr;
    for (int h = 0; h <= 200; ++h, t *= 0.5) {
        const Eigen::VectorXd alpha = t * dir;
        failing = failed_condition(alpha, u0, u1, phi0, phi1);
        if (!failing) {
            out.alpha = alpha;
            out.halvings = h;
            return out;
        }
    }
    throw InfeasibleError(std::string("no strictly feasible start along the initial direction: ") + failing);
}

namespace {

// Barrier subproblem objective(alpha) - mu (log(-c0) + log(-c1)) on the
// strictly feasible region.
class BarrierObjective {
public:
    explicit BarrierObjective(BoundProblem& problem) : p_(problem) {}

    void set_mu(double mu) { mu_ = mu; }

    Evaluation operator()(const Eigen::VectorXd& alpha) {
        Evaluation ev;
        const auto d = empirical_divergences(alpha, p_.u0, p_.u1);
        if (!(d.d01 > 0.0) || !(d.d10 > 0.0)) return ev;
        const Eigen::ArrayXd e0 = (p_.phi0 * alpha).array().exp();
        const Eigen::ArrayXd e1 = (-(p_.phi1 * alpha)).array().exp();
        const double c0 = e0.mean() - 1.0;
        const double c1 = e1.mean() - 1.0;
        if (!(c0 < 0.0) || !(c1 < 0.0)) return ev;
        Eigen::VectorXd k_alpha = p_.gram * alpha;
        double quad = alpha.dot(k_alpha);
        if (quad < 0.0 && !jitter_) {
            p_.gram.diagonal().array() += 1e-10;
            jitter_ = true;
            k_alpha = p_.gram * alpha;
            quad = alpha.dot(k_alpha);
        }
        const double objective =
            p_.weights.omega0 / d.d01 + p_.weights.omega1 / d.d10 + 0.5 * p_.lambda * quad;
        ev.value = objective - mu_ * (std::log(-c0) + std::log(-c1));
        if (!std::isfinite(ev.value)) return ev;

        const Eigen::VectorXd grad_c0 = p_.phi0.transpose() * e0.matrix() / static_cast<double>(p_.phi0.rows());
        const Eigen::VectorXd grad_c1 = -(p_.phi1.transpose() * e1.matrix()) / static_cast<double>(p_.phi1.rows());
        ev.gradient = (p_.weights.omega0 / (d.d01 * d.d01)) * p_.u0 -
                      (p_.weights.omega1 / (d.d10 * d.d10)) * p_.u1 + p_.lambda * k_alpha -
                      mu_ * (grad_c0 / c0 + grad_c1 / c1);
        ev.ok = ev.gradient.allFinite();
        return ev;
    }

    bool jitter_applied() const { return jitter_; }

private:
    BoundProblem& p_;
    double mu_ = 1.0;
    bool jitter_ = false;
};

} // namespace

WkdrfFit fit_wkdrf(const LabeledDataset& train, const WkdrfConfig& config) {
    config.validate();
    train.validate();
    return fit_wkdrf(train, config, pick_centers(train, config.num_centers, config.seed));
}

WkdrfFit fit_wkdrf(const LabeledDataset& train, const WkdrfConfig& config, std::vector<Sample> centers) {
    config.validate();
    KernelGeometry geometry{std::move(centers), config.sigma};
    const CostWeights weights =
        weights_from_targets(config.target_pf, config.target_pm, config.prior0, config.prior1());
    BoundProblem problem = BoundProblem::build(train, geometry, weights, config.lambda);

    const InitResult init = init_alpha(problem.u0, problem.u1, problem.phi0, problem.phi1);
    Eigen::VectorXd alpha = init.alpha;

    WkdrfFit fit;
    auto& diag = fit.diagnostics;
    diag.weights = weights;
    diag.init_path = init.path;
    diag.init_objective = bound_objective(alpha, problem.u0, problem.u1, weights, config.lambda, problem.gram);

    BarrierObjective barrier(problem);
    const SmoothObjective f = [&barrier](const Eigen::VectorXd& a) { return barrier(a); };
    double mu = config.solver.initial_mu;
    for (int stage = 0; stage < config.solver.max_stages; ++stage) {
        barrier.set_mu(mu);
        std::function<void(const Eigen::VectorXd&, double)> on_accept;
        if (config.record_trace) {
            on_accept = [&](const Eigen::VectorXd& a, double value) {
                const auto c = normalization_constraints(a, problem.phi0, problem.phi1);
                const auto d = empirical_divergences(a, problem.u0, problem.u1);
                diag.trace.push_back({stage, mu, value,
                                      bound_objective(a, problem.u0, problem.u1, weights, config.lambda, problem.gram),
                                      c.c0, c.c1, d.d01, d.d10});
            };
        }
        const MinimizeReport rep = minimize(f, alpha, config.solver, config.solver.max_inner, on_accept);
        diag.stages.push_back({mu, rep.iterations, rep.grad_norm, rep.stop});
        mu /= config.solver.barrier_decrement;
    }

    // Intermediate stages only warm-start the next one; convergence is judged on the last.
    const StopReason last = diag.stages.back().stop;
    diag.converged = last == StopReason::GradientNorm || last == StopReason::RelativeObjective;
    diag.jitter_applied = barrier.jitter_applied();
    diag.objective = bound_objective(alpha, problem.u0, problem.u1, weights, config.lambda, problem.gram);
    const auto c = normalization_constraints(alpha, problem.phi0, problem.phi1);
    diag.c0 = c.c0;
    diag.c1 = c.c1;
    const auto d = empirical_divergences(alpha, problem.u0, problem.u1);
    diag.d01 = d.d01;
    diag.d10 = d.d10;

    fit.model.geometry = std::move(geometry);
    fit.model.alpha = std::move(alpha);
    return fit;
}

double holdout_bound(const KernelModel& model, const LabeledDataset& data, const CostWeights& weights) {
    double s0 = 0.0, s1 = 0.0;
    for (const auto& x : data.class0) s0 += log_ratio(model, x);
    for (const auto& x : data.class1) s1 += log_ratio(model, x);
    const double d01 = -s0 / static_cast<double>(data.class0.size());
    const double d10 = s1 / static_cast<double>(data.class1.size());
    if (!(d01 > 0.0) || !(d10 > 0.0)) return std::numeric_limits<double>::infinity();
    return weights.omega0 / d01 + weights.omega1 / d10;
}

CrossValidation cross_validate_wkdrf(const LabeledDataset& data, const std::vector<double>& sigma_grid,
                                     const std::vector<double>& lambda_grid, double holdout_fraction,
                                     std::uint64_t seed, const WkdrfConfig& base, unsigned threads) {
    if (sigma_grid.empty() || lambda_grid.empty()) throw ConfigError("cross-validation grids must be non-empty");
    const auto [train, holdout] = split(data, holdout_fraction, seed);
    const CostWeights weights =
        weights_from_targets(base.target_pf, base.target_pm, base.prior0, base.prior1());
    const auto centers = pick_centers(train, base.num_centers, base.seed);

    std::vector<GridScore> table(sigma_grid.size() * lambda_grid.size());
    parallel_for(table.size(), threads, [&](std::size_t k) {
        GridScore& cell = table[k];
        cell.sigma = sigma_grid[k / lambda_grid.size()];
        cell.lambda = lambda_grid[k % lambda_grid.size()];
        WkdrfConfig cfg = base;
        cfg.sigma = cell.sigma;
        cfg.lambda = cell.lambda;
        cfg.record_trace = false;
        try {
            const auto fit = fit_wkdrf(train, cfg, centers);
            cell.score = holdout_bound(fit.model, holdout, weights);
            if (!std::isfinite(cell.score)) cell.note = "non-positive holdout divergence";
        } catch (const InfeasibleError& e) {
            cell.note = e.what();
        } catch (const DomainError& e) {
            cell.note = e.what();
        }
    });
    return select_grid_minimum(std::move(table));
}

CrossValidation select_grid_minimum(std::vector<GridScore> table) {
    const GridScore* best = nullptr;
    for (const auto& cell : table) {
        if (!std::isfinite(cell.score)) continue;
        if (!best || cell.score < best->score ||
            (cell.score == best->score &&
             (cell.sigma < best->sigma || (cell.sigma == best->sigma && cell.lambda < best->lambda)))) {
            best = &cell;
        }
    }
    if (!best) throw InfeasibleError("every cross-validation grid point failed to produce a finite score");
    CrossValidation cv;
    cv.sigma = best->sigma;
    cv.lambda = best->lambda;
    cv.table = std::move(table);
    return cv;
}

} // namespace lsprt
