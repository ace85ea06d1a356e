#include "lsprt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "lsprt/error.hpp"

namespace lsprt {

void SolverTolerances::validate() const {
    if (!(grad_norm >= 0.0) || !(rel_objective >= 0.0)) throw ConfigError("solver tolerances must be non-negative");
    if (max_stages < 1 || max_inner < 1 || max_backtracks < 1) throw ConfigError("solver iteration limits must be positive");
    if (!(barrier_decrement > 1.0)) throw ConfigError("barrier decrement factor must exceed 1");
    if (!(initial_mu > 0.0)) throw ConfigError("initial barrier weight must be positive");
    if (!(initial_step > 0.0) || !(step_shrink > 0.0 && step_shrink < 1.0) ||
        !(armijo_slope > 0.0 && armijo_slope < 1.0)) {
        throw ConfigError("invalid line-search parameters");
    }
    if (lbfgs_memory < 1) throw ConfigError("L-BFGS memory must be positive");
}

const char* to_string(StopReason r) {
    switch (r) {
    case StopReason::GradientNorm: return "gradient_norm";
    case StopReason::RelativeObjective: return "relative_objective";
    case StopReason::LineSearchStalled: return "line_search_stalled";
    case StopReason::IterationBudget: return "iteration_budget";
    }
    return "unknown";
}

const char* to_string(SearchDirection d) { return d == SearchDirection::LBfgs ? "lbfgs" : "steepest"; }

namespace {

struct CurvaturePair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho;
};

// Two-loop recursion: approximately -H^{-1} g.
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& g, const std::deque<CurvaturePair>& history) {
    Eigen::VectorXd q = g;
    std::vector<double> a(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
        a[k] = history[k].rho * history[k].s.dot(q);
        q -= a[k] * history[k].y;
    }
    if (!history.empty()) {
        const auto& last = history.back();
        q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
        const double b = history[k].rho * history[k].y.dot(q);
        q += (a[k] - b) * history[k].s;
    }
    return -q;
}

} // namespace

MinimizeReport minimize(const SmoothObjective& f, Eigen::VectorXd& x, const SolverTolerances& tol,
                        int max_iterations, const std::function<void(const Eigen::VectorXd&, double)>& on_accept) {
    MinimizeReport rep;
    Evaluation cur = f(x);
    if (!cur.ok) throw InfeasibleError("minimization started outside the domain");
    rep.value = cur.value;
    if (on_accept) on_accept(x, cur.value);
    std::deque<CurvaturePair> history;

    for (;;) {
        rep.grad_norm = cur.gradient.norm();
        if (rep.grad_norm <= tol.grad_norm) {
            rep.stop = StopReason::GradientNorm;
            return rep;
        }
        if (rep.iterations >= max_iterations) {
            rep.stop = StopReason::IterationBudget;
            return rep;
        }

        Eigen::VectorXd dir = tol.direction == SearchDirection::LBfgs ? lbfgs_direction(cur.gradient, history)
                                                                      : Eigen::VectorXd(-cur.gradient);
        double slope = cur.gradient.dot(dir);
        if (!(slope < 0.0) || !dir.allFinite()) {
            history.clear();
            dir = -cur.gradient;
            slope = -rep.grad_norm * rep.grad_norm;
        }

        double step = tol.initial_step;
        bool accepted = false;
        Eigen::VectorXd cand;
        Evaluation next;
        for (int b = 0; b < tol.max_backtracks; ++b, step *= tol.step_shrink) {
            cand = x + step * dir;
            next = f(cand);
            if (next.ok && next.value <= cur.value + tol.armijo_slope * step * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (!history.empty()) {
                // Retry once from steepest descent before giving up.
                history.clear();
                continue;
            }
            rep.stop = StopReason::LineSearchStalled;
            return rep;
        }

        ++rep.iterations;
        const double prev = cur.value;
        CurvaturePair pair{cand - x, next.gradient - cur.gradient, 0.0};
        const double sy = pair.s.dot(pair.y);
        if (sy > 1e-12 * pair.s.norm() * pair.y.norm()) {
            pair.rho = 1.0 / sy;
            history.push_back(std::move(pair));
            if (static_cast<int>(history.size()) > tol.lbfgs_memory) history.pop_front();
        }
        x = cand;
        cur = std::move(next);
        rep.value = cur.value;
        if (on_accept) on_accept(x, cur.value);
        if (std::abs(prev - cur.value) <= tol.rel_objective * std::max(1.0, std::abs(prev))) {
            rep.grad_norm = cur.gradient.norm();
            rep.stop = rep.grad_norm <= tol.grad_norm ? StopReason::GradientNorm : StopReason::RelativeObjective;
            return rep;
        }
    }
}

} // namespace lsprt
