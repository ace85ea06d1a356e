#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>

#include "lsprt/data.hpp"
#include "lsprt/scorer.hpp"

namespace lsprt {

struct ErrorTargets {
    double pf = 0.1;  // false alarm: declare H1 under H0
    double pm = 0.1;  // miss: declare H0 under H1

    void validate() const;
};

// Stop and declare H0 once the accumulated score is <= a, H1 once >= b.
struct Thresholds {
    double a = 0.0;
    double b = 0.0;

    void validate() const;
};

enum class Decision { H0 = 0, H1 = 1 };

struct SprtOutcome {
    Decision decision = Decision::H0;
    std::size_t n_samples = 0;
    double final_stat = 0.0;
    bool truncated = false;
};

// a = log(pm / (1 - pf)), b = log((1 - pm) / pf).
Thresholds thresholds_from_errors(const ErrorTargets& targets);

// pf = (1 - e^a) / (e^b - e^a), pm = e^a (e^b - 1) / (e^b - e^a).
ErrorTargets errors_from_thresholds(const Thresholds& t);

// Accumulates scores from `stream` until a boundary is crossed or n_max
// samples have been consumed. A truncated run declares H1 if the statistic is
// positive and H0 otherwise. Throws RunError on a non-finite score.
SprtOutcome run_sprt(const Scorer& scorer, SampleSource& stream, const Thresholds& t, std::size_t n_max);

struct TheoreticalCost {
    double n0 = 0.0;     // E[N | H0]
    double n1 = 0.0;     // E[N | H1]
    double total = 0.0;  // pi0 n0 + pi1 n1
};

// Zero-overshoot expected sample sizes for divergences d01 = KL(p0||p1) and
// d10 = KL(p1||p0).
TheoreticalCost theoretical_cost(const ErrorTargets& targets, double d01, double d10, double pi0,
                                 double pi1);

struct WaldIdentityReport {
    double mean_exp_lambda_h0 = 0.0;      // E[exp(L_N) | H0]
    double se_exp_lambda_h0 = 0.0;
    double mean_exp_neg_lambda_h1 = 0.0;  // E[exp(-L_N) | H1]
    double se_exp_neg_lambda_h1 = 0.0;
    std::size_t trials = 0;               // per hypothesis
    std::size_t used_h0 = 0;              // non-truncated runs
    std::size_t used_h1 = 0;
    std::size_t truncated_h0 = 0;
    std::size_t truncated_h1 = 0;
};

// Monte Carlo estimate of the optional-stopping identities, over
// non-truncated runs only. Throws RunError when every run under a hypothesis
// truncates.
WaldIdentityReport wald_identity_check(const Scorer& scorer, const SyntheticTask& task,
                                       const Thresholds& t, std::size_t trials, std::size_t n_max,
                                       std::uint64_t seed, unsigned threads = 1);

} // namespace lsprt
