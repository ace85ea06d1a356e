#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lsprt/data.hpp"
#include "lsprt/scorer.hpp"
#include "lsprt/sprt.hpp"

namespace lsprt {

using StreamFactory = std::function<std::unique_ptr<SampleSource>(std::uint64_t seed)>;

// Class-conditional sample sources. Trial k under hypothesis c always draws
// from a stream seeded by derive_seed(seed, c, k), so every scorer evaluated
// with the same seed sees the same per-trial sequences.
struct StreamPair {
    StreamFactory h0;
    StreamFactory h1;
    std::string description;
};

StreamPair mixture_streams(const SyntheticTask& task);

// Resamples rows with replacement from each class of the dataset.
StreamPair resample_streams(const LabeledDataset& data);

struct EvalOptions {
    std::size_t trials = 1000;  // per hypothesis
    std::size_t n_max = 10000;
    std::uint64_t seed = 0;
    double prior0 = 0.5;
    unsigned threads = 1;
};

struct ClassStats {
    std::size_t trials = 0;
    std::size_t errors = 0;     // wrong decisions (including truncated runs)
    std::size_t truncated = 0;
    double error_rate = 0.0;
    double error_se = 0.0;      // sqrt(p (1 - p) / n)
    double mean_n = 0.0;
    double se_n = 0.0;          // sample sd / sqrt(n)
    double median_n = 0.0;
    double trunc_frac = 0.0;
};

struct EvalSummary {
    Thresholds thresholds;
    ClassStats h0;  // error_rate is the empirical false-alarm rate
    ClassStats h1;  // error_rate is the empirical miss rate
    double prior0 = 0.5;

    double pf() const { return h0.error_rate; }
    double pm() const { return h1.error_rate; }
    double err() const { return prior0 * h0.error_rate + (1.0 - prior0) * h1.error_rate; }
    double mean_n() const { return prior0 * h0.mean_n + (1.0 - prior0) * h1.mean_n; }
    double se_n() const;
    double trunc_frac() const { return 0.5 * (h0.trunc_frac + h1.trunc_frac); }
};

struct TrialRecords {
    std::vector<SprtOutcome> h0;
    std::vector<SprtOutcome> h1;
};

// `trials` independent runs under each hypothesis. Results do not depend on
// options.threads.
EvalSummary monte_carlo(const Scorer& scorer, const StreamPair& streams, const Thresholds& t,
                        const EvalOptions& options, TrialRecords* records = nullptr);

// Summary statistics of recorded outcomes (the reduction monte_carlo uses).
EvalSummary summarize(const TrialRecords& records, const Thresholds& t, double prior0);

struct OperatingPoint {
    ErrorTargets targets;
    EvalSummary summary;
};

struct PerformanceCurve {
    std::string scorer;
    std::vector<OperatingPoint> points;  // ascending threshold width b - a
    bool truncation_flagged = false;     // some point truncates more than 1% of runs
};

// pf = pm in {0.01, 0.02, 0.05, 0.1, 0.15, 0.2}.
std::vector<ErrorTargets> default_target_grid();

std::vector<ErrorTargets> symmetric_grid(const std::vector<double>& levels);

// One monte_carlo per grid point; point k (after ordering) uses the seed
// derive_seed(options.seed, k, 7).
PerformanceCurve sweep(const Scorer& scorer, const StreamPair& streams,
                       const std::vector<ErrorTargets>& grid, const EvalOptions& options);

// Sweeps every scorer with identical options, so all of them replay the same
// per-trial sample sequences.
std::vector<PerformanceCurve> compare(const std::vector<ScorerHandle>& scorers, const StreamPair& streams,
                                      const std::vector<ErrorTargets>& grid, const EvalOptions& options);

struct DivergenceEstimate {
    double d01 = 0.0;  // -mean score under H0
    double se01 = 0.0;
    double d10 = 0.0;  // mean score under H1
    double se10 = 0.0;
};

DivergenceEstimate estimate_divergences(const Scorer& scorer, const SyntheticTask& task,
                                        std::size_t n_mc, std::uint64_t seed);

} // namespace lsprt
