#include "lsprt/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "lsprt/error.hpp"
#include "lsprt/parallel.hpp"

namespace lsprt {

StreamPair mixture_streams(const SyntheticTask& task) {
    StreamPair s;
    s.h0 = [h0 = task.h0](std::uint64_t seed) { return std::make_unique<MixtureStream>(h0, seed); };
    s.h1 = [h1 = task.h1](std::uint64_t seed) { return std::make_unique<MixtureStream>(h1, seed); };
    s.description = "mixture";
    return s;
}

StreamPair resample_streams(const LabeledDataset& data) {
    data.validate();
    auto pool0 = std::make_shared<const std::vector<Sample>>(data.class0);
    auto pool1 = std::make_shared<const std::vector<Sample>>(data.class1);
    StreamPair s;
    s.h0 = [pool0](std::uint64_t seed) { return std::make_unique<ResampleStream>(pool0, seed); };
    s.h1 = [pool1](std::uint64_t seed) { return std::make_unique<ResampleStream>(pool1, seed); };
    s.description = "resample";
    return s;
}

double EvalSummary::se_n() const {
    const double p1 = 1.0 - prior0;
    return std::sqrt(prior0 * prior0 * h0.se_n * h0.se_n + p1 * p1 * h1.se_n * h1.se_n);
}

namespace {

ClassStats class_stats(const std::vector<SprtOutcome>& outcomes, Decision truth) {
    ClassStats s;
    s.trials = outcomes.size();
    if (outcomes.empty()) return s;
    const double n = static_cast<double>(outcomes.size());
    std::vector<double> lengths;
    lengths.reserve(outcomes.size());
    std::uint64_t sum = 0, sum_sq = 0;
    for (const auto& o : outcomes) {
        if (o.decision != truth) ++s.errors;
        if (o.truncated) ++s.truncated;
        lengths.push_back(static_cast<double>(o.n_samples));
        sum += o.n_samples;
        sum_sq += static_cast<std::uint64_t>(o.n_samples) * o.n_samples;
    }
    s.error_rate = static_cast<double>(s.errors) / n;
    s.error_se = std::sqrt(s.error_rate * (1.0 - s.error_rate) / n);
    s.mean_n = static_cast<double>(sum) / n;
    if (outcomes.size() > 1) {
        const long double total = static_cast<long double>(sum);
        const long double ss = static_cast<long double>(sum_sq) - total * total / static_cast<long double>(n);
        s.se_n = std::sqrt(static_cast<double>(std::max(ss, 0.0L)) / (n - 1.0) / n);
    }
    std::sort(lengths.begin(), lengths.end());
    const std::size_t mid = lengths.size() / 2;
    s.median_n = lengths.size() % 2 ? lengths[mid] : 0.5 * (lengths[mid - 1] + lengths[mid]);
    s.trunc_frac = static_cast<double>(s.truncated) / n;
    return s;
}

} // namespace

EvalSummary summarize(const TrialRecords& records, const Thresholds& t, double prior0) {
    EvalSummary s;
    s.thresholds = t;
    s.prior0 = prior0;
    s.h0 = class_stats(records.h0, Decision::H0);
    s.h1 = class_stats(records.h1, Decision::H1);
    return s;
}

EvalSummary monte_carlo(const Scorer& scorer, const StreamPair& streams, const Thresholds& t,
                        const EvalOptions& options, TrialRecords* records) {
    if (options.trials < 1) throw ConfigError("trials must be at least 1");
    if (!(options.prior0 > 0.0 && options.prior0 < 1.0)) throw ConfigError("prior0 must lie in (0,1)");
    t.validate();
    TrialRecords local;
    local.h0.resize(options.trials);
    local.h1.resize(options.trials);
    parallel_for(2 * options.trials, options.threads, [&](std::size_t k) {
        const std::size_t cls = k / options.trials, trial = k % options.trials;
        const auto seed = derive_seed(options.seed, cls, trial);
        auto stream = cls == 0 ? streams.h0(seed) : streams.h1(seed);
        (cls == 0 ? local.h0 : local.h1)[trial] = run_sprt(scorer, *stream, t, options.n_max);
    });
    EvalSummary s = summarize(local, t, options.prior0);
    if (records) *records = std::move(local);
    return s;
}

std::vector<ErrorTargets> symmetric_grid(const std::vector<double>& levels) {
    std::vector<ErrorTargets> g;
    for (double p : levels) g.push_back({p, p});
    return g;
}

std::vector<ErrorTargets> default_target_grid() {
    return symmetric_grid({0.01, 0.02, 0.05, 0.1, 0.15, 0.2});
}

PerformanceCurve sweep(const Scorer& scorer, const StreamPair& streams,
                       const std::vector<ErrorTargets>& grid, const EvalOptions& options) {
    if (grid.empty()) throw ConfigError("target grid must be non-empty");
    std::vector<std::pair<ErrorTargets, Thresholds>> pts;
    for (const auto& g : grid) pts.emplace_back(g, thresholds_from_errors(g));
    std::stable_sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) {
        return (x.second.b - x.second.a) < (y.second.b - y.second.a);
    });
    PerformanceCurve curve;
    curve.scorer = scorer.descriptor();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        EvalOptions opt = options;
        opt.seed = derive_seed(options.seed, k, 7);
        OperatingPoint p{pts[k].first, monte_carlo(scorer, streams, pts[k].second, opt)};
        if (p.summary.h0.trunc_frac > 0.01 || p.summary.h1.trunc_frac > 0.01) curve.truncation_flagged = true;
        curve.points.push_back(std::move(p));
    }
    return curve;
}

std::vector<PerformanceCurve> compare(const std::vector<ScorerHandle>& scorers, const StreamPair& streams,
                                      const std::vector<ErrorTargets>& grid, const EvalOptions& options) {
    if (scorers.empty()) throw ConfigError("compare needs at least one scorer");
    std::vector<PerformanceCurve> curves;
    for (const auto& s : scorers) curves.push_back(sweep(*s, streams, grid, options));
    return curves;
}

DivergenceEstimate estimate_divergences(const Scorer& scorer, const SyntheticTask& task,
                                        std::size_t n_mc, std::uint64_t seed) {
    if (n_mc < 1) throw ConfigError("n_mc must be at least 1");
    auto moments = [&](const std::shared_ptr<const GaussianMixture>& mix, std::uint64_t s, double sign,
                       double& mean, double& se) {
        MixtureStream stream(mix, s);
        double sum = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < n_mc; ++i) {
            const double v = sign * scorer.score(stream.next());
            sum += v;
            sq += v * v;
        }
        const double n = static_cast<double>(n_mc);
        mean = sum / n;
        se = n_mc > 1 ? std::sqrt(std::max(0.0, (sq - n * mean * mean) / (n - 1.0)) / n) : 0.0;
    };
    DivergenceEstimate e;
    moments(task.h0, derive_seed(seed, 0), -1.0, e.d01, e.se01);
    moments(task.h1, derive_seed(seed, 1), 1.0, e.d10, e.se10);
    return e;
}

} // namespace lsprt
