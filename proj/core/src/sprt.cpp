#include "lsprt/sprt.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "lsprt/error.hpp"
#include "lsprt/parallel.hpp"
#include "lsprt/text_util.hpp"

namespace lsprt {

void ErrorTargets::validate() const {
    if (!(pf > 0.0 && pf < 0.5) || !(pm > 0.0 && pm < 0.5))
        throw ConfigError("target error rates must lie in (0, 0.5)");
    if (!(pf + pm < 1.0)) throw ConfigError("target error rates must sum to less than 1");
}

void Thresholds::validate() const {
    if (!(a < 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw ConfigError("thresholds must satisfy a < 0 < b (got a=" + format_double(a) +
                          ", b=" + format_double(b) + ")");
}

Thresholds thresholds_from_errors(const ErrorTargets& targets) {
    targets.validate();
    return {std::log(targets.pm / (1.0 - targets.pf)), std::log((1.0 - targets.pm) / targets.pf)};
}

ErrorTargets errors_from_thresholds(const Thresholds& t) {
    t.validate();
    const double ea = std::exp(t.a);
    const double eb = std::exp(t.b);
    const double denom = eb - ea;
    // (1 - e^a) with expm1 keeps precision for small |a|.
    return {-std::expm1(t.a) / denom, ea * std::expm1(t.b) / denom};
}

SprtOutcome run_sprt(const Scorer& scorer, SampleSource& stream, const Thresholds& t, std::size_t n_max) {
    if (n_max < 1) throw ConfigError("n_max must be at least 1");
    if (!(t.a < t.b)) throw ConfigError("lower threshold must be below the upper threshold");
    SprtOutcome out;
    double stat = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double z = scorer.score(stream.next());
        if (!std::isfinite(z)) {
            throw RunError(scorer.descriptor() + " returned a non-finite score at sample " + std::to_string(n));
        }
        stat += z;
        if (stat <= t.a || stat >= t.b) {
            out.decision = stat >= t.b ? Decision::H1 : Decision::H0;
            out.n_samples = n;
            out.final_stat = stat;
            return out;
        }
    }
    out.decision = stat > 0.0 ? Decision::H1 : Decision::H0;
    out.n_samples = n_max;
    out.final_stat = stat;
    out.truncated = true;
    return out;
}

TheoreticalCost theoretical_cost(const ErrorTargets& targets, double d01, double d10, double pi0,
                                 double pi1) {
    targets.validate();
    if (!(d01 > 0.0) || !(d10 > 0.0)) throw DomainError("divergences must be positive");
    if (!(pi0 > 0.0) || !(pi1 > 0.0)) throw ConfigError("priors must be positive");
    const double pf = targets.pf, pm = targets.pm;
    const double bracket0 = pf * std::log(pf / (1.0 - pm)) + (1.0 - pf) * std::log((1.0 - pf) / pm);
    const double bracket1 = pm * std::log(pm / (1.0 - pf)) + (1.0 - pm) * std::log((1.0 - pm) / pf);
    TheoreticalCost c;
    c.n0 = bracket0 / d01;
    c.n1 = bracket1 / d10;
    c.total = pi0 * c.n0 + pi1 * c.n1;
    return c;
}

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t count = 0;
};

MeanSe mean_se(const std::vector<double>& v) {
    MeanSe r;
    r.count = v.size();
    if (v.empty()) return r;
    double s = 0.0;
    for (double x : v) s += x;
    r.mean = s / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - r.mean) * (x - r.mean);
        r.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
    return r;
}

} // namespace

WaldIdentityReport wald_identity_check(const Scorer& scorer, const SyntheticTask& task,
                                       const Thresholds& t, std::size_t trials, std::size_t n_max,
                                       std::uint64_t seed, unsigned threads) {
    if (trials < 1) throw ConfigError("trials must be at least 1");
    std::vector<SprtOutcome> out0(trials), out1(trials);
    parallel_for(2 * trials, threads, [&](std::size_t k) {
        const std::size_t cls = k / trials, trial = k % trials;
        MixtureStream stream(cls == 0 ? task.h0 : task.h1, derive_seed(seed, cls, trial));
        (cls == 0 ? out0 : out1)[trial] = run_sprt(scorer, stream, t, n_max);
    });

    WaldIdentityReport r;
    r.trials = trials;
    std::vector<double> v0, v1;
    for (const auto& o : out0) {
        if (o.truncated) ++r.truncated_h0;
        else v0.push_back(std::exp(o.final_stat));
    }
    for (const auto& o : out1) {
        if (o.truncated) ++r.truncated_h1;
        else v1.push_back(std::exp(-o.final_stat));
    }
    if (v0.empty() || v1.empty())
        throw RunError("every sequential run under " + std::string(v0.empty() ? "H0" : "H1") +
                       " was truncated; the identity cannot be estimated");
    const auto m0 = mean_se(v0), m1 = mean_se(v1);
    r.mean_exp_lambda_h0 = m0.mean;
    r.se_exp_lambda_h0 = m0.se;
    r.used_h0 = m0.count;
    r.mean_exp_neg_lambda_h1 = m1.mean;
    r.se_exp_neg_lambda_h1 = m1.se;
    r.used_h1 = m1.count;
    return r;
}

} // namespace lsprt
