#include "lsprt/waldboost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lsprt/error.hpp"
#include "lsprt/text_util.hpp"

namespace lsprt {

void Ensemble::validate() const {
    if (stumps.size() != weights.size()) throw ConfigError("ensemble stump and weight counts differ");
    if (stumps.empty()) throw ConfigError("ensemble has no stumps");
    if (!std::isfinite(prior_log_odds)) throw ConfigError("ensemble prior log-odds must be finite");
    for (std::size_t i = 0; i < stumps.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw ConfigError("ensemble weight " + std::to_string(i) + " must be finite and positive");
        if (dim != 0 && stumps[i].feature >= dim)
            throw ConfigError("stump " + std::to_string(i) + " uses feature outside the dimension");
        if (stumps[i].polarity != 1 && stumps[i].polarity != -1)
            throw ConfigError("stump polarity must be +1 or -1");
        if (std::isnan(stumps[i].threshold)) throw ConfigError("stump threshold is NaN");
    }
}

double stump_weight(double weighted_error) {
    const double eps = std::clamp(weighted_error, kMinWeightedError, 1.0 - kMinWeightedError);
    return 0.5 * std::log((1.0 - eps) / eps);
}

namespace {

struct Candidate {
    double error = std::numeric_limits<double>::infinity();
    Stump stump;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.error != b.error) return a.error < b.error;
    if (a.stump.feature != b.stump.feature) return a.stump.feature < b.stump.feature;
    return a.stump.threshold < b.stump.threshold;
}

} // namespace

Ensemble train_adaboost(const LabeledDataset& train, const AdaBoostConfig& config, AdaBoostTrace* trace) {
    train.validate();
    if (config.rounds < 1) throw ConfigError("boosting needs at least one round");

    const std::size_t m = train.class0.size();
    const std::size_t n = m + train.class1.size();
    const std::size_t d = train.dim;
    std::vector<const Sample*> xs(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = i < m ? &train.class0[i] : &train.class1[i - m];
        y[i] = i < m ? -1 : 1;
    }

    // Per-feature ascending order, computed once.
    std::vector<std::vector<std::size_t>> order(d);
    for (std::size_t f = 0; f < d; ++f) {
        auto& o = order[f];
        o.resize(n);
        std::iota(o.begin(), o.end(), std::size_t{0});
        const auto fi = static_cast<Eigen::Index>(f);
        std::stable_sort(o.begin(), o.end(),
                         [&](std::size_t a, std::size_t b) { return (*xs[a])(fi) < (*xs[b])(fi); });
    }

    Ensemble ens;
    ens.dim = d;
    ens.prior_log_odds = config.prior_log_odds.value_or(
        std::log(static_cast<double>(m) / static_cast<double>(n - m)));
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<double> margin(n, 0.0);

    for (std::size_t round = 0; round < config.rounds; ++round) {
        // Weighted error of "predict +1 above threshold" for threshold t is the
        // weight of positives at or below t plus negatives above t.
        double total_neg = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (y[i] < 0) total_neg += w[i];

        Candidate best;
        for (std::size_t f = 0; f < d; ++f) {
            const auto fi = static_cast<Eigen::Index>(f);
            const auto& o = order[f];
            auto consider = [&](double threshold, double err_pos) {
                Candidate c;
                const double err_neg = 1.0 - err_pos;
                c.stump = Stump{f, threshold, err_pos <= err_neg ? 1 : -1};
                c.error = std::min(err_pos, err_neg);
                if (better(c, best)) best = c;
            };
            double err = total_neg;  // threshold -inf: everything predicted +1
            consider(-std::numeric_limits<double>::infinity(), err);
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t i = o[k];
                err += y[i] > 0 ? w[i] : -w[i];
                const double v = (*xs[i])(fi);
                if (k + 1 < n) {
                    const double next = (*xs[o[k + 1]])(fi);
                    if (next == v) continue;
                    consider(v + 0.5 * (next - v), err);
                }
            }
            consider(std::numeric_limits<double>::infinity(), err);
        }

        const double c = stump_weight(best.error);
        if (!(c > 0.0)) {
            // No stump beats chance under the current weights; later rounds would repeat this.
            if (ens.stumps.empty()) throw DataError("no decision stump separates the classes better than chance");
            break;
        }
        if (trace) trace->weighted_errors.push_back(best.error);
        ens.stumps.push_back(best.stump);
        ens.weights.push_back(c);

        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const int h = best.stump.predict(*xs[i]);
            margin[i] += c * h;
            w[i] *= std::exp(-c * y[i] * h);
            z += w[i];
        }
        for (auto& wi : w) wi /= z;

        if (trace) {
            double loss = 0.0;
            for (std::size_t i = 0; i < n; ++i) loss += std::exp(-y[i] * margin[i]);
            trace->exp_loss.push_back(loss / static_cast<double>(n));
        }
    }
    return ens;
}

double ensemble_margin(const Ensemble& ensemble, const Sample& x) {
    if (ensemble.dim != 0 && static_cast<std::size_t>(x.size()) != ensemble.dim) {
        throw DimensionMismatch("sample of length " + std::to_string(x.size()) +
                                " scored by an ensemble of dimension " + std::to_string(ensemble.dim));
    }
    double f = 0.0;
    for (std::size_t i = 0; i < ensemble.stumps.size(); ++i) {
        if (ensemble.stumps[i].feature >= static_cast<std::size_t>(x.size()))
            throw DimensionMismatch("stump feature index exceeds sample length");
        f += ensemble.weights[i] * ensemble.stumps[i].predict(x);
    }
    return f;
}

double ensemble_score(const Ensemble& ensemble, const Sample& x) {
    return 2.0 * ensemble_margin(ensemble, x) + ensemble.prior_log_odds;
}

EnsembleScorer::EnsembleScorer(Ensemble ensemble) : ensemble_(std::move(ensemble)) { ensemble_.validate(); }

std::string EnsembleScorer::descriptor() const {
    return "waldboost(stumps=" + std::to_string(ensemble_.stumps.size()) +
           ",prior_log_odds=" + format_double(ensemble_.prior_log_odds) + ")";
}

} // namespace lsprt
