#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lsprt/data.hpp"
#include "lsprt/scorer.hpp"

namespace lsprt {

// Axis-aligned threshold classifier: +1 when polarity * (x[feature] - threshold) > 0,
// else -1. Thresholds may be +-infinity (constant predictors).
struct Stump {
    std::size_t feature = 0;
    double threshold = 0.0;
    int polarity = 1;

    int predict(const Sample& x) const {
        return polarity * (x(static_cast<Eigen::Index>(feature)) - threshold) > 0.0 ? 1 : -1;
    }
};

struct Ensemble {
    std::vector<Stump> stumps;
    std::vector<double> weights;  // c_i > 0
    double prior_log_odds = 0.0;  // log(pi0 / pi1)
    std::size_t dim = 0;

    void validate() const;
};

inline constexpr double kMinWeightedError = 1e-10;

// c = 1/2 log((1 - eps) / eps) with eps clamped to [1e-10, 1 - 1e-10].
double stump_weight(double weighted_error);

struct AdaBoostConfig {
    std::size_t rounds = 200;
    // log(pi0/pi1) stored in the ensemble; defaults to log(M/N) of the
    // training set, which converts the fitted posterior odds to a density ratio.
    std::optional<double> prior_log_odds;
    std::uint64_t seed = 0;
};

struct AdaBoostTrace {
    std::vector<double> weighted_errors;  // per round, before clamping
    std::vector<double> exp_loss;         // (1/(M+N)) sum exp(-y F(x)) after each round
};

// Discrete AdaBoost over stumps with thresholds at midpoints of consecutive
// distinct sorted values plus +-infinity. Labels: +1 for class 1, -1 for
// class 0. Ties pick the lowest feature index, then the lowest threshold.
Ensemble train_adaboost(const LabeledDataset& train, const AdaBoostConfig& config,
                        AdaBoostTrace* trace = nullptr);

// F_A(x) = sum_i c_i f_i(x).
double ensemble_margin(const Ensemble& ensemble, const Sample& x);

// log r(x) = 2 F_A(x) + prior_log_odds.
double ensemble_score(const Ensemble& ensemble, const Sample& x);

class EnsembleScorer final : public Scorer {
public:
    explicit EnsembleScorer(Ensemble ensemble);
    double score(const Sample& x) const override { return ensemble_score(ensemble_, x); }
    std::string descriptor() const override;
    const Ensemble& ensemble() const { return ensemble_; }

private:
    Ensemble ensemble_;
};

} // namespace lsprt
