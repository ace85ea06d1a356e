#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "lsprt/data.hpp"
#include "lsprt/kernel.hpp"

namespace lsprt {

// Estimate of log(p1(x) / p0(x)). This is the only interface the sequential
// test sees; every training method and the exact oracle implement it.
// Implementations are immutable and safe to call concurrently.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual double score(const Sample& x) const = 0;
    virtual std::string descriptor() const = 0;
};

using ScorerHandle = std::shared_ptr<const Scorer>;

// Exact log p1(x) - log p0(x) from two mixtures.
class OracleScorer final : public Scorer {
public:
    OracleScorer(std::shared_ptr<const GaussianMixture> h0, std::shared_ptr<const GaussianMixture> h1);
    double score(const Sample& x) const override;
    std::string descriptor() const override { return "oracle"; }

private:
    std::shared_ptr<const GaussianMixture> h0_;
    std::shared_ptr<const GaussianMixture> h1_;
};

class KernelScorer final : public Scorer {
public:
    // `method` and `hyperparameters` only feed the descriptor.
    KernelScorer(KernelModel model, std::string method, std::string hyperparameters = {});
    double score(const Sample& x) const override { return log_ratio(model_, x); }
    std::string descriptor() const override;
    const KernelModel& model() const { return model_; }

private:
    KernelModel model_;
    std::string method_;
    std::string hyperparameters_;
};

class ConstantScorer final : public Scorer {
public:
    explicit ConstantScorer(double value) : value_(value) {}
    double score(const Sample&) const override { return value_; }
    std::string descriptor() const override;

private:
    double value_;
};

// factor * inner(x) + shift.
class AffineScorer final : public Scorer {
public:
    AffineScorer(ScorerHandle inner, double factor, double shift = 0.0);
    double score(const Sample& x) const override { return factor_ * inner_->score(x) + shift_; }
    std::string descriptor() const override;

private:
    ScorerHandle inner_;
    double factor_;
    double shift_;
};

ScorerHandle oracle_scorer(const SyntheticTask& task);
ScorerHandle model_scorer(KernelModel model, std::string method = "kernel",
                          std::string hyperparameters = {});

struct NormalizationReport {
    double mean_ratio_h0 = 0.0;     // (1/M) sum exp(score(x0_j))
    double mean_invratio_h1 = 0.0;  // (1/N) sum exp(-score(x1_i))
    std::size_t count_h0 = 0;
    std::size_t count_h1 = 0;
};

// Means are accumulated in log space; an overflowing mean is reported as +inf.
NormalizationReport normalization_diagnostics(const Scorer& scorer, const LabeledDataset& data);

} // namespace lsprt
