#include "lsprt/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lsprt/error.hpp"
#include "lsprt/text_util.hpp"

namespace lsprt {

OracleScorer::OracleScorer(std::shared_ptr<const GaussianMixture> h0,
                           std::shared_ptr<const GaussianMixture> h1)
    : h0_(std::move(h0)), h1_(std::move(h1)) {
    if (!h0_ || !h1_) throw ConfigError("oracle scorer needs both class densities");
    if (h0_->dim() != h1_->dim()) throw DimensionMismatch("oracle densities differ in dimension");
}

double OracleScorer::score(const Sample& x) const {
    return h1_->log_density(x) - h0_->log_density(x);
}

KernelScorer::KernelScorer(KernelModel model, std::string method, std::string hyperparameters)
    : model_(std::move(model)), method_(std::move(method)), hyperparameters_(std::move(hyperparameters)) {
    model_.validate();
}

std::string KernelScorer::descriptor() const {
    std::string d = method_ + "(C=" + std::to_string(model_.geometry.num_centers()) +
                    ",sigma=" + format_double(model_.geometry.sigma);
    if (!hyperparameters_.empty()) d += "," + hyperparameters_;
    return d + ")";
}

std::string ConstantScorer::descriptor() const { return "constant(" + format_double(value_) + ")"; }

AffineScorer::AffineScorer(ScorerHandle inner, double factor, double shift)
    : inner_(std::move(inner)), factor_(factor), shift_(shift) {
    if (!inner_) throw ConfigError("affine scorer needs an inner scorer");
}

std::string AffineScorer::descriptor() const {
    return format_double(factor_) + "*" + inner_->descriptor() + "+" + format_double(shift_);
}

ScorerHandle oracle_scorer(const SyntheticTask& task) {
    return std::make_shared<OracleScorer>(task.h0, task.h1);
}

ScorerHandle model_scorer(KernelModel model, std::string method, std::string hyperparameters) {
    return std::make_shared<KernelScorer>(std::move(model), std::move(method), std::move(hyperparameters));
}

namespace {

// log((1/n) sum exp(v_i)) with max-shift.
double log_mean_exp(const std::vector<double>& v) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double x : v) hi = std::max(hi, x);
    if (!std::isfinite(hi)) return hi;
    double acc = 0.0;
    for (double x : v) acc += std::exp(x - hi);
    return hi + std::log(acc / static_cast<double>(v.size()));
}

} // namespace

NormalizationReport normalization_diagnostics(const Scorer& scorer, const LabeledDataset& data) {
    if (data.class0.empty() || data.class1.empty())
        throw ConfigError("normalization diagnostics need samples from both classes");
    std::vector<double> s0, s1;
    s0.reserve(data.class0.size());
    s1.reserve(data.class1.size());
    for (const auto& x : data.class0) s0.push_back(scorer.score(x));
    for (const auto& x : data.class1) s1.push_back(-scorer.score(x));
    NormalizationReport r;
    r.count_h0 = s0.size();
    r.count_h1 = s1.size();
    // exp of a log above ~709.78 overflows to +inf, which is the intended report.
    r.mean_ratio_h0 = std::exp(log_mean_exp(s0));
    r.mean_invratio_h1 = std::exp(log_mean_exp(s1));
    return r;
}

} // namespace lsprt
