#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsprt/data.hpp"
#include "lsprt/eval.hpp"
#include "lsprt/kernel.hpp"
#include "lsprt/klfit.hpp"
#include "lsprt/scorer.hpp"
#include "lsprt/waldboost.hpp"
#include "lsprt/wkdrf.hpp"

namespace lsprt {

using json = nlohmann::json;

json read_json(const std::filesystem::path& path);
// Pretty-printed, trailing newline. Throws DataError on I/O failure.
void write_json(const json& doc, const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);

// {"h0": {"components": [{"weight", "mean", "covariance"}]}, "h1": {...}}
json to_json(const GaussianMixture& mixture);
GaussianMixture mixture_from_json(const json& doc);
json to_json(const SyntheticTask& task);
SyntheticTask task_from_json(const json& doc);
SyntheticTask load_task(const std::filesystem::path& path);

// {"method", "sigma", "centers": [[...]], "alpha": [...]}
json to_json(const KernelModel& model, const std::string& method);
KernelModel kernel_model_from_json(const json& doc);

// {"prior_log_odds", "dim", "stumps": [{"feature", "threshold", "polarity", "weight"}]}.
// Infinite thresholds are written as the strings "inf" / "-inf".
json to_json(const Ensemble& ensemble);
Ensemble ensemble_from_json(const json& doc);

// Reads either model format and wraps it in the matching scorer.
ScorerHandle load_scorer(const std::filesystem::path& path);

json to_json(const FitDiagnostics& diag);
json to_json(const KlFitDiagnostics& diag);
json to_json(const CrossValidation& cv);
json to_json(const NormalizationReport& report);
json to_json(const HarIngestReport& report);
json to_json(const ClassStats& stats);
json to_json(const EvalSummary& summary);

// trial,true_class,decision,n_samples,final_stat,truncated
std::string outcomes_csv(const TrialRecords& records);

inline constexpr const char* kCurveHeader =
    "scorer,pf_target,pm_target,a,b,pf_emp,pm_emp,err_emp,mean_n,se_n,trunc_frac";

// Header plus one row per operating point of every curve.
std::string curves_csv(const std::vector<PerformanceCurve>& curves);

} // namespace lsprt
