#include "lsprt/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lsprt/error.hpp"
#include "lsprt/text_util.hpp"

namespace lsprt {

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw DataError("failed writing '" + path.string() + "'");
}

void write_json(const json& doc, const std::filesystem::path& path) { write_text(doc.dump(2) + "\n", path); }

namespace {

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::VectorXd vec_from(const json& a, const char* what) {
    if (!a.is_array()) throw DataError(std::string(what) + " must be an array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number()) throw DataError(std::string(what) + " must contain only numbers");
        v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    }
    return v;
}

template <class T>
T field(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw DataError(std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw DataError(std::string("field '") + key + "' has the wrong type");
    }
}

json threshold_json(double t) {
    if (std::isinf(t)) return t > 0 ? "inf" : "-inf";
    return t;
}

double threshold_from(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw DataError("stump threshold string must be 'inf' or '-inf'");
    }
    if (!j.is_number()) throw DataError("stump threshold must be a number");
    return j.get<double>();
}

} // namespace

json to_json(const GaussianMixture& mixture) {
    json comps = json::array();
    for (const auto& c : mixture.components()) {
        json cov = json::array();
        for (Eigen::Index i = 0; i < c.covariance.rows(); ++i) cov.push_back(vec_json(c.covariance.row(i).transpose()));
        comps.push_back({{"weight", c.weight}, {"mean", vec_json(c.mean)}, {"covariance", cov}});
    }
    return {{"components", comps}};
}

GaussianMixture mixture_from_json(const json& doc) {
    const auto comps = field<json>(doc, "components");
    if (!comps.is_array() || comps.empty()) throw DataError("'components' must be a non-empty array");
    std::vector<GaussianComponent> out;
    for (const auto& c : comps) {
        GaussianComponent g;
        g.weight = field<double>(c, "weight");
        g.mean = vec_from(field<json>(c, "mean"), "mean");
        const auto cov = field<json>(c, "covariance");
        if (!cov.is_array() || cov.size() != static_cast<std::size_t>(g.mean.size()))
            throw DataError("covariance must be a d x d array");
        g.covariance.resize(g.mean.size(), g.mean.size());
        for (std::size_t i = 0; i < cov.size(); ++i) {
            const auto row = vec_from(cov[i], "covariance row");
            if (row.size() != g.mean.size()) throw DataError("covariance must be a d x d array");
            g.covariance.row(static_cast<Eigen::Index>(i)) = row.transpose();
        }
        out.push_back(std::move(g));
    }
    return GaussianMixture(std::move(out));
}

json to_json(const SyntheticTask& task) { return {{"h0", to_json(*task.h0)}, {"h1", to_json(*task.h1)}}; }

SyntheticTask task_from_json(const json& doc) {
    SyntheticTask t;
    t.h0 = std::make_shared<GaussianMixture>(mixture_from_json(field<json>(doc, "h0")));
    t.h1 = std::make_shared<GaussianMixture>(mixture_from_json(field<json>(doc, "h1")));
    if (t.h0->dim() != t.h1->dim()) throw DimensionMismatch("h0 and h1 mixtures differ in dimension");
    return t;
}

SyntheticTask load_task(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw DataError("synthetic spec file '" + path.string() + "' does not exist");
    return task_from_json(read_json(path));
}

json to_json(const KernelModel& model, const std::string& method) {
    json centers = json::array();
    for (const auto& c : model.geometry.centers) centers.push_back(vec_json(c));
    return {{"method", method}, {"sigma", model.geometry.sigma}, {"centers", centers},
            {"alpha", vec_json(model.alpha)}};
}

KernelModel kernel_model_from_json(const json& doc) {
    KernelModel m;
    m.geometry.sigma = field<double>(doc, "sigma");
    for (const auto& c : field<json>(doc, "centers")) m.geometry.centers.push_back(vec_from(c, "center"));
    m.alpha = vec_from(field<json>(doc, "alpha"), "alpha");
    try {
        m.validate();
    } catch (const ConfigError& e) {
        throw DataError(std::string("invalid kernel model: ") + e.what());
    }
    return m;
}

json to_json(const Ensemble& ensemble) {
    json stumps = json::array();
    for (std::size_t i = 0; i < ensemble.stumps.size(); ++i) {
        const auto& s = ensemble.stumps[i];
        stumps.push_back({{"feature", s.feature}, {"threshold", threshold_json(s.threshold)},
                          {"polarity", s.polarity}, {"weight", ensemble.weights[i]}});
    }
    return {{"method", "waldboost"}, {"prior_log_odds", ensemble.prior_log_odds}, {"dim", ensemble.dim},
            {"stumps", stumps}};
}

Ensemble ensemble_from_json(const json& doc) {
    Ensemble e;
    e.prior_log_odds = field<double>(doc, "prior_log_odds");
    if (doc.contains("dim")) e.dim = field<std::size_t>(doc, "dim");
    for (const auto& s : field<json>(doc, "stumps")) {
        Stump st;
        st.feature = field<std::size_t>(s, "feature");
        st.threshold = threshold_from(field<json>(s, "threshold"));
        st.polarity = field<int>(s, "polarity");
        e.stumps.push_back(st);
        e.weights.push_back(field<double>(s, "weight"));
    }
    try {
        e.validate();
    } catch (const ConfigError& err) {
        throw DataError(std::string("invalid ensemble: ") + err.what());
    }
    return e;
}

ScorerHandle load_scorer(const std::filesystem::path& path) {
    const json doc = read_json(path);
    if (doc.contains("stumps")) return std::make_shared<EnsembleScorer>(ensemble_from_json(doc));
    if (doc.contains("alpha")) {
        const std::string method = doc.value("method", std::string("kernel"));
        std::string hp;
        if (doc.contains("lambda")) hp = "lambda=" + format_double(field<double>(doc, "lambda"));
        return model_scorer(kernel_model_from_json(doc), method, hp);
    }
    throw DataError("'" + path.string() + "' is neither a kernel model nor a boosted ensemble");
}

json to_json(const FitDiagnostics& diag) {
    json stages = json::array();
    for (const auto& s : diag.stages) {
        stages.push_back({{"mu", s.mu}, {"iterations", s.iterations}, {"final_grad_norm", s.final_grad_norm},
                          {"stop", to_string(s.stop)}});
    }
    return {{"objective", diag.objective}, {"init_objective", diag.init_objective},
            {"c0", diag.c0}, {"c1", diag.c1}, {"d01", diag.d01}, {"d10", diag.d10},
            {"omega0", diag.weights.omega0}, {"omega1", diag.weights.omega1},
            {"init_path", to_string(diag.init_path)}, {"converged", diag.converged},
            {"jitter_applied", diag.jitter_applied}, {"stages", stages}};
}

json to_json(const KlFitDiagnostics& diag) {
    return {{"objective", diag.objective}, {"iterations", diag.iterations},
            {"final_grad_norm", diag.final_grad_norm}, {"stop", to_string(diag.stop)},
            {"converged", diag.converged}};
}

json to_json(const CrossValidation& cv) {
    json table = json::array();
    for (const auto& g : cv.table) {
        json row = {{"sigma", g.sigma}, {"lambda", g.lambda}};
        row["score"] = std::isfinite(g.score) ? json(g.score) : json("inf");
        if (!g.note.empty()) row["note"] = g.note;
        table.push_back(row);
    }
    return {{"sigma", cv.sigma}, {"lambda", cv.lambda}, {"table", table}};
}

json to_json(const NormalizationReport& r) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json("inf"); };
    return {{"mean_ratio_h0", num(r.mean_ratio_h0)}, {"mean_invratio_h1", num(r.mean_invratio_h1)},
            {"count_h0", r.count_h0}, {"count_h1", r.count_h1}};
}

json to_json(const HarIngestReport& r) {
    json per = json::object();
    for (std::size_t code = 1; code < r.per_label_counts.size(); ++code)
        per[std::to_string(code)] = r.per_label_counts[code];
    return {{"rows_read", r.rows_read}, {"rows_dropped", r.rows_dropped}, {"per_label_counts", per}};
}

json to_json(const ClassStats& s) {
    return {{"trials", s.trials}, {"errors", s.errors}, {"error_rate", s.error_rate},
            {"error_se", s.error_se}, {"mean_n", s.mean_n}, {"se_n", s.se_n},
            {"median_n", s.median_n}, {"truncated", s.truncated}, {"trunc_frac", s.trunc_frac}};
}

json to_json(const EvalSummary& s) {
    return {{"a", s.thresholds.a}, {"b", s.thresholds.b}, {"prior0", s.prior0},
            {"pf_emp", s.pf()}, {"pf_se", s.h0.error_se}, {"pm_emp", s.pm()}, {"pm_se", s.h1.error_se},
            {"err_emp", s.err()}, {"mean_n", s.mean_n()}, {"se_n", s.se_n()},
            {"trunc_frac", s.trunc_frac()}, {"h0", to_json(s.h0)}, {"h1", to_json(s.h1)}};
}

std::string outcomes_csv(const TrialRecords& records) {
    std::ostringstream out;
    out << "trial,true_class,decision,n_samples,final_stat,truncated\n";
    auto rows = [&](const std::vector<SprtOutcome>& v, int cls) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            out << i << ',' << cls << ',' << static_cast<int>(v[i].decision) << ',' << v[i].n_samples << ','
                << format_double(v[i].final_stat) << ',' << (v[i].truncated ? 1 : 0) << '\n';
        }
    };
    rows(records.h0, 0);
    rows(records.h1, 1);
    return out.str();
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

} // namespace

std::string curves_csv(const std::vector<PerformanceCurve>& curves) {
    std::ostringstream out;
    out << kCurveHeader << '\n';
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            const auto& s = p.summary;
            out << csv_field(c.scorer) << ',' << format_double(p.targets.pf) << ',' << format_double(p.targets.pm)
                << ',' << format_double(s.thresholds.a) << ',' << format_double(s.thresholds.b) << ','
                << format_double(s.pf()) << ',' << format_double(s.pm()) << ',' << format_double(s.err()) << ','
                << format_double(s.mean_n()) << ',' << format_double(s.se_n()) << ','
                << format_double(s.trunc_frac()) << '\n';
        }
    }
    return out.str();
}

} // namespace lsprt
