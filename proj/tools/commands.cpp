#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <lsprt/lsprt.hpp>
#include <lsprt/text_util.hpp>

#include "run_config.hpp"

namespace lsprt::cli {
namespace {

namespace fs = std::filesystem;

void log(const std::string& command, const std::string& message) {
    std::cerr << "lsprt " << command << ": " << message << "\n";
}

fs::path prepare_out_dir(const std::string& out_dir) {
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory '" + out_dir + "': " + ec.message());
    return dir;
}

void require_file(const std::string& path, const std::string& what) {
    if (!fs::is_regular_file(path)) throw DataError(what + " '" + path + "' does not exist");
}

// Centers CSV: header f1,...,fd then one center per row.
void save_centers_csv(const std::vector<Sample>& centers, const fs::path& path) {
    std::ostringstream out;
    const auto d = centers.empty() ? 0 : centers.front().size();
    for (Eigen::Index j = 0; j < d; ++j) out << (j ? "," : "") << "f" << (j + 1);
    out << "\n";
    for (const auto& c : centers) {
        for (Eigen::Index j = 0; j < c.size(); ++j) out << (j ? "," : "") << format_double(c(j));
        out << "\n";
    }
    write_text(out.str(), path);
}

std::vector<Sample> load_centers_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open centers file '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("centers file '" + path.string() + "' is empty");
    const auto cols = parse_string_list(line).size();
    std::vector<Sample> centers;
    for (std::size_t row = 2; std::getline(in, line); ++row) {
        if (line.empty()) continue;
        const auto items = parse_string_list(line);
        if (items.size() != cols)
            throw DataError(path.string() + " row " + std::to_string(row) + ": expected " + std::to_string(cols) +
                            " values, found " + std::to_string(items.size()));
        Sample c(static_cast<Eigen::Index>(cols));
        for (std::size_t j = 0; j < cols; ++j) {
            const auto v = parse_double(items[j]);
            if (!v)
                throw DataError(path.string() + " row " + std::to_string(row) + " column " + std::to_string(j + 1) +
                                ": '" + items[j] + "' is not a number");
            c(static_cast<Eigen::Index>(j)) = *v;
        }
        centers.push_back(std::move(c));
    }
    if (centers.empty()) throw DataError("centers file '" + path.string() + "' has no rows");
    return centers;
}

SearchDirection parse_direction(const std::string& s) {
    if (s == "lbfgs") return SearchDirection::LBfgs;
    if (s == "steepest") return SearchDirection::Steepest;
    throw ConfigError("--direction must be lbfgs or steepest, got '" + s + "'");
}

class CommandBase : public Command {
public:
    CommandBase(CLI::App& root, const std::string& name, const std::string& help)
        : app_(root.add_subcommand(name, help)), opts_(app_), name_(name) {}

    CLI::App* app() const override { return app_; }

protected:
    void add_common() {
        opts_.add("seed", seed_, "Root seed for every random choice of the run");
        opts_.add("out-dir", out_dir_, "Output directory");
        opts_.exclude_from_record("out-dir");
    }
    void add_threads() {
        opts_.add("threads", threads_, "Worker threads (results do not depend on it)");
        opts_.exclude_from_record("threads");
    }

    CLI::App* app_;
    OptionSet opts_;
    std::string name_;
    std::uint64_t seed_ = 0;
    std::string out_dir_;
    unsigned threads_ = 1;
};

// ---------------------------------------------------------------- synth

class SynthCommand final : public CommandBase {
public:
    explicit SynthCommand(CLI::App& root)
        : CommandBase(root, "synth", "Draw a labeled dataset from a Gaussian-mixture task file") {
        opts_.add("spec", spec_, "Task JSON with h0 and h1 mixtures");
        opts_.add("n", n_, "Samples per class");
        opts_.add("n0", n0_, "Class-0 samples (overrides n when > 0)");
        opts_.add("n1", n1_, "Class-1 samples (overrides n when > 0)");
        add_common();
    }

    void run() override {
        opts_.finalize({"spec", "seed", "out-dir"});
        require_file(spec_, "synthetic spec file");
        const auto task = load_task(spec_);
        const std::size_t m = n0_ > 0 ? n0_ : n_;
        const std::size_t k = n1_ > 0 ? n1_ : n_;
        if (m == 0 || k == 0) throw ConfigError("synth: sample counts must be positive");
        const auto data = gen_labeled(task, m, k, seed_);
        const auto dir = prepare_out_dir(out_dir_);
        save_dataset_csv(data, dir / "dataset.csv");
        write_run_record(dir, name_, opts_, {{"spec", to_json(task)}}, {"dataset.csv"});
        log(name_, std::to_string(m) + "+" + std::to_string(k) + " samples written to " +
                       (dir / "dataset.csv").string());
    }

private:
    std::string spec_;
    std::size_t n_ = 2000;
    std::size_t n0_ = 0;
    std::size_t n1_ = 0;
};

// ---------------------------------------------------------------- har-prepare

class HarPrepareCommand final : public CommandBase {
public:
    explicit HarPrepareCommand(CLI::App& root)
        : CommandBase(root, "har-prepare", "Extract a binary task from the UCI HAR feature files") {
        opts_.add("har-dir", har_dir_, "UCI HAR Dataset root (contains train/ and test/)");
        opts_.add("split", split_, "train or test");
        opts_.add("features-file", features_file_, "Feature matrix path (overrides har-dir)");
        opts_.add("labels-file", labels_file_, "Activity label path (overrides har-dir)");
        opts_.add("task", task_, "moving (walking/up/down vs static) or updown (upstairs vs downstairs)");
        opts_.add("features", features_, "Comma-separated 1-based feature columns");
        add_common();
    }

    void run() override {
        opts_.finalize({"seed", "out-dir"});
        if (split_ != "train" && split_ != "test") throw ConfigError("--split must be train or test");
        std::string xs = features_file_;
        std::string ys = labels_file_;
        if (xs.empty() || ys.empty()) {
            if (har_dir_.empty()) throw ConfigError("har-prepare: give --har-dir or both --features-file and --labels-file");
            const fs::path base = fs::path(har_dir_) / split_;
            if (xs.empty()) xs = (base / ("X_" + split_ + ".txt")).string();
            if (ys.empty()) ys = (base / ("y_" + split_ + ".txt")).string();
        }
        require_file(xs, "feature file");
        require_file(ys, "label file");
        const auto cols = parse_int_list(features_, "features");
        HarTask task;
        if (task_ == "moving") task = har_moving_task(cols);
        else if (task_ == "updown") task = har_updown_task(cols);
        else throw ConfigError("--task must be moving or updown, got '" + task_ + "'");

        HarIngestReport report;
        const auto data = load_har(xs, ys, task, &report);
        const auto dir = prepare_out_dir(out_dir_);
        save_dataset_csv(data, dir / "dataset.csv");
        json ingest = to_json(report);
        ingest["task"] = task_;
        ingest["class0_size"] = data.class0.size();
        ingest["class1_size"] = data.class1.size();
        write_json(ingest, dir / "ingest.json");
        write_run_record(dir, name_, opts_, json::object(), {"dataset.csv", "ingest.json"});
        log(name_, task_ + ": class1 " + std::to_string(data.class1.size()) + ", class0 " +
                       std::to_string(data.class0.size()) + " rows");
    }

private:
    std::string har_dir_;
    std::string split_ = "train";
    std::string features_file_;
    std::string labels_file_;
    std::string task_ = "moving";
    std::string features_ = "1,2,3";
};

// ---------------------------------------------------------------- train

class TrainCommand final : public CommandBase {
public:
    explicit TrainCommand(CLI::App& root)
        : CommandBase(root, "train", "Fit a log-ratio scorer: wkdrf, klfit or waldboost") {
        opts_.add("data", data_, "Dataset CSV (class,f1,...,fd)");
        opts_.add("method", method_, "wkdrf, klfit or waldboost");
        opts_.add("sigma", sigma_, "Kernel bandwidth");
        opts_.add("lambda", lambda_, "RKHS penalty");
        opts_.add("centers", centers_, "Number of kernel centers");
        opts_.add("centers-file", centers_file_, "CSV of explicit kernel centers (f1,...,fd)");
        opts_.add("sigma-grid", sigma_grid_, "Comma-separated bandwidths for cross-validation");
        opts_.add("lambda-grid", lambda_grid_, "Comma-separated penalties for cross-validation");
        opts_.add("holdout", holdout_, "Holdout fraction for cross-validation");
        opts_.add("pf", pf_, "Target false-alarm rate (wkdrf cost weights)");
        opts_.add("pm", pm_, "Target miss rate (wkdrf cost weights)");
        opts_.add("prior0", prior0_, "Prior probability of H0 (wkdrf cost weights)");
        opts_.add("rounds", rounds_, "Boosting rounds");
        opts_.add("prior-log-odds", prior_log_odds_, "Boosting score offset log(pi0/pi1); default log(M/N)");
        opts_.add("grad-tol", grad_tol_, "Gradient-norm stopping tolerance");
        opts_.add("rel-tol", rel_tol_, "Relative objective-change stopping tolerance");
        opts_.add("max-stages", max_stages_, "Barrier stages");
        opts_.add("max-inner", max_inner_, "Iterations per barrier stage");
        opts_.add("max-iterations", max_iterations_, "klfit iteration budget");
        opts_.add("direction", direction_, "lbfgs or steepest");
        opts_.flag("allow-nonconverged", allow_nonconverged_, "Exit 0 even if the solver hit its budget");
        add_common();
        add_threads();
    }

    void run() override {
        opts_.finalize({"data", "method", "seed", "out-dir"});
        require_file(data_, "dataset");
        const auto data = load_dataset_csv(data_);
        const auto dir = prepare_out_dir(out_dir_);
        if (method_ == "wkdrf") train_wkdrf(data, dir);
        else if (method_ == "klfit") train_kl(data, dir);
        else if (method_ == "waldboost") train_boost(data, dir);
        else throw ConfigError("--method must be wkdrf, klfit or waldboost, got '" + method_ + "'");
    }

private:
    SolverTolerances tolerances() const {
        SolverTolerances t;
        t.grad_norm = grad_tol_;
        t.rel_objective = rel_tol_;
        t.max_stages = max_stages_;
        t.max_inner = max_inner_;
        t.direction = parse_direction(direction_);
        t.validate();
        return t;
    }

    bool cv_requested() const { return !sigma_grid_.empty() || !lambda_grid_.empty(); }

    std::vector<double> grid(const std::string& text, const std::string& key, double fallback) const {
        auto g = parse_double_list(text, key);
        if (g.empty()) g.push_back(fallback);
        return g;
    }

    std::vector<Sample> centers_for(const LabeledDataset& data) const {
        if (centers_file_.empty()) return pick_centers(data, centers_, seed_);
        require_file(centers_file_, "centers file");
        auto c = load_centers_csv(centers_file_);
        if (static_cast<std::size_t>(c.front().size()) != data.dim)
            throw DimensionMismatch("centers in '" + centers_file_ + "' have dimension " +
                                    std::to_string(c.front().size()) + ", dataset has " + std::to_string(data.dim));
        return c;
    }

    void finish(const fs::path& dir, json model, json diagnostics, const ScorerHandle& scorer,
                const LabeledDataset& data, std::vector<std::string> outputs, bool converged) {
        diagnostics["normalization_train"] = to_json(normalization_diagnostics(*scorer, data));
        diagnostics["descriptor"] = scorer->descriptor();
        write_json(model, dir / "model.json");
        write_json(diagnostics, dir / "diagnostics.json");
        outputs.insert(outputs.begin(), {"model.json", "diagnostics.json"});
        write_run_record(dir, name_, opts_, {{"data", data_}}, outputs);
        log(name_, scorer->descriptor() + (converged ? " converged" : " did not converge"));
        if (!converged && !allow_nonconverged_)
            throw NonConvergence("solver stopped on its iteration budget; outputs written to " + dir.string() +
                                 " (pass --allow-nonconverged to accept)");
    }

    void train_wkdrf(const LabeledDataset& data, const fs::path& dir) {
        WkdrfConfig cfg;
        cfg.target_pf = pf_;
        cfg.target_pm = pm_;
        cfg.prior0 = prior0_;
        cfg.sigma = sigma_;
        cfg.lambda = lambda_;
        cfg.num_centers = centers_;
        cfg.seed = seed_;
        cfg.solver = tolerances();
        cfg.validate();

        json diagnostics;
        diagnostics["method"] = "wkdrf";
        if (cv_requested()) {
            const auto cv = cross_validate_wkdrf(data, grid(sigma_grid_, "sigma-grid", sigma_),
                                                 grid(lambda_grid_, "lambda-grid", lambda_), holdout_,
                                                 derive_seed(seed_, 1), cfg, threads_);
            cfg.sigma = cv.sigma;
            cfg.lambda = cv.lambda;
            diagnostics["cv"] = to_json(cv);
        }
        auto centers = centers_for(data);
        save_centers_csv(centers, dir / "centers.csv");
        const auto fit = fit_wkdrf(data, cfg, std::move(centers));
        diagnostics["sigma"] = cfg.sigma;
        diagnostics["lambda"] = cfg.lambda;
        diagnostics["fit"] = to_json(fit.diagnostics);
        json model = to_json(fit.model, "wkdrf");
        model["lambda"] = cfg.lambda;
        const auto scorer = model_scorer(fit.model, "wkdrf", "lambda=" + format_double(cfg.lambda));
        finish(dir, model, diagnostics, scorer, data, {"centers.csv"}, fit.diagnostics.converged);
    }

    void train_kl(const LabeledDataset& data, const fs::path& dir) {
        KlFitConfig cfg;
        cfg.sigma = sigma_;
        cfg.lambda = lambda_;
        cfg.num_centers = centers_;
        cfg.seed = seed_;
        cfg.solver = tolerances();
        cfg.max_iterations = max_iterations_;
        cfg.validate();

        json diagnostics;
        diagnostics["method"] = "klfit";
        if (cv_requested()) {
            const auto cv = cross_validate_kl(data, grid(sigma_grid_, "sigma-grid", sigma_),
                                              grid(lambda_grid_, "lambda-grid", lambda_), holdout_,
                                              derive_seed(seed_, 1), cfg, threads_);
            cfg.sigma = cv.sigma;
            cfg.lambda = cv.lambda;
            diagnostics["cv"] = to_json(cv);
        }
        auto centers = centers_for(data);
        save_centers_csv(centers, dir / "centers.csv");
        const auto fit = fit_kl(data, cfg, std::move(centers));
        diagnostics["sigma"] = cfg.sigma;
        diagnostics["lambda"] = cfg.lambda;
        diagnostics["fit"] = to_json(fit.diagnostics);
        json model = to_json(fit.model, "klfit");
        model["lambda"] = cfg.lambda;
        const auto scorer = model_scorer(fit.model, "klfit", "lambda=" + format_double(cfg.lambda));
        finish(dir, model, diagnostics, scorer, data, {"centers.csv"}, fit.diagnostics.converged);
    }

    void train_boost(const LabeledDataset& data, const fs::path& dir) {
        AdaBoostConfig cfg;
        cfg.rounds = rounds_;
        cfg.seed = seed_;
        if (!prior_log_odds_.empty()) {
            const auto v = parse_double(prior_log_odds_);
            if (!v) throw ConfigError("--prior-log-odds: '" + prior_log_odds_ + "' is not a number");
            cfg.prior_log_odds = *v;
        }
        AdaBoostTrace trace;
        const auto ensemble = train_adaboost(data, cfg, &trace);
        json diagnostics;
        diagnostics["method"] = "waldboost";
        diagnostics["rounds_requested"] = rounds_;
        diagnostics["rounds_fitted"] = ensemble.stumps.size();
        diagnostics["prior_log_odds"] = ensemble.prior_log_odds;
        diagnostics["weighted_errors"] = trace.weighted_errors;
        diagnostics["exp_loss"] = trace.exp_loss;
        const auto scorer = std::make_shared<EnsembleScorer>(ensemble);
        finish(dir, to_json(ensemble), diagnostics, scorer, data, {}, true);
    }

    std::string data_;
    std::string method_ = "wkdrf";
    double sigma_ = 1.0;
    double lambda_ = 1e-3;
    std::size_t centers_ = 25;
    std::string centers_file_;
    std::string sigma_grid_;
    std::string lambda_grid_;
    double holdout_ = 0.3;
    double pf_ = 0.1;
    double pm_ = 0.1;
    double prior0_ = 0.5;
    std::size_t rounds_ = 200;
    std::string prior_log_odds_;
    double grad_tol_ = SolverTolerances{}.grad_norm;
    double rel_tol_ = SolverTolerances{}.rel_objective;
    int max_stages_ = SolverTolerances{}.max_stages;
    int max_inner_ = SolverTolerances{}.max_inner;
    int max_iterations_ = KlFitConfig{}.max_iterations;
    std::string direction_ = "lbfgs";
    bool allow_nonconverged_ = false;
};

// ---------------------------------------------------------------- eval / sweep / compare

struct LoadedScorer {
    ScorerHandle scorer;
    std::size_t dim = 0;
    std::string name;
};

// Shared stream, scorer and Monte Carlo settings.
class EvalCommandBase : public CommandBase {
public:
    EvalCommandBase(CLI::App& root, const std::string& name, const std::string& help)
        : CommandBase(root, name, help) {}

protected:
    void add_stream_options() {
        opts_.add("spec", spec_, "Task JSON; test streams are drawn from its mixtures");
        opts_.add("data", data_, "Dataset CSV; test streams resample its rows with replacement");
        opts_.add("trials", trials_, "Sequential tests per hypothesis");
        opts_.add("n-max", n_max_, "Truncation length");
        opts_.add("prior0", prior0_, "Prior of H0 used to average error and stopping time");
        add_common();
        add_threads();
    }

    void load_streams() {
        if (!spec_.empty() && !data_.empty()) throw ConfigError(name_ + ": give either --spec or --data, not both");
        if (spec_.empty() && data_.empty()) throw ConfigError(name_ + ": --spec or --data is required");
        if (!spec_.empty()) {
            require_file(spec_, "synthetic spec file");
            task_ = load_task(spec_);
            streams_ = mixture_streams(task_);
            stream_dim_ = task_.h0->dim();
            source_ = {{"kind", "mixture"}, {"spec", to_json(task_)}};
        } else {
            require_file(data_, "dataset");
            const auto data = load_dataset_csv(data_);
            streams_ = resample_streams(data);
            stream_dim_ = data.dim;
            source_ = {{"kind", "resample"}, {"data", data_}, {"class0_rows", data.class0.size()},
                       {"class1_rows", data.class1.size()}};
        }
    }

    LoadedScorer load_named(const std::string& ref) const {
        LoadedScorer out;
        if (ref == "oracle") {
            if (!task_.h0) throw ConfigError(name_ + ": the oracle scorer needs a synthetic --spec, not --data");
            out.scorer = oracle_scorer(task_);
            out.dim = task_.h0->dim();
            out.name = "oracle";
        } else {
            require_file(ref, "model file");
            const json doc = read_json(ref);
            if (doc.contains("dim")) out.dim = doc["dim"].get<std::size_t>();
            else if (doc.contains("centers") && !doc["centers"].empty()) out.dim = doc["centers"][0].size();
            out.name = doc.value("method", std::string("model"));
            out.scorer = load_scorer(ref);
        }
        if (out.dim != stream_dim_)
            throw DimensionMismatch("scorer '" + ref + "' expects dimension " + std::to_string(out.dim) +
                                    " but the test streams have dimension " + std::to_string(stream_dim_));
        return out;
    }

    EvalOptions eval_options() const {
        if (trials_ == 0) throw ConfigError("--trials must be positive");
        if (n_max_ == 0) throw ConfigError("--n-max must be positive");
        if (!(prior0_ > 0.0 && prior0_ < 1.0)) throw ConfigError("--prior0 must lie in (0, 1)");
        EvalOptions o;
        o.trials = trials_;
        o.n_max = n_max_;
        o.seed = seed_;
        o.prior0 = prior0_;
        o.threads = threads_;
        return o;
    }

    std::vector<ErrorTargets> target_grid() const {
        std::vector<ErrorTargets> grid;
        if (!targets_.empty()) {
            for (const auto& item : parse_string_list(targets_)) {
                const auto colon = item.find(':');
                if (colon == std::string::npos) throw ConfigError("--targets entries are pf:pm, got '" + item + "'");
                const auto pf = parse_double(item.substr(0, colon));
                const auto pm = parse_double(item.substr(colon + 1));
                if (!pf || !pm) throw ConfigError("--targets entry '" + item + "' is not numeric");
                grid.push_back({*pf, *pm});
            }
        } else {
            grid = symmetric_grid(parse_double_list(levels_, "levels"));
        }
        if (grid.empty()) throw ConfigError(name_ + ": empty target grid");
        for (const auto& t : grid) t.validate();
        return grid;
    }

    void add_grid_options() {
        opts_.add("levels", levels_, "Symmetric target levels pf = pm");
        opts_.add("targets", targets_, "Explicit pf:pm pairs (overrides levels)");
    }

    void warn_truncation(const PerformanceCurve& curve) const {
        if (curve.truncation_flagged) log(name_, curve.scorer + ": more than 1% of runs truncated at some point");
    }

    std::string spec_;
    std::string data_;
    std::size_t trials_ = 1000;
    std::size_t n_max_ = 10000;
    double prior0_ = 0.5;
    std::string levels_ = "0.01,0.02,0.05,0.1,0.15,0.2";
    std::string targets_;

    SyntheticTask task_;
    StreamPair streams_;
    std::size_t stream_dim_ = 0;
    json source_;
};

class EvalCommand final : public EvalCommandBase {
public:
    explicit EvalCommand(CLI::App& root)
        : EvalCommandBase(root, "eval", "Monte Carlo error rates and stopping times at one threshold pair") {
        opts_.add("scorer", scorer_, "Model JSON path or 'oracle'");
        opts_.add("pf", pf_, "Target false-alarm rate");
        opts_.add("pm", pm_, "Target miss rate");
        opts_.add("a", a_, "Lower threshold (with b, overrides pf/pm)");
        opts_.add("b", b_, "Upper threshold (with a, overrides pf/pm)");
        add_stream_options();
    }

    void run() override {
        opts_.finalize({"scorer", "seed", "out-dir"});
        load_streams();
        const auto s = load_named(scorer_);
        Thresholds t;
        ErrorTargets targets{pf_, pm_};
        if (!a_.empty() || !b_.empty()) {
            if (a_.empty() || b_.empty()) throw ConfigError("eval: --a and --b must be given together");
            const auto a = parse_double(a_);
            const auto b = parse_double(b_);
            if (!a || !b) throw ConfigError("eval: --a and --b must be numbers");
            t = {*a, *b};
            t.validate();
            targets = errors_from_thresholds(t);
        } else {
            targets.validate();
            t = thresholds_from_errors(targets);
        }
        TrialRecords records;
        const auto summary = monte_carlo(*s.scorer, streams_, t, eval_options(), &records);
        const auto dir = prepare_out_dir(out_dir_);
        json doc;
        doc["scorer"] = s.scorer->descriptor();
        doc["source"] = streams_.description;
        doc["targets"] = {{"pf", targets.pf}, {"pm", targets.pm}};
        doc["summary"] = to_json(summary);
        write_json(doc, dir / "summary.json");
        write_text(outcomes_csv(records), dir / "outcomes.csv");
        write_run_record(dir, name_, opts_, {{"source", source_}}, {"summary.json", "outcomes.csv"});
        log(name_, s.scorer->descriptor() + ": pf " + format_double(summary.pf()) + ", pm " +
                       format_double(summary.pm()) + ", mean n " + format_double(summary.mean_n()));
    }

private:
    std::string scorer_;
    double pf_ = 0.1;
    double pm_ = 0.1;
    std::string a_;
    std::string b_;
};

class SweepCommand final : public EvalCommandBase {
public:
    explicit SweepCommand(CLI::App& root)
        : EvalCommandBase(root, "sweep", "Performance curve of one scorer over a target-error grid") {
        opts_.add("scorer", scorer_, "Model JSON path or 'oracle'");
        add_grid_options();
        add_stream_options();
    }

    void run() override {
        opts_.finalize({"scorer", "seed", "out-dir"});
        load_streams();
        const auto s = load_named(scorer_);
        const auto curve = sweep(*s.scorer, streams_, target_grid(), eval_options());
        warn_truncation(curve);
        const auto dir = prepare_out_dir(out_dir_);
        write_text(curves_csv({curve}), dir / "curve.csv");
        write_run_record(dir, name_, opts_, {{"source", source_}}, {"curve.csv"});
        log(name_, s.scorer->descriptor() + ": " + std::to_string(curve.points.size()) + " operating points");
    }

private:
    std::string scorer_;
};

class CompareCommand final : public EvalCommandBase {
public:
    explicit CompareCommand(CLI::App& root)
        : EvalCommandBase(root, "compare", "Curves of several scorers on common random numbers") {
        opts_.add("scorers", scorers_, "Comma-separated model JSON paths and/or 'oracle'");
        add_grid_options();
        add_stream_options();
    }

    void run() override {
        opts_.finalize({"scorers", "seed", "out-dir"});
        load_streams();
        std::vector<ScorerHandle> handles;
        std::vector<std::string> names;
        std::map<std::string, int> seen;
        const auto refs = parse_string_list(scorers_);
        if (refs.empty()) throw ConfigError("compare: --scorers is empty");
        for (const auto& ref : refs) {
            auto s = load_named(ref);
            const int k = ++seen[s.name];
            names.push_back(k == 1 ? s.name : s.name + "_" + std::to_string(k));
            handles.push_back(s.scorer);
        }
        const auto curves = compare(handles, streams_, target_grid(), eval_options());
        const auto dir = prepare_out_dir(out_dir_);
        std::vector<std::string> outputs;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            warn_truncation(curves[i]);
            const std::string file = "curve_" + names[i] + ".csv";
            write_text(curves_csv({curves[i]}), dir / file);
            outputs.push_back(file);
        }
        write_text(curves_csv(curves), dir / "curves.csv");
        outputs.push_back("curves.csv");
        write_run_record(dir, name_, opts_, {{"source", source_}}, outputs);
        log(name_, std::to_string(curves.size()) + " curves written to " + dir.string());
    }

private:
    std::string scorers_;
};

} // namespace

std::vector<std::unique_ptr<Command>> make_commands(CLI::App& root) {
    std::vector<std::unique_ptr<Command>> out;
    out.push_back(std::make_unique<SynthCommand>(root));
    out.push_back(std::make_unique<HarPrepareCommand>(root));
    out.push_back(std::make_unique<TrainCommand>(root));
    out.push_back(std::make_unique<EvalCommand>(root));
    out.push_back(std::make_unique<SweepCommand>(root));
    out.push_back(std::make_unique<CompareCommand>(root));
    return out;
}

} // namespace lsprt::cli
