#include "lsprt/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>

#include "lsprt/error.hpp"
#include "lsprt/text_util.hpp"

namespace lsprt {

namespace {

std::string describe_path(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

void check_sample(const Sample& x, std::size_t dim, const char* what, std::size_t index) {
    if (static_cast<std::size_t>(x.size()) != dim) {
        throw DataError(std::string(what) + " sample " + std::to_string(index) + " has length " +
                        std::to_string(x.size()) + ", expected " + std::to_string(dim));
    }
    if (!x.allFinite()) {
        throw DataError(std::string(what) + " sample " + std::to_string(index) +
                        " has a non-finite entry");
    }
}

// Splits on spaces and tabs, skipping runs of separators.
template <class F>
void for_each_token(std::string_view line, F&& f) {
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
            ++pos;
        if (pos >= line.size()) break;
        std::size_t end = pos;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r')
            ++end;
        f(line.substr(pos, end - pos));
        pos = end;
    }
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

} // namespace

void LabeledDataset::validate() const {
    if (dim == 0) throw DataError("dataset dimension must be positive");
    if (class0.empty() || class1.empty()) {
        throw DataError("dataset needs at least one sample per class (got " +
                        std::to_string(class0.size()) + " class-0, " +
                        std::to_string(class1.size()) + " class-1)");
    }
    for (std::size_t i = 0; i < class0.size(); ++i) check_sample(class0[i], dim, "class-0", i);
    for (std::size_t i = 0; i < class1.size(); ++i) check_sample(class1[i], dim, "class-1", i);
}

GaussianMixture::GaussianMixture(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw ConfigError("mixture needs at least one component");
    dim_ = static_cast<std::size_t>(components_.front().mean.size());
    if (dim_ == 0) throw ConfigError("mixture dimension must be positive");

    double total = 0.0;
    for (std::size_t k = 0; k < components_.size(); ++k) {
        const auto& c = components_[k];
        const std::string tag = "mixture component " + std::to_string(k);
        if (!(c.weight > 0.0 && c.weight <= 1.0)) throw ConfigError(tag + ": weight outside (0,1]");
        if (static_cast<std::size_t>(c.mean.size()) != dim_ ||
            static_cast<std::size_t>(c.covariance.rows()) != dim_ ||
            static_cast<std::size_t>(c.covariance.cols()) != dim_) {
            throw ConfigError(tag + ": mean/covariance shape does not match dimension " +
                              std::to_string(dim_));
        }
        if (!c.mean.allFinite() || !c.covariance.allFinite())
            throw ConfigError(tag + ": non-finite parameter");
        const double asym = (c.covariance - c.covariance.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * std::max(1.0, c.covariance.cwiseAbs().maxCoeff()))
            throw ConfigError(tag + ": covariance is not symmetric");

        Eigen::LLT<Eigen::MatrixXd> llt(c.covariance);
        if (llt.info() != Eigen::Success) throw ConfigError(tag + ": covariance is not positive definite");
        Eigen::MatrixXd L = llt.matrixL();
        double log_det_half = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (!(L(i, i) > 0.0)) throw ConfigError(tag + ": covariance is not positive definite");
            log_det_half += std::log(L(i, i));
        }
        chol_.push_back(std::move(L));
        log_norm_.push_back(std::log(c.weight) -
                            0.5 * static_cast<double>(dim_) * std::log(2.0 * std::numbers::pi) -
                            log_det_half);
        total += c.weight;
        cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mixture weights must sum to 1");
}

double GaussianMixture::log_density(const Sample& x) const {
    if (static_cast<std::size_t>(x.size()) != dim_) {
        throw DimensionMismatch("sample of length " + std::to_string(x.size()) +
                                " passed to a mixture of dimension " + std::to_string(dim_));
    }
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(components_.size());
    for (std::size_t k = 0; k < components_.size(); ++k) {
        const Eigen::VectorXd z =
            chol_[k].triangularView<Eigen::Lower>().solve(x - components_[k].mean);
        terms[k] = log_norm_[k] - 0.5 * z.squaredNorm();
        best = std::max(best, terms[k]);
    }
    if (!std::isfinite(best)) return best;
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - best);
    return best + std::log(acc);
}

Sample GaussianMixture::draw(Engine& engine) const {
    std::size_t k = 0;
    if (components_.size() > 1) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double u = unit(engine) * cumulative_.back();
        k = static_cast<std::size_t>(
            std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
        k = std::min(k, components_.size() - 1);
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < dim_; ++i) z(static_cast<Eigen::Index>(i)) = normal(engine);
    return components_[k].mean + chol_[k].triangularView<Eigen::Lower>() * z;
}

MixtureStream::MixtureStream(std::shared_ptr<const GaussianMixture> mixture, std::uint64_t seed)
    : mixture_(std::move(mixture)), engine_(make_engine(seed)) {
    if (!mixture_) throw ConfigError("mixture stream needs a mixture");
}

const Sample& MixtureStream::next() {
    current_ = mixture_->draw(engine_);
    return current_;
}

ResampleStream::ResampleStream(std::shared_ptr<const std::vector<Sample>> pool, std::uint64_t seed)
    : pool_(std::move(pool)), engine_(make_engine(seed)) {
    if (!pool_ || pool_->empty()) throw ConfigError("resampling stream needs a non-empty pool");
    pick_ = std::uniform_int_distribution<std::size_t>(0, pool_->size() - 1);
}

const Sample& ResampleStream::next() { return (*pool_)[pick_(engine_)]; }

std::vector<Sample> gen_mixture_samples(const GaussianMixture& mixture, std::size_t n,
                                        std::uint64_t seed) {
    if (n < 1) throw ConfigError("sample count must be at least 1");
    Engine engine = make_engine(seed);
    std::vector<Sample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(mixture.draw(engine));
    return out;
}

std::unique_ptr<SampleSource> sample_stream(std::shared_ptr<const GaussianMixture> mixture,
                                            std::uint64_t seed) {
    return std::make_unique<MixtureStream>(std::move(mixture), seed);
}

SyntheticTask reference_synthetic_task() {
    const Eigen::MatrixXd cov = 0.5 * Eigen::MatrixXd::Identity(2, 2);
    auto h0 = std::make_shared<GaussianMixture>(std::vector<GaussianComponent>{
        {1.0, Eigen::Vector2d(1.0, 1.0), cov}});
    auto h1 = std::make_shared<GaussianMixture>(std::vector<GaussianComponent>{
        {0.5, Eigen::Vector2d(0.0, 0.0), cov},
        {0.5, Eigen::Vector2d(1.5, 1.5), cov}});
    return {std::move(h0), std::move(h1)};
}

LabeledDataset gen_labeled(const SyntheticTask& task, std::size_t n0, std::size_t n1,
                           std::uint64_t seed) {
    if (task.h0->dim() != task.h1->dim())
        throw DimensionMismatch("class mixtures have different dimensions");
    LabeledDataset d;
    d.dim = task.h0->dim();
    d.class0 = gen_mixture_samples(*task.h0, n0, derive_seed(seed, 0));
    d.class1 = gen_mixture_samples(*task.h1, n1, derive_seed(seed, 1));
    return d;
}

void HarTask::validate() const {
    if (feature_indices.empty()) throw ConfigError("HAR task needs at least one feature index");
    if (positive_labels.empty() || negative_labels.empty())
        throw ConfigError("HAR task needs non-empty positive and negative label sets");
    for (int idx : feature_indices) {
        if (idx < 1 || idx > static_cast<int>(kHarFeatureCount)) {
            throw ConfigError("HAR feature index " + std::to_string(idx) + " outside 1.." +
                              std::to_string(kHarFeatureCount));
        }
    }
    for (int l : positive_labels) {
        if (negative_labels.count(l))
            throw ConfigError("HAR label " + std::to_string(l) + " is in both label sets");
    }
}

HarTask har_moving_task(std::vector<int> feature_indices) {
    return {std::move(feature_indices), {1, 2, 3}, {4, 5, 6}};
}

HarTask har_updown_task(std::vector<int> feature_indices) {
    return {std::move(feature_indices), {2}, {3}};
}

LabeledDataset load_har(const std::filesystem::path& features_path,
                        const std::filesystem::path& labels_path, const HarTask& task,
                        HarIngestReport* report) {
    task.validate();

    std::ifstream labels_in(labels_path);
    if (!labels_in) throw DataError("cannot open labels file " + describe_path(labels_path));
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(labels_in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        std::vector<std::string_view> tokens;
        for_each_token(line, [&](std::string_view t) { tokens.push_back(t); });
        auto v = tokens.size() == 1 ? parse_int(tokens[0]) : std::nullopt;
        if (!v || *v < 1 || *v > 6) {
            throw DataError(describe_path(labels_path) + " row " + std::to_string(line_no) +
                            ": expected one activity code in 1..6, got '" + line + "'");
        }
        labels.push_back(static_cast<int>(*v));
    }

    std::ifstream features_in(features_path);
    if (!features_in) throw DataError("cannot open features file " + describe_path(features_path));

    HarIngestReport local;
    LabeledDataset out;
    out.dim = task.feature_indices.size();
    std::vector<double> row;
    row.reserve(kHarFeatureCount);
    std::size_t row_idx = 0;
    line_no = 0;
    while (std::getline(features_in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        row.clear();
        std::size_t col = 0;
        for_each_token(line, [&](std::string_view t) {
            ++col;
            auto v = parse_double(t);
            if (!v) {
                throw DataError(describe_path(features_path) + " row " + std::to_string(line_no) +
                                " column " + std::to_string(col) + ": non-numeric token '" +
                                std::string(t) + "'");
            }
            row.push_back(*v);
        });
        if (row.size() != kHarFeatureCount) {
            throw DataError(describe_path(features_path) + " row " + std::to_string(line_no) +
                            ": expected " + std::to_string(kHarFeatureCount) + " columns, got " +
                            std::to_string(row.size()));
        }
        if (row_idx >= labels.size()) {
            throw DataError("row-count mismatch: features file has more rows than the " +
                            std::to_string(labels.size()) + " labels in " +
                            describe_path(labels_path));
        }
        const int label = labels[row_idx++];
        ++local.rows_read;
        ++local.per_label_counts[static_cast<std::size_t>(label)];
        const bool pos = task.positive_labels.count(label) > 0;
        const bool neg = task.negative_labels.count(label) > 0;
        if (!pos && !neg) {
            ++local.rows_dropped;
            continue;
        }
        Sample x(static_cast<Eigen::Index>(out.dim));
        for (std::size_t k = 0; k < out.dim; ++k)
            x(static_cast<Eigen::Index>(k)) = row[static_cast<std::size_t>(task.feature_indices[k] - 1)];
        (pos ? out.class1 : out.class0).push_back(std::move(x));
    }
    if (row_idx != labels.size()) {
        throw DataError("row-count mismatch: " + std::to_string(row_idx) + " feature rows vs " +
                        std::to_string(labels.size()) + " labels");
    }
    if (out.class0.empty() || out.class1.empty()) {
        throw DataError("HAR task selects no rows for class " +
                        std::string(out.class0.empty() ? "0" : "1") + " in " +
                        describe_path(labels_path));
    }
    if (report) *report = local;
    return out;
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset,
                                                double holdout_fraction, std::uint64_t seed) {
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
        throw ConfigError("holdout fraction must lie in (0,1)");
    if (dataset.class0.size() < 2 || dataset.class1.size() < 2)
        throw ConfigError("split needs at least two samples per class");

    LabeledDataset train, holdout;
    train.dim = holdout.dim = dataset.dim;
    Engine engine = make_engine(seed);
    auto split_class = [&](const std::vector<Sample>& src, std::vector<Sample>& tr,
                           std::vector<Sample>& ho) {
        const auto n_hold =
            static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(src.size())));
        if (n_hold == 0 || n_hold >= src.size())
            throw ConfigError("holdout fraction leaves one side of the split empty");
        std::vector<std::size_t> idx(src.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::shuffle(idx.begin(), idx.end(), engine);
        for (std::size_t i = 0; i < idx.size(); ++i) (i < n_hold ? ho : tr).push_back(src[idx[i]]);
    };
    split_class(dataset.class0, train.class0, holdout.class0);
    split_class(dataset.class1, train.class1, holdout.class1);
    return {std::move(train), std::move(holdout)};
}

Standardizer Standardizer::fit(const LabeledDataset& train) {
    train.validate();
    const auto d = static_cast<Eigen::Index>(train.dim);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d), sq = Eigen::VectorXd::Zero(d);
    double n = 0.0;
    for (const auto* cls : {&train.class0, &train.class1}) {
        for (const auto& x : *cls) {
            sum += x;
            sq += x.cwiseProduct(x);
            n += 1.0;
        }
    }
    Standardizer s;
    s.offset = sum / n;
    Eigen::VectorXd var = (sq / n - s.offset.cwiseProduct(s.offset)).cwiseMax(0.0);
    s.scale = var.cwiseSqrt();
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!(s.scale(i) > 0.0)) s.scale(i) = 1.0;
    }
    return s;
}

Sample Standardizer::apply(const Sample& x) const {
    return (x - offset).cwiseQuotient(scale);
}

LabeledDataset Standardizer::apply(const LabeledDataset& data) const {
    LabeledDataset out;
    out.dim = data.dim;
    for (const auto& x : data.class0) out.class0.push_back(apply(x));
    for (const auto& x : data.class1) out.class1.push_back(apply(x));
    return out;
}

void save_dataset_csv(const LabeledDataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write dataset file " + describe_path(path));
    out << "class";
    for (std::size_t k = 1; k <= dataset.dim; ++k) out << ",f" << k;
    out << '\n';
    auto write_rows = [&](const std::vector<Sample>& rows, int cls) {
        for (const auto& x : rows) {
            out << cls;
            for (Eigen::Index k = 0; k < x.size(); ++k) out << ',' << format_double(x(k));
            out << '\n';
        }
    };
    write_rows(dataset.class0, 0);
    write_rows(dataset.class1, 1);
    if (!out) throw DataError("failed writing dataset file " + describe_path(path));
}

LabeledDataset load_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file " + describe_path(path));
    std::string line;
    if (!std::getline(in, line)) throw DataError(describe_path(path) + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 2 || header[0] != "class")
        throw DataError(describe_path(path) + ": header must be class,f1,...,fd");
    for (std::size_t k = 1; k < header.size(); ++k) {
        if (header[k] != "f" + std::to_string(k))
            throw DataError(describe_path(path) + ": unexpected header column '" + header[k] + "'");
    }

    LabeledDataset d;
    d.dim = header.size() - 1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;
        std::vector<std::string_view> cells;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            cells.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (cells.size() != header.size()) {
            throw DataError(describe_path(path) + " line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(cells.size()));
        }
        auto cls = parse_int(cells[0]);
        if (!cls || (*cls != 0 && *cls != 1))
            throw DataError(describe_path(path) + " line " + std::to_string(line_no) +
                            ": class must be 0 or 1");
        Sample x(static_cast<Eigen::Index>(d.dim));
        for (std::size_t k = 0; k < d.dim; ++k) {
            auto v = parse_double(cells[k + 1]);
            if (!v) {
                throw DataError(describe_path(path) + " line " + std::to_string(line_no) +
                                " column " + std::to_string(k + 2) + ": non-numeric value");
            }
            x(static_cast<Eigen::Index>(k)) = *v;
        }
        (*cls == 0 ? d.class0 : d.class1).push_back(std::move(x));
    }
    d.validate();
    return d;
}

} // namespace lsprt
