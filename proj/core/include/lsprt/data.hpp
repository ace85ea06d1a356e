#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lsprt/rng.hpp"

namespace lsprt {

using Sample = Eigen::VectorXd;

// Two-class training data. class0 holds samples drawn under H0 (M of them),
// class1 those drawn under H1 (N of them).
struct LabeledDataset {
    std::vector<Sample> class0;
    std::vector<Sample> class1;
    std::size_t dim = 0;

    // Throws DataError unless both classes are non-empty and every sample is
    // finite with length dim.
    void validate() const;

    std::size_t size() const { return class0.size() + class1.size(); }
};

struct GaussianComponent {
    double weight = 1.0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};

// Finite Gaussian mixture with precomputed Cholesky factors. Construction
// rejects weights that do not sum to one and covariances whose Cholesky
// factorization fails.
class GaussianMixture {
public:
    explicit GaussianMixture(std::vector<GaussianComponent> components);

    std::size_t dim() const { return dim_; }
    const std::vector<GaussianComponent>& components() const { return components_; }

    // log p(x), computed with log-sum-exp over components.
    double log_density(const Sample& x) const;

    // One draw: pick a component by weight, then mean + L z.
    Sample draw(Engine& engine) const;

private:
    std::vector<GaussianComponent> components_;
    std::vector<Eigen::MatrixXd> chol_;
    std::vector<double> log_norm_;  // log weight - log((2 pi)^{d/2} |S|^{1/2})
    std::vector<double> cumulative_;
    std::size_t dim_ = 0;
};

// Abstract open-ended source of samples consumed one at a time by the
// sequential test.
class SampleSource {
public:
    virtual ~SampleSource() = default;
    virtual const Sample& next() = 0;
};

// Lazily produced i.i.d. draws from a mixture. The first n items are exactly
// gen_mixture_samples(mixture, n, seed).
class MixtureStream final : public SampleSource {
public:
    MixtureStream(std::shared_ptr<const GaussianMixture> mixture, std::uint64_t seed);
    const Sample& next() override;

private:
    std::shared_ptr<const GaussianMixture> mixture_;
    Engine engine_;
    Sample current_;
};

// Uniform resampling with replacement from a fixed pool (used for HAR
// evaluation where rows are not sequential).
class ResampleStream final : public SampleSource {
public:
    ResampleStream(std::shared_ptr<const std::vector<Sample>> pool, std::uint64_t seed);
    const Sample& next() override;

private:
    std::shared_ptr<const std::vector<Sample>> pool_;
    Engine engine_;
    std::uniform_int_distribution<std::size_t> pick_;
};

std::vector<Sample> gen_mixture_samples(const GaussianMixture& mixture, std::size_t n,
                                        std::uint64_t seed);

std::unique_ptr<SampleSource> sample_stream(std::shared_ptr<const GaussianMixture> mixture,
                                            std::uint64_t seed);

// Pair of class-conditional mixtures describing a synthetic task.
struct SyntheticTask {
    std::shared_ptr<const GaussianMixture> h0;
    std::shared_ptr<const GaussianMixture> h1;
};

// H0 = N([1,1], 0.5 I); H1 = 1/2 N([0,0], 0.5 I) + 1/2 N([1.5,1.5], 0.5 I).
SyntheticTask reference_synthetic_task();

// Draws n0 samples from h0 and n1 from h1 with independent child seeds.
LabeledDataset gen_labeled(const SyntheticTask& task, std::size_t n0, std::size_t n1,
                           std::uint64_t seed);

// Binary task over the six UCI HAR activity codes. Feature indices are
// 1-based column numbers into the 561-column feature matrix.
struct HarTask {
    std::vector<int> feature_indices;
    std::set<int> positive_labels;  // class 1
    std::set<int> negative_labels;  // class 0

    void validate() const;
};

// Moving (walking, upstairs, downstairs) vs static (sitting, standing, lying).
HarTask har_moving_task(std::vector<int> feature_indices = {1, 2, 3});
// Walking upstairs (class 1) vs downstairs (class 0).
HarTask har_updown_task(std::vector<int> feature_indices = {1, 2, 3});

struct HarIngestReport {
    std::size_t rows_read = 0;
    std::size_t rows_dropped = 0;
    std::vector<std::size_t> per_label_counts = std::vector<std::size_t>(7, 0);  // index = code
};

inline constexpr std::size_t kHarFeatureCount = 561;

LabeledDataset load_har(const std::filesystem::path& features_path,
                        const std::filesystem::path& labels_path, const HarTask& task,
                        HarIngestReport* report = nullptr);

// Per-class shuffled split. holdout gets round(fraction * size) of each
// class; both sides must keep at least one sample per class.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset,
                                                double holdout_fraction, std::uint64_t seed);

// Per-feature affine map x -> (x - offset) / scale, fit on training data.
struct Standardizer {
    Eigen::VectorXd offset;
    Eigen::VectorXd scale;

    static Standardizer fit(const LabeledDataset& train);
    Sample apply(const Sample& x) const;
    LabeledDataset apply(const LabeledDataset& data) const;
};

// CSV with header `class,f1,...,fd`. Values are written with round-trip
// precision.
void save_dataset_csv(const LabeledDataset& dataset, const std::filesystem::path& path);
LabeledDataset load_dataset_csv(const std::filesystem::path& path);

} // namespace lsprt
