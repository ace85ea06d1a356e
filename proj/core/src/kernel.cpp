#include "lsprt/kernel.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "lsprt/error.hpp"

namespace lsprt {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* where) {
    if (a != b) {
        throw DimensionMismatch(std::string(where) + ": dimension " + std::to_string(a) +
                                " does not match " + std::to_string(b));
    }
}

} // namespace

double gauss_kernel(const Sample& x, const Sample& y, double sigma) {
    require_same_dim(x.size(), y.size(), "gauss_kernel");
    return std::exp(-(x - y).squaredNorm() / (sigma * sigma));
}

void KernelGeometry::validate() const {
    if (centers.empty()) throw ConfigError("kernel geometry needs at least one center");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("kernel bandwidth must be positive");
    const auto d = centers.front().size();
    for (const auto& c : centers) {
        require_same_dim(c.size(), d, "kernel centers");
        if (!c.allFinite()) throw ConfigError("kernel center has a non-finite coordinate");
    }
}

void KernelModel::validate() const {
    geometry.validate();
    if (static_cast<std::size_t>(alpha.size()) != geometry.num_centers())
        throw ConfigError("coefficient vector length does not match the number of centers");
    if (!alpha.allFinite()) throw ConfigError("coefficient vector has a non-finite entry");
}

std::vector<Sample> pick_centers(const LabeledDataset& dataset, std::size_t count,
                                 std::uint64_t seed) {
    const std::size_t pool = dataset.size();
    if (count < 1) throw ConfigError("number of centers must be at least 1");
    if (count > pool) {
        throw ConfigError("requested " + std::to_string(count) + " centers from a pool of " +
                          std::to_string(pool) + " samples");
    }
    // Partial Fisher-Yates over pooled indices.
    std::vector<std::size_t> idx(pool);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Engine engine = make_engine(seed);
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool - 1);
        std::swap(idx[i], idx[pick(engine)]);
    }
    std::vector<Sample> centers;
    centers.reserve(count);
    const std::size_t m = dataset.class0.size();
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t k = idx[i];
        centers.push_back(k < m ? dataset.class0[k] : dataset.class1[k - m]);
    }
    return centers;
}

Eigen::VectorXd feature_vec(const Sample& x, const KernelGeometry& geometry) {
    const auto c = static_cast<Eigen::Index>(geometry.num_centers());
    Eigen::VectorXd phi(c);
    const double inv_s2 = 1.0 / (geometry.sigma * geometry.sigma);
    for (Eigen::Index i = 0; i < c; ++i) {
        const auto& ctr = geometry.centers[static_cast<std::size_t>(i)];
        require_same_dim(x.size(), ctr.size(), "feature_vec");
        phi(i) = std::exp(-(x - ctr).squaredNorm() * inv_s2);
    }
    return phi;
}

Eigen::MatrixXd feature_matrix(const std::vector<Sample>& samples, const KernelGeometry& geometry) {
    Eigen::MatrixXd phi(static_cast<Eigen::Index>(samples.size()),
                        static_cast<Eigen::Index>(geometry.num_centers()));
    for (std::size_t j = 0; j < samples.size(); ++j)
        phi.row(static_cast<Eigen::Index>(j)) = feature_vec(samples[j], geometry).transpose();
    return phi;
}

double log_ratio(const KernelModel& model, const Sample& x) {
    require_same_dim(static_cast<Eigen::Index>(model.geometry.num_centers()), model.alpha.size(),
                     "log_ratio coefficients");
    return model.alpha.dot(feature_vec(x, model.geometry));
}

Eigen::MatrixXd kernel_matrix(const KernelGeometry& geometry) {
    geometry.validate();
    const auto c = static_cast<Eigen::Index>(geometry.num_centers());
    Eigen::MatrixXd k(c, c);
    for (Eigen::Index i = 0; i < c; ++i) {
        k(i, i) = 1.0;
        for (Eigen::Index j = 0; j < i; ++j) {
            k(i, j) = k(j, i) = gauss_kernel(geometry.centers[static_cast<std::size_t>(i)],
                                             geometry.centers[static_cast<std::size_t>(j)],
                                             geometry.sigma);
        }
    }
    return k;
}

} // namespace lsprt
