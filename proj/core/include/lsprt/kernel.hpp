#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lsprt/data.hpp"

namespace lsprt {

// Gaussian kernel exp(-||x - y||^2 / sigma^2). The bandwidth enters as
// sigma^2, not 2 sigma^2.
double gauss_kernel(const Sample& x, const Sample& y, double sigma);

// Centers and bandwidth shared by every kernel-expansion model.
struct KernelGeometry {
    std::vector<Sample> centers;
    double sigma = 1.0;

    std::size_t num_centers() const { return centers.size(); }
    std::size_t dim() const { return centers.empty() ? 0 : static_cast<std::size_t>(centers.front().size()); }
    void validate() const;
};

// Log-density-ratio estimate g(x) = sum_c alpha_c k(x, center_c).
struct KernelModel {
    KernelGeometry geometry;
    Eigen::VectorXd alpha;

    void validate() const;
};

// C distinct pool indices drawn uniformly without replacement from the
// concatenation class0 ++ class1; returns the corresponding samples.
std::vector<Sample> pick_centers(const LabeledDataset& dataset, std::size_t count,
                                 std::uint64_t seed);

// Entry c is gauss_kernel(x, center_c, sigma).
Eigen::VectorXd feature_vec(const Sample& x, const KernelGeometry& geometry);

// Rows are feature_vec of each sample.
Eigen::MatrixXd feature_matrix(const std::vector<Sample>& samples, const KernelGeometry& geometry);

double log_ratio(const KernelModel& model, const Sample& x);

// K(i,j) = gauss_kernel(center_i, center_j, sigma).
Eigen::MatrixXd kernel_matrix(const KernelGeometry& geometry);

} // namespace lsprt
