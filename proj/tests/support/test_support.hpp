#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace lsprt::testkit {

// Independent re-derivations used as oracles. Nothing here calls into the
// library.

inline double iso_gauss_pdf2(double x0, double x1, double m0, double m1, double var) {
    const double r2 = (x0 - m0) * (x0 - m0) + (x1 - m1) * (x1 - m1);
    return std::exp(-r2 / (2.0 * var)) / (2.0 * std::numbers::pi * var);
}

// log p1/p0 for the reference task: H0 = N([1,1], 0.5 I),
// H1 = 1/2 N([0,0], 0.5 I) + 1/2 N([1.5,1.5], 0.5 I).
inline double reference_log_ratio(double x0, double x1) {
    const double p0 = iso_gauss_pdf2(x0, x1, 1.0, 1.0, 0.5);
    const double p1 = 0.5 * iso_gauss_pdf2(x0, x1, 0.0, 0.0, 0.5) + 0.5 * iso_gauss_pdf2(x0, x1, 1.5, 1.5, 0.5);
    return std::log(p1) - std::log(p0);
}

inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        g(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

// Monte Carlo mean and standard error of f(x) for x drawn from the
// reference H0 (cls = 0) or H1 (cls = 1), with a private generator.
struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe reference_mc_mean(int cls, std::size_t n, std::uint64_t seed,
                                const std::function<double(double, double)>& f) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z(0.0, std::sqrt(0.5));
    std::bernoulli_distribution coin(0.5);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double m = 1.0;
        if (cls == 1) m = coin(gen) ? 1.5 : 0.0;
        const double x0 = m + z(gen);
        const double x1 = m + z(gen);
        const double v = f(x0, x1);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = (sum2 - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

// UCI HAR layout: `<root>/train/X_train.txt` (561 whitespace-separated
// columns, scientific notation, leading spaces) and `y_train.txt`. counts[k]
// rows carry activity code k + 1. The first three features are shifted by
// the activity code so the binary tasks are learnable; the rest are zero.
inline std::filesystem::path write_har_fixture(const std::filesystem::path& root,
                                               const std::vector<std::size_t>& counts, std::uint64_t seed) {
    const auto dir = root / "train";
    std::filesystem::create_directories(dir);
    std::ofstream xs(dir / "X_train.txt");
    std::ofstream ys(dir / "y_train.txt");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z(0.0, 0.3);
    std::vector<int> labels;
    for (std::size_t k = 0; k < counts.size(); ++k) labels.insert(labels.end(), counts[k], static_cast<int>(k + 1));
    std::shuffle(labels.begin(), labels.end(), gen);
    char buf[32];
    for (int label : labels) {
        const double shift = label <= 3 ? 0.2 * label : -0.1 * label;
        std::string line;
        for (int c = 0; c < 3; ++c) {
            std::snprintf(buf, sizeof(buf), " %.7e", shift + z(gen));
            line += buf;
        }
        for (int c = 3; c < 561; ++c) line += " 0";
        xs << line << "\n";
        ys << label << "\n";
    }
    return root;
}

// Per-activity row counts of the public UCI HAR training split.
inline const std::vector<std::size_t> kUciTrainCounts = {1226, 1073, 986, 1286, 1374, 1407};

} // namespace lsprt::testkit
