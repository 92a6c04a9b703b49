// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "steato/error.hpp"
#include "steato/stats.hpp"
#include "steato/texture.hpp"

namespace steato {

/// Dense n_fat x n_pancreas matrix of Euclidean distances between
/// standardized patch feature vectors.
struct DistanceMatrix {
    std::size_t rows = 0;  // fat patches
    std::size_t cols = 0;  // pancreas patches
    std::vector<double> data;

    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

/// Standardizes fat and pancreas feature vectors jointly: per-dimension mean
/// and population stddev are computed over the pooled set, dimensions with
/// zero spread map to zero.
inline void standardize_patient(std::vector<PatchFeatureVector>& fat,
                                std::vector<PatchFeatureVector>& pancreas) {
    if (fat.empty() || pancreas.empty())
        raise(ErrorCode::NoPatches, "standardization needs fat and pancreas patches");
    const std::size_t n = fat.size() + pancreas.size();
    const std::size_t d = fat.front().size();
    for (const auto& v : fat)
        if (v.size() != d) raise(ErrorCode::LengthMismatch, "feature length mismatch");
    for (const auto& v : pancreas)
        if (v.size() != d) raise(ErrorCode::LengthMismatch, "feature length mismatch");

    std::vector<double> mu(d, 0.0), sigma(d, 0.0);
    for (const auto& v : fat)
        for (std::size_t j = 0; j < d; ++j) mu[j] += v[j];
    for (const auto& v : pancreas)
        for (std::size_t j = 0; j < d; ++j) mu[j] += v[j];
    for (std::size_t j = 0; j < d; ++j) mu[j] /= static_cast<double>(n);
    for (const auto& v : fat)
        for (std::size_t j = 0; j < d; ++j) sigma[j] += (v[j] - mu[j]) * (v[j] - mu[j]);
    for (const auto& v : pancreas)
        for (std::size_t j = 0; j < d; ++j) sigma[j] += (v[j] - mu[j]) * (v[j] - mu[j]);
    for (std::size_t j = 0; j < d; ++j) sigma[j] = std::sqrt(sigma[j] / static_cast<double>(n));

    auto apply = [&](std::vector<PatchFeatureVector>& set) {
        for (auto& v : set)
            for (std::size_t j = 0; j < d; ++j)
                v[j] = sigma[j] > 0.0 ? (v[j] - mu[j]) / sigma[j] : 0.0;
    };
    apply(fat);
    apply(pancreas);
}

/// Pairwise L2 distances, row i = fat patch i, column j = pancreas patch j.
/// All feature vectors must share one length.
inline DistanceMatrix distance_matrix(const std::vector<PatchFeatureVector>& fat,
                                      const std::vector<PatchFeatureVector>& pancreas) {
    const PatchFeatureVector* first =
        !fat.empty() ? &fat.front() : (!pancreas.empty() ? &pancreas.front() : nullptr);
    if (first != nullptr) {
        for (const auto& v : fat)
            if (v.size() != first->size()) raise(ErrorCode::LengthMismatch, "feature length mismatch");
        for (const auto& v : pancreas)
            if (v.size() != first->size()) raise(ErrorCode::LengthMismatch, "feature length mismatch");
    }
    DistanceMatrix m;
    m.rows = fat.size();
    m.cols = pancreas.size();
    m.data.resize(m.rows * m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            m.at(i, j) = euclidean_distance(fat[i], pancreas[j]);
    return m;
}

/// Collapses a patient's distance matrix and standardized features into one
/// fixed-length vector:
///   [0..4]   distance stats: mean, stddev, median, p10, p90
///   [5..7]   nearest-neighbour stats over per-fat-patch minima: mean, stddev,
///            fraction strictly below the 25th percentile of all distances
///   [8..]    per-dimension mean(fat) - mean(pancreas), length 6 + B
inline std::vector<double> aggregate_patient_vector(const DistanceMatrix& m,
                                                    const std::vector<PatchFeatureVector>& fat_z,
                                                    const std::vector<PatchFeatureVector>& panc_z) {
    if (m.rows == 0 || m.cols == 0)
        raise(ErrorCode::NoPatches, "cannot aggregate an empty distance matrix");
    if (fat_z.size() != m.rows || panc_z.size() != m.cols)
        raise(ErrorCode::LengthMismatch, "feature sets do not match distance matrix shape");

    std::vector<double> out;
    const std::size_t d = fat_z.front().size();
    out.reserve(8 + d);

    out.push_back(mean_of(m.data));
    out.push_back(population_stddev(m.data));
    std::vector<double> sorted = m.data;
    std::sort(sorted.begin(), sorted.end());
    out.push_back(percentile_sorted(sorted, 0.50));
    out.push_back(percentile_sorted(sorted, 0.10));
    out.push_back(percentile_sorted(sorted, 0.90));

    std::vector<double> minima(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double best = m.at(i, 0);
        for (std::size_t j = 1; j < m.cols; ++j) best = std::min(best, m.at(i, j));
        minima[i] = best;
    }
    const double q25 = percentile_sorted(sorted, 0.25);
    std::size_t below = 0;
    for (double v : minima)
        if (v < q25) ++below;
    out.push_back(mean_of(minima));
    out.push_back(population_stddev(minima));
    out.push_back(static_cast<double>(below) / static_cast<double>(m.rows));

    for (std::size_t j = 0; j < d; ++j) {
        double mf = 0.0, mp = 0.0;
        for (const auto& v : fat_z) mf += v[j];
        for (const auto& v : panc_z) mp += v[j];
        out.push_back(mf / static_cast<double>(fat_z.size()) -
                      mp / static_cast<double>(panc_z.size()));
    }
    return out;
}

/// Absolute difference between the mean raw pixel intensity of all pancreas
/// patches and all fat patches. Echogenicity contrast estimate.
inline double delta_mu(const std::vector<Patch>& fat, const std::vector<Patch>& pancreas) {
    if (fat.empty() || pancreas.empty())
        raise(ErrorCode::NoPatches, "delta_mu needs patches from both regions");
    auto region_mean = [](const std::vector<Patch>& ps) {
        double s = 0.0;
        std::size_t n = 0;
        for (const auto& p : ps) {
            for (std::uint8_t v : p.pixels) s += static_cast<double>(v);
            n += p.pixels.size();
        }
        return s / static_cast<double>(n);
    };
    return std::fabs(region_mean(pancreas) - region_mean(fat));
}

}  // namespace steato
