// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "steato/error.hpp"
#include "steato/patches.hpp"
#include "steato/stats.hpp"

namespace steato {

/// Per-patch descriptor. Layout: [mean, stddev, median, laplacian_variance,
/// local_contrast, gradient_mean, hist_0 .. hist_{B-1}], length 6 + B.
using PatchFeatureVector = std::vector<double>;

namespace detail {

// 3x3 correlation with replicate (clamp-to-edge) padding. Kernel is row-major.
inline std::vector<double> correlate3x3(const std::vector<double>& src, int w, int h,
                                        const std::array<double, 9>& k) {
    std::vector<double> out(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int sy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sx = std::clamp(x + dx, 0, w - 1);
                    acc += k[static_cast<std::size_t>(dy + 1) * 3 + (dx + 1)] *
                           src[static_cast<std::size_t>(sy) * w + sx];
                }
            }
            out[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    return out;
}

inline constexpr std::array<double, 9> kLaplacian = {0, 1, 0, 1, -4, 1, 0, 1, 0};
inline constexpr std::array<double, 9> kSobelX = {-1, 0, 1, -2, 0, 2, -1, 0, 1};
inline constexpr std::array<double, 9> kSobelY = {-1, -2, -1, 0, 0, 0, 1, 2, 1};

// Mean over pixels of the population stddev of each pixel's 3x3 replicate
// neighborhood.
inline double local_contrast(const std::vector<double>& src, int w, int h) {
    double total = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double s = 0.0, s2 = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int sy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sx = std::clamp(x + dx, 0, w - 1);
                    const double v = src[static_cast<std::size_t>(sy) * w + sx];
                    s += v;
                    s2 += v * v;
                }
            }
            const double m = s / 9.0;
            total += std::sqrt(std::max(0.0, s2 / 9.0 - m * m));
        }
    }
    return total / (static_cast<double>(w) * h);
}

}  // namespace detail

/// Texture features of one patch. Histogram bins are contiguous equal-width
/// intensity ranges over [0,255], normalized by the pixel count.
inline PatchFeatureVector patch_features(const Patch& patch, int bins) {
    if (bins < 1 || bins > 256 || 256 % bins != 0)
        raise(ErrorCode::InvalidBinCount, "histogram bins must divide 256");
    const int s = patch.size;
    const std::size_t n = patch.pixels.size();
    std::vector<double> px(n);
    for (std::size_t i = 0; i < n; ++i) px[i] = static_cast<double>(patch.pixels[i]);

    PatchFeatureVector f;
    f.reserve(6 + static_cast<std::size_t>(bins));
    f.push_back(mean_of(px));
    f.push_back(population_stddev(px));
    f.push_back(median(px));

    const auto lap = detail::correlate3x3(px, s, s, detail::kLaplacian);
    f.push_back(population_variance(lap));

    f.push_back(detail::local_contrast(px, s, s));

    const auto gx = detail::correlate3x3(px, s, s, detail::kSobelX);
    const auto gy = detail::correlate3x3(px, s, s, detail::kSobelY);
    double grad = 0.0;
    for (std::size_t i = 0; i < n; ++i) grad += std::hypot(gx[i], gy[i]);
    f.push_back(grad / static_cast<double>(n));

    const int width = 256 / bins;
    std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
    for (std::uint8_t v : patch.pixels) hist[v / width] += 1.0;
    for (double& b : hist) b /= static_cast<double>(n);
    f.insert(f.end(), hist.begin(), hist.end());
    return f;
}

/// Features for a list of patches, preserving order.
inline std::vector<PatchFeatureVector> batch_features(const std::vector<Patch>& patches, int bins) {
    std::vector<PatchFeatureVector> out(patches.size());
    for (std::size_t i = 0; i < patches.size(); ++i) out[i] = patch_features(patches[i], bins);
    return out;
}

}  // namespace steato
