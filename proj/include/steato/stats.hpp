// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "steato/error.hpp"

namespace steato {

// Scalar summaries used throughout the pipeline. All second moments are the
// population form (divide by n, not n-1); patch counts get small enough that
// the distinction matters.

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double population_variance(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) {
        const double d = x - m;
        s += d * d;
    }
    return s / static_cast<double>(v.size());
}

inline double population_stddev(const std::vector<double>& v) {
    return std::sqrt(population_variance(v));
}

/// Linear-interpolation percentile (the common "type-7" rule) on an already
/// sorted ascending vector. p in [0, 1].
inline double percentile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) raise(ErrorCode::EmptyDataset, "percentile of empty set");
    if (sorted.size() == 1) return sorted[0];
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double percentile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    return percentile_sorted(v, p);
}

/// Median with the even-count convention: arithmetic mean of the two middle
/// order statistics. Equals percentile(v, 0.5).
inline double median(std::vector<double> v) {
    return percentile(std::move(v), 0.5);
}

inline double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

/// Round half away from zero, which for our nonnegative intensities is
/// round-half-up.
inline int round_half_up(double v) {
    return static_cast<int>(std::floor(v + 0.5));
}

inline std::uint8_t clamp_to_byte(double v) {
    const int r = round_half_up(v);
    if (r < 0) return 0;
    if (r > 255) return 255;
    return static_cast<std::uint8_t>(r);
}

}  // namespace steato
