// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "steato/error.hpp"
#include "steato/stats.hpp"

namespace steato {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // width * height intensities

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) raise(ErrorCode::InvalidDimensions, "image dimensions must be positive");
    }

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Per-structure segmentation mask, row-major, one byte per pixel (0 or 1).
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {
        if (w <= 0 || h <= 0) raise(ErrorCode::InvalidDimensions, "mask dimensions must be positive");
    }

    bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto b : data) n += (b != 0);
        return n;
    }

    bool operator==(const BinaryMask& o) const {
        return width == o.width && height == o.height && data == o.data;
    }
};

struct BoundingBox {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive
};

inline std::optional<BoundingBox> bounding_box(const BinaryMask& mask) {
    BoundingBox bb{mask.width, mask.height, -1, -1};
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            bb.x0 = std::min(bb.x0, x);
            bb.y0 = std::min(bb.y0, y);
            bb.x1 = std::max(bb.x1, x);
            bb.y1 = std::max(bb.y1, y);
        }
    }
    if (bb.x1 < 0) return std::nullopt;
    return bb;
}

/// ITU-R 601 luma, rounded half-up. Multi-channel ingestion stays
/// bit-deterministic with these fixed weights.
inline std::uint8_t luma_from_rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    return clamp_to_byte(y);
}

namespace detail {

// Corner-aligned source coordinate for a destination sample: dst index 0
// maps to src 0 and dst last to src last. A single-sample destination maps
// to the source midpoint.
inline double align_corners_coord(int dst_i, int dst_n, int src_n) {
    if (dst_n <= 1) return 0.5 * (src_n - 1);
    return static_cast<double>(dst_i) * (src_n - 1) / static_cast<double>(dst_n - 1);
}

}  // namespace detail

/// Bilinear resize with corner alignment; results rounded half-up to [0,255].
inline GrayImage resize(const GrayImage& img, int target_w, int target_h) {
    if (target_w <= 0 || target_h <= 0)
        raise(ErrorCode::InvalidDimensions, "resize target must be positive");
    GrayImage out(target_w, target_h);
    for (int y = 0; y < target_h; ++y) {
        const double fy = detail::align_corners_coord(y, target_h, img.height);
        const int y0 = static_cast<int>(std::floor(fy));
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double ty = fy - y0;
        for (int x = 0; x < target_w; ++x) {
            const double fx = detail::align_corners_coord(x, target_w, img.width);
            const int x0 = static_cast<int>(std::floor(fx));
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double tx = fx - x0;
            const double top = (1.0 - tx) * img.at(x0, y0) + tx * img.at(x1, y0);
            const double bot = (1.0 - tx) * img.at(x0, y1) + tx * img.at(x1, y1);
            out.at(x, y) = clamp_to_byte((1.0 - ty) * top + ty * bot);
        }
    }
    return out;
}

/// Nearest-neighbor resize for masks (stays binary), same corner-aligned grid.
inline BinaryMask resize(const BinaryMask& mask, int target_w, int target_h) {
    if (target_w <= 0 || target_h <= 0)
        raise(ErrorCode::InvalidDimensions, "resize target must be positive");
    BinaryMask out(target_w, target_h);
    for (int y = 0; y < target_h; ++y) {
        int sy = round_half_up(detail::align_corners_coord(y, target_h, mask.height));
        sy = std::clamp(sy, 0, mask.height - 1);
        for (int x = 0; x < target_w; ++x) {
            int sx = round_half_up(detail::align_corners_coord(x, target_w, mask.width));
            sx = std::clamp(sx, 0, mask.width - 1);
            out.set(x, y, mask.at(sx, sy));
        }
    }
    return out;
}

/// Morphological dilation with a (2r+1)x(2r+1) square structuring element.
inline BinaryMask dilate(const BinaryMask& mask, int radius = 1) {
    if (radius < 0) raise(ErrorCode::InvalidDimensions, "dilation radius must be >= 0");
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            const int ylo = std::max(0, y - radius), yhi = std::min(mask.height - 1, y + radius);
            const int xlo = std::max(0, x - radius), xhi = std::min(mask.width - 1, x + radius);
            for (int yy = ylo; yy <= yhi; ++yy)
                for (int xx = xlo; xx <= xhi; ++xx) out.set(xx, yy, true);
        }
    }
    return out;
}

}  // namespace steato
