// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "steato/error.hpp"
#include "steato/image.hpp"

namespace steato {

enum class TissueRegion { Pancreas, Fat };

inline const char* tissue_region_name(TissueRegion r) {
    return r == TissueRegion::Pancreas ? "pancreas" : "fat";
}

/// Extraction parameters: patch size s, fat band depth delta, histogram bins B.
struct ExtractionConfig {
    int patch_size = 3;      // s, pixels
    int fat_depth = 20;      // delta, pixels below the vein bottom contour
    int histogram_bins = 32; // B, must divide 256

    void validate() const {
        if (patch_size < 1) raise(ErrorCode::InvalidConfig, "patch_size must be >= 1");
        if (fat_depth < 1) raise(ErrorCode::InvalidConfig, "fat_depth must be >= 1");
        if (histogram_bins < 1 || histogram_bins > 256 || 256 % histogram_bins != 0)
            raise(ErrorCode::InvalidBinCount, "histogram_bins must divide 256");
    }
};

/// An s x s pixel block tagged with its anatomical region. Pixels are stored
/// row-major.
struct Patch {
    int x = 0;  // top-left corner
    int y = 0;
    int size = 0;
    TissueRegion region = TissueRegion::Pancreas;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int px, int py) const { return pixels[static_cast<std::size_t>(py) * size + px]; }
};

namespace detail {

inline void require_same_dims(const GrayImage& img, const BinaryMask& m, const char* what) {
    if (img.width != m.width || img.height != m.height)
        raise(ErrorCode::DimensionMismatch, std::string(what) + " mask does not match image size");
}

inline Patch cut_patch(const GrayImage& img, int ox, int oy, int s, TissueRegion region) {
    Patch p;
    p.x = ox;
    p.y = oy;
    p.size = s;
    p.region = region;
    p.pixels.resize(static_cast<std::size_t>(s) * s);
    for (int dy = 0; dy < s; ++dy)
        for (int dx = 0; dx < s; ++dx)
            p.pixels[static_cast<std::size_t>(dy) * s + dx] = img.at(ox + dx, oy + dy);
    return p;
}

// Non-overlapping grid of stride s anchored at the top-left corner of the
// anchor mask's bounding box. A patch is emitted iff every pixel passes the
// accept predicate. Row-major emission order keeps extraction deterministic.
template <typename Accept>
std::vector<Patch> grid_extract(const GrayImage& img, const BinaryMask& anchor, int s,
                                TissueRegion region, Accept&& accept) {
    std::vector<Patch> out;
    const auto bb = bounding_box(anchor);
    if (!bb) return out;
    for (int oy = bb->y0; oy <= bb->y1 && oy + s <= img.height; oy += s) {
        for (int ox = bb->x0; ox <= bb->x1 && ox + s <= img.width; ox += s) {
            bool ok = true;
            for (int dy = 0; dy < s && ok; ++dy)
                for (int dx = 0; dx < s && ok; ++dx) ok = accept(ox + dx, oy + dy);
            if (ok) out.push_back(cut_patch(img, ox, oy, s, region));
        }
    }
    return out;
}

}  // namespace detail

/// All non-overlapping s x s patches fully inside the pancreas mask and fully
/// outside the splenic vein mask.
inline std::vector<Patch> pancreas_patches(const GrayImage& img, const BinaryMask& pancreas,
                                           const BinaryMask& vein, const ExtractionConfig& cfg) {
    cfg.validate();
    detail::require_same_dims(img, pancreas, "pancreas");
    detail::require_same_dims(img, vein, "vein");
    return detail::grid_extract(img, pancreas, cfg.patch_size, TissueRegion::Pancreas,
                                [&](int x, int y) { return pancreas.at(x, y) && !vein.at(x, y); });
}

/// Peri-venous fat band: for every column x that contains a vein pixel, the
/// pixels strictly below the bottom-most vein pixel down to depth delta,
/// clipped to the frame.
inline BinaryMask fat_region(const BinaryMask& vein, int delta) {
    if (delta < 1) raise(ErrorCode::InvalidConfig, "fat depth must be >= 1");
    BinaryMask out(vein.width, vein.height);
    bool any_vein = false;
    for (int x = 0; x < vein.width; ++x) {
        int y_bottom = -1;
        for (int y = vein.height - 1; y >= 0; --y) {
            if (vein.at(x, y)) {
                y_bottom = y;
                break;
            }
        }
        if (y_bottom < 0) continue;
        any_vein = true;
        const int y_end = std::min(vein.height - 1, y_bottom + delta);
        for (int y = y_bottom + 1; y <= y_end; ++y) out.set(x, y, true);
    }
    if (!any_vein) raise(ErrorCode::EmptyVeinMask, "vein mask has no pixels");
    return out;
}

/// All non-overlapping s x s patches fully inside the fat band and fully
/// outside both the pancreas and vein masks.
inline std::vector<Patch> fat_patches(const GrayImage& img, const BinaryMask& region,
                                      const BinaryMask& pancreas, const BinaryMask& vein,
                                      const ExtractionConfig& cfg) {
    cfg.validate();
    detail::require_same_dims(img, region, "fat region");
    detail::require_same_dims(img, pancreas, "pancreas");
    detail::require_same_dims(img, vein, "vein");
    return detail::grid_extract(
        img, region, cfg.patch_size, TissueRegion::Fat,
        [&](int x, int y) { return region.at(x, y) && !pancreas.at(x, y) && !vein.at(x, y); });
}

}  // namespace steato
