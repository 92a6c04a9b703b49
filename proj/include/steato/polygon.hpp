// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "steato/error.hpp"
#include "steato/image.hpp"

namespace steato {

enum class Structure { Pancreas, SplenicVein };

inline const char* structure_name(Structure s) {
    return s == Structure::Pancreas ? "pancreas" : "splenic_vein";
}

inline Structure structure_from_name(const std::string& name) {
    if (name == "pancreas") return Structure::Pancreas;
    if (name == "splenic_vein") return Structure::SplenicVein;
    raise(ErrorCode::ParseError, "unknown structure '" + name + "'");
}

struct Vertex {
    double x = 0.0;
    double y = 0.0;
};

/// Expert polygon annotation for one structure, sub-pixel coordinates.
struct PolygonAnnotation {
    Structure structure = Structure::Pancreas;
    std::vector<Vertex> vertices;
};

namespace detail {

inline bool on_segment(double px, double py, const Vertex& a, const Vertex& b) {
    const double cross = (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
    if (cross != 0.0) return false;
    const double dot = (px - a.x) * (b.x - a.x) + (py - a.y) * (b.y - a.y);
    const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    return dot >= 0.0 && dot <= len2;
}

// Even-odd crossing parity of a +x ray from (px, py). Centers sitting exactly
// on an edge are handled by the separate on_segment test.
inline bool crossing_parity(double px, double py, const std::vector<Vertex>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vertex& a = poly[j];
        const Vertex& b = poly[i];
        if ((a.y > py) != (b.y > py)) {
            const double x_int = a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y);
            if (px < x_int) inside = !inside;
        }
    }
    return inside;
}

inline bool all_collinear(const std::vector<Vertex>& poly) {
    for (std::size_t i = 2; i < poly.size(); ++i) {
        const double cross = (poly[i - 1].x - poly[0].x) * (poly[i].y - poly[0].y) -
                             (poly[i - 1].y - poly[0].y) * (poly[i].x - poly[0].x);
        if (cross != 0.0) return false;
    }
    return true;
}

}  // namespace detail

/// Rasterize a polygon onto a width x height grid. A pixel (x, y) is set iff
/// its center (x+0.5, y+0.5) is inside under the even-odd rule; centers
/// exactly on the boundary count as inside. A zero-area (fully collinear)
/// polygon rasterizes to an empty mask. Vertices are clamped to the frame.
inline BinaryMask rasterize_polygon(const PolygonAnnotation& poly, int width, int height) {
    if (width <= 0 || height <= 0)
        raise(ErrorCode::InvalidDimensions, "raster dimensions must be positive");
    if (poly.vertices.size() < 3)
        raise(ErrorCode::InvalidPolygon, "polygon needs at least 3 vertices");

    std::vector<Vertex> v = poly.vertices;
    for (auto& p : v) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            raise(ErrorCode::InvalidPolygon, "non-finite polygon coordinate");
        p.x = std::clamp(p.x, 0.0, static_cast<double>(width));
        p.y = std::clamp(p.y, 0.0, static_cast<double>(height));
    }

    BinaryMask mask(width, height);
    if (detail::all_collinear(v)) return mask;

    double min_x = v[0].x, max_x = v[0].x, min_y = v[0].y, max_y = v[0].y;
    for (const auto& p : v) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const int x_lo = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
    const int x_hi = std::min(width - 1, static_cast<int>(std::ceil(max_x)));
    const int y_lo = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
    const int y_hi = std::min(height - 1, static_cast<int>(std::ceil(max_y)));

    for (int y = y_lo; y <= y_hi; ++y) {
        const double py = y + 0.5;
        for (int x = x_lo; x <= x_hi; ++x) {
            const double px = x + 0.5;
            bool inside = detail::crossing_parity(px, py, v);
            if (!inside) {
                const std::size_t n = v.size();
                for (std::size_t i = 0, j = n - 1; i < n && !inside; j = i++) {
                    inside = detail::on_segment(px, py, v[j], v[i]);
                }
            }
            if (inside) mask.set(x, y, true);
        }
    }
    return mask;
}

}  // namespace steato
