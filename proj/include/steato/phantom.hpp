// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "steato/error.hpp"
#include "steato/image.hpp"
#include "steato/manifest.hpp"
#include "steato/parallel.hpp"
#include "steato/pipeline.hpp"
#include "steato/png_io.hpp"
#include "steato/rng.hpp"
#include "steato/stats.hpp"

namespace steato {

struct Ellipse {
    double cx = 0.0, cy = 0.0;  // center, pixel units
    double a = 1.0, b = 1.0;    // semi-axes

    // Pixel-center containment keeps rendering and mask rasterization aligned.
    bool contains_pixel(int x, int y) const {
        const double dx = (static_cast<double>(x) + 0.5 - cx) / a;
        const double dy = (static_cast<double>(y) + 0.5 - cy) / b;
        return dx * dx + dy * dy <= 1.0;
    }
};

/// Geometry and texture parameters of one synthetic case. The defaults place
/// a horizontal pancreas across the upper half of a 256x256 frame with the
/// splenic vein running low through the parenchyma, leaving a retroperitoneal
/// fat band visible below the gland.
struct PhantomSpec {
    int width = 256;
    int height = 256;
    Ellipse pancreas{128.0, 118.0, 92.0, 44.0};
    Ellipse vein{128.0, 148.0, 34.0, 9.0};
    double mu_pancreas = 110.0;
    double mu_fat = 135.0;
    double mu_background = 60.0;
    double speckle_scale = 0.2;  // multiplicative noise sigma
    double texture_grain = 1.5;  // speckle correlation length, pixels

    void validate() const {
        if (width < 1 || height < 1) raise(ErrorCode::InvalidSpec, "frame dimensions must be positive");
        if (pancreas.a <= 0.0 || pancreas.b <= 0.0 || vein.a <= 0.0 || vein.b <= 0.0)
            raise(ErrorCode::InvalidSpec, "semi-axes must be positive");
        for (double mu : {mu_pancreas, mu_fat, mu_background})
            if (mu < 0.0 || mu > 255.0) raise(ErrorCode::InvalidSpec, "mean intensity outside [0,255]");
        if (speckle_scale < 0.0) raise(ErrorCode::InvalidSpec, "speckle scale must be >= 0");
        if (texture_grain < 0.0) raise(ErrorCode::InvalidSpec, "texture grain must be >= 0");
        // Sampled containment check: every vein boundary point must be
        // strictly interior to the pancreas ellipse.
        for (int i = 0; i < 720; ++i) {
            const double t = 2.0 * 3.14159265358979323846 * i / 720.0;
            const double px = vein.cx + vein.a * std::cos(t);
            const double py = vein.cy + vein.b * std::sin(t);
            const double dx = (px - pancreas.cx) / pancreas.a;
            const double dy = (py - pancreas.cy) / pancreas.b;
            if (dx * dx + dy * dy >= 1.0)
                raise(ErrorCode::InvalidSpec, "vein ellipse is not strictly inside the pancreas");
        }
    }
};

/// One generated case with its ground truth.
struct PhantomCase {
    std::string id;
    GrayImage image;
    BinaryMask pancreas_mask;
    BinaryMask vein_mask;
    Label label = Label::Normal;
    double configured_delta_mu = 0.0;  // |mu_pancreas - mu_fat|
};

enum class PhantomRegion : std::uint8_t { Background, Pancreas, Vein, Fat };

/// Region of every pixel, derived from the masks: vein wins inside the
/// pancreas; fat is everything below the bottom-most vein pixel of its column
/// that falls outside the pancreas.
inline std::vector<PhantomRegion> phantom_region_map(const BinaryMask& pancreas,
                                                     const BinaryMask& vein) {
    std::vector<PhantomRegion> map(static_cast<std::size_t>(pancreas.width) * pancreas.height,
                                   PhantomRegion::Background);
    for (int x = 0; x < pancreas.width; ++x) {
        int y_bottom = -1;
        for (int y = pancreas.height - 1; y >= 0; --y)
            if (vein.at(x, y)) {
                y_bottom = y;
                break;
            }
        for (int y = 0; y < pancreas.height; ++y) {
            PhantomRegion r = PhantomRegion::Background;
            if (vein.at(x, y))
                r = PhantomRegion::Vein;
            else if (pancreas.at(x, y))
                r = PhantomRegion::Pancreas;
            else if (y_bottom >= 0 && y > y_bottom)
                r = PhantomRegion::Fat;
            map[static_cast<std::size_t>(y) * pancreas.width + x] = r;
        }
    }
    return map;
}

namespace detail {

// Separable Gaussian blur with replicate edges; sigma below 0.3 px is treated
// as no smoothing.
inline void gaussian_smooth(std::vector<double>& field, int w, int h, double sigma) {
    if (sigma < 0.3) return;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        total += kernel[static_cast<std::size_t>(i + radius)];
    }
    for (double& k : kernel) k /= total;

    std::vector<double> tmp(field.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int sx = std::clamp(x + i, 0, w - 1);
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       field[static_cast<std::size_t>(y) * w + sx];
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    for (int x = 0; x < w; ++x)
        for (int y = 0; y < h; ++y) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int sy = std::clamp(y + i, 0, h - 1);
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       tmp[static_cast<std::size_t>(sy) * w + x];
            }
            field[static_cast<std::size_t>(y) * w + x] = acc;
        }
}

}  // namespace detail

/// Renders one case: region mean intensities modulated by a positive
/// unit-mean multiplicative noise field with stddev speckle_scale, spatially
/// correlated at texture_grain. Deterministic in (spec, seed).
inline PhantomCase generate_phantom(const PhantomSpec& spec, std::uint64_t seed,
                                    Label label = Label::Normal) {
    spec.validate();
    PhantomCase out;
    out.label = label;
    out.configured_delta_mu = std::fabs(spec.mu_pancreas - spec.mu_fat);
    out.pancreas_mask = BinaryMask(spec.width, spec.height);
    out.vein_mask = BinaryMask(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
            if (spec.pancreas.contains_pixel(x, y)) out.pancreas_mask.set(x, y, true);
            if (spec.vein.contains_pixel(x, y)) out.vein_mask.set(x, y, true);
        }
    const auto regions = phantom_region_map(out.pancreas_mask, out.vein_mask);

    const std::size_t n = static_cast<std::size_t>(spec.width) * spec.height;
    std::vector<double> noise(n, 0.0);
    if (spec.speckle_scale > 0.0) {
        Rng rng(seed);
        for (double& v : noise) v = rng.normal();
        detail::gaussian_smooth(noise, spec.width, spec.height, spec.texture_grain);
        const double m = mean_of(noise);
        const double s = population_stddev(noise);
        if (s > 0.0)
            for (double& v : noise) v = std::max(0.0, 1.0 + spec.speckle_scale * (v - m) / s);
        else
            std::fill(noise.begin(), noise.end(), 1.0);
    } else {
        std::fill(noise.begin(), noise.end(), 1.0);
    }

    const double mu_vein = 0.25 * spec.mu_pancreas;
    out.image = GrayImage(spec.width, spec.height);
    for (std::size_t i = 0; i < n; ++i) {
        double mu = spec.mu_background;
        switch (regions[i]) {
            case PhantomRegion::Vein: mu = mu_vein; break;
            case PhantomRegion::Pancreas: mu = spec.mu_pancreas; break;
            case PhantomRegion::Fat: mu = spec.mu_fat; break;
            case PhantomRegion::Background: break;
        }
        out.image.data[i] = clamp_to_byte(mu * noise[i]);
    }
    return out;
}

/// Cohort generation parameters. The contrast Δμ = μ_fat − μ_pancreas is the
/// controlled ground truth: normal cases get the large contrast, fatty cases
/// the small one.
struct CohortSpec {
    int n_normal = 30;
    int n_fatty = 30;
    double dmu_normal = 25.0;
    double dmu_fatty = 5.0;
    PhantomSpec base;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_normal < 1 || n_fatty < 1) raise(ErrorCode::InvalidSpec, "cohort counts must be >= 1");
        if (dmu_fatty < 0.0 || dmu_normal < dmu_fatty)
            raise(ErrorCode::InvalidSpec, "need dmu_normal >= dmu_fatty >= 0");
        base.validate();
    }
};

namespace detail {

// Bounded geometry jitter: semi-axes +-10%, centers +-5%. The vein is placed
// relative to the jittered pancreas so containment survives any draw.
inline PhantomSpec jitter_spec(const PhantomSpec& base, Rng& rng) {
    PhantomSpec s = base;
    s.pancreas.a = base.pancreas.a * rng.uniform(0.9, 1.1);
    s.pancreas.b = base.pancreas.b * rng.uniform(0.9, 1.1);
    s.pancreas.cx = base.pancreas.cx + rng.uniform(-0.05, 0.05) * base.width;
    s.pancreas.cy = base.pancreas.cy + rng.uniform(-0.05, 0.05) * base.height;
    const double ratio_a = base.vein.a / base.pancreas.a;
    const double ratio_b = base.vein.b / base.pancreas.b;
    const double frac_cy = (base.vein.cy - base.pancreas.cy) / base.pancreas.b;
    s.vein.a = ratio_a * s.pancreas.a * rng.uniform(0.9, 1.1);
    s.vein.b = ratio_b * s.pancreas.b * rng.uniform(0.9, 1.1);
    s.vein.cx = s.pancreas.cx + rng.uniform(-0.05, 0.05) * s.vein.a;
    s.vein.cy = s.pancreas.cy + frac_cy * s.pancreas.b * rng.uniform(0.95, 1.05);
    return s;
}

inline std::string case_id(Label label, int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s_%03d", label == Label::Fatty ? "fatty" : "normal", index);
    return buf;
}

}  // namespace detail

/// Generates the cohort in memory: n_normal cases at the large contrast
/// followed by n_fatty cases at the small one, each with jittered geometry
/// and its own noise stream.
inline std::vector<PhantomCase> generate_cohort_cases(const CohortSpec& cohort) {
    cohort.validate();
    const int total = cohort.n_normal + cohort.n_fatty;
    std::vector<PhantomCase> cases(static_cast<std::size_t>(total));
    parallel_for(static_cast<std::size_t>(total), [&](std::size_t i) {
        const bool fatty = static_cast<int>(i) >= cohort.n_normal;
        const Label label = fatty ? Label::Fatty : Label::Normal;
        const int index = fatty ? static_cast<int>(i) - cohort.n_normal : static_cast<int>(i);
        Rng jitter_rng(derive_seed(cohort.seed, 2 * i));
        PhantomSpec spec = detail::jitter_spec(cohort.base, jitter_rng);
        spec.mu_fat = spec.mu_pancreas + (fatty ? cohort.dmu_fatty : cohort.dmu_normal);
        PhantomCase c = generate_phantom(spec, derive_seed(cohort.seed, 2 * i + 1), label);
        c.id = detail::case_id(label, index);
        cases[i] = std::move(c);
    });
    return cases;
}

inline PatientData to_patient_data(const PhantomCase& c) {
    PatientData p;
    p.id = c.id;
    p.label = c.label;
    p.image = c.image;
    p.pancreas = c.pancreas_mask;
    p.vein = c.vein_mask;
    return p;
}

inline std::vector<PatientData> to_patient_data(const std::vector<PhantomCase>& cases) {
    std::vector<PatientData> out;
    out.reserve(cases.size());
    for (const auto& c : cases) out.push_back(to_patient_data(c));
    return out;
}

/// Writes a cohort to `out_dir` in the manifest layout:
/// images/{id}.png, masks/{id}_pancreas.png, masks/{id}_vein.png,
/// manifest.csv. Returns the generated records.
inline std::vector<PatientRecord> generate_cohort(const CohortSpec& cohort,
                                                  const std::string& out_dir) {
    const auto cases = generate_cohort_cases(cohort);
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "images", ec);
    fs::create_directories(fs::path(out_dir) / "masks", ec);
    if (ec) raise(ErrorCode::IoError, "cannot create output directories under '" + out_dir + "'");

    std::vector<PatientRecord> records;
    records.reserve(cases.size());
    for (const auto& c : cases) {
        PatientRecord rec;
        rec.patient_id = c.id;
        rec.image_path = "images/" + c.id + ".png";
        rec.pancreas_mask_path = "masks/" + c.id + "_pancreas.png";
        rec.vein_mask_path = "masks/" + c.id + "_vein.png";
        rec.label = c.label;
        save_gray_image(c.image, (fs::path(out_dir) / rec.image_path).string());
        save_mask(c.pancreas_mask, (fs::path(out_dir) / rec.pancreas_mask_path).string());
        save_mask(c.vein_mask, (fs::path(out_dir) / rec.vein_mask_path).string());
        records.push_back(std::move(rec));
    }
    save_manifest(records, (fs::path(out_dir) / "manifest.csv").string());
    return records;
}

}  // namespace steato
