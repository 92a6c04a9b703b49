// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "steato/error.hpp"
#include "steato/learners.hpp"
#include "steato/manifest.hpp"
#include "steato/parallel.hpp"
#include "steato/patches.hpp"
#include "steato/patientvec.hpp"
#include "steato/png_io.hpp"
#include "steato/texture.hpp"

namespace steato {

/// One patient's rasters, ready for extraction.
struct PatientData {
    std::string id;
    std::optional<Label> label;
    GrayImage image;
    BinaryMask pancreas;
    BinaryMask vein;
};

namespace detail {

inline std::string resolve_path(const std::string& base_dir, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

// Rethrows a library error with the patient id and pipeline stage attached.
template <typename Fn>
auto patient_stage(const std::string& id, const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.code(), e.raw_message(), id, stage);
    }
}

}  // namespace detail

/// Loads one patient's image and masks. Relative manifest paths resolve
/// against `base_dir` (normally the manifest's directory).
inline PatientData load_patient(const PatientRecord& rec, const std::string& base_dir) {
    PatientData p;
    p.id = rec.patient_id;
    p.label = rec.label;
    p.image = detail::patient_stage(rec.patient_id, "load-image", [&] {
        return load_gray_image(detail::resolve_path(base_dir, rec.image_path));
    });
    p.pancreas = detail::patient_stage(rec.patient_id, "load-pancreas-mask", [&] {
        return load_mask(detail::resolve_path(base_dir, rec.pancreas_mask_path));
    });
    p.vein = detail::patient_stage(rec.patient_id, "load-vein-mask", [&] {
        return load_mask(detail::resolve_path(base_dir, rec.vein_mask_path));
    });
    detail::patient_stage(rec.patient_id, "validate-dimensions", [&] {
        if (p.pancreas.width != p.image.width || p.pancreas.height != p.image.height ||
            p.vein.width != p.image.width || p.vein.height != p.image.height)
            raise(ErrorCode::DimensionMismatch, "mask dimensions do not match image");
        return 0;
    });
    return p;
}

inline std::vector<PatientData> load_patients(const std::vector<PatientRecord>& records,
                                              const std::string& base_dir) {
    std::vector<PatientData> out(records.size());
    // Decoding is independent per patient; errors propagate from the worker.
    parallel_for(records.size(), [&](std::size_t i) { out[i] = load_patient(records[i], base_dir); });
    return out;
}

/// Output of the per-patient pipeline. `ok` is false when either region
/// produced zero patches, which skips the patient rather than failing.
struct PatientVectorResult {
    bool ok = false;
    std::vector<double> vec;  // length 14 + B when ok
    std::size_t n_fat = 0;
    std::size_t n_pancreas = 0;
    double delta_mu = 0.0;  // defined when ok
    std::vector<Patch> fat_patches;       // retained only when keep_patches
    std::vector<Patch> pancreas_patches;  // retained only when keep_patches
};

/// Runs extraction, texture description, per-patient standardization,
/// distance computation, and aggregation for one patient.
inline PatientVectorResult compute_patient_vector(const PatientData& p, const ExtractionConfig& cfg,
                                                  bool keep_patches = false) {
    PatientVectorResult r;
    auto panc = detail::patient_stage(p.id, "extract-pancreas-patches", [&] {
        return pancreas_patches(p.image, p.pancreas, p.vein, cfg);
    });
    auto fat = detail::patient_stage(p.id, "extract-fat-patches", [&] {
        const BinaryMask band = fat_region(p.vein, cfg.fat_depth);
        return fat_patches(p.image, band, p.pancreas, p.vein, cfg);
    });
    r.n_fat = fat.size();
    r.n_pancreas = panc.size();
    if (fat.empty() || panc.empty()) return r;

    r.delta_mu = delta_mu(fat, panc);
    auto fat_f = detail::patient_stage(p.id, "texture-features", [&] {
        return batch_features(fat, cfg.histogram_bins);
    });
    auto panc_f = detail::patient_stage(p.id, "texture-features", [&] {
        return batch_features(panc, cfg.histogram_bins);
    });
    detail::patient_stage(p.id, "aggregate", [&] {
        standardize_patient(fat_f, panc_f);
        const DistanceMatrix dm = distance_matrix(fat_f, panc_f);
        r.vec = aggregate_patient_vector(dm, fat_f, panc_f);
        return 0;
    });
    r.ok = true;
    if (keep_patches) {
        r.fat_patches = std::move(fat);
        r.pancreas_patches = std::move(panc);
    }
    return r;
}

/// A cohort's patient vectors plus bookkeeping for skipped patients.
struct PipelineDataset {
    Matrix X;                                   // rows follow `ids`
    std::vector<std::optional<Label>> labels;   // per row
    std::vector<std::string> ids;               // evaluated patients
    std::vector<std::string> skipped;           // zero fat or pancreas patches
    std::vector<std::size_t> n_fat;             // per row
    std::vector<std::size_t> n_pancreas;        // per row
    std::vector<double> delta_mu;               // per row

    /// Rows that carry a label, as a learner-facing Dataset.
    Dataset labeled_subset() const {
        Dataset ds;
        for (std::size_t i = 0; i < X.size(); ++i) {
            if (!labels[i]) continue;
            ds.X.push_back(X[i]);
            ds.y.push_back(static_cast<int>(*labels[i]));
            ds.ids.push_back(ids[i]);
        }
        return ds;
    }
};

/// Computes patient vectors for a cohort, recording rather than failing on
/// patients whose regions yield no patches.
inline PipelineDataset build_dataset(const std::vector<PatientData>& patients,
                                     const ExtractionConfig& cfg) {
    std::vector<PatientVectorResult> results(patients.size());
    parallel_for(patients.size(), [&](std::size_t i) {
        results[i] = compute_patient_vector(patients[i], cfg);
    });
    PipelineDataset out;
    for (std::size_t i = 0; i < patients.size(); ++i) {
        if (!results[i].ok) {
            out.skipped.push_back(patients[i].id);
            continue;
        }
        out.X.push_back(std::move(results[i].vec));
        out.labels.push_back(patients[i].label);
        out.ids.push_back(patients[i].id);
        out.n_fat.push_back(results[i].n_fat);
        out.n_pancreas.push_back(results[i].n_pancreas);
        out.delta_mu.push_back(results[i].delta_mu);
    }
    return out;
}

// --- exporters ----------------------------------------------------------------

namespace detail {

// Shortest text that round-trips a double; stable across runs.
inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace detail

/// CSV: patient_id,label,g0..g{13+B}. Unlabeled patients carry an empty label
/// field.
inline void save_patient_vectors(const PipelineDataset& ds, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    const std::size_t d = ds.X.empty() ? 0 : ds.X.front().size();
    f << "patient_id,label";
    for (std::size_t j = 0; j < d; ++j) f << ",g" << j;
    f << "\n";
    for (std::size_t i = 0; i < ds.X.size(); ++i) {
        f << ds.ids[i] << ',' << (ds.labels[i] ? label_name(*ds.labels[i]) : "");
        for (double v : ds.X[i]) f << ',' << detail::format_double(v);
        f << "\n";
    }
    if (!f) raise(ErrorCode::IoError, "failed writing '" + path + "'");
}

/// CSV: patient_id,region,x,y,f0..f{5+B}, one row per patch.
inline void save_patch_features(const std::string& patient_id, const std::vector<Patch>& patches,
                                int bins, std::ofstream& f) {
    for (const auto& p : patches) {
        const auto feats = patch_features(p, bins);
        f << patient_id << ',' << tissue_region_name(p.region) << ',' << p.x << ',' << p.y;
        for (double v : feats) f << ',' << detail::format_double(v);
        f << "\n";
    }
}

inline void write_patch_feature_header(std::ofstream& f, int bins) {
    f << "patient_id,region,x,y";
    for (int j = 0; j < 6 + bins; ++j) f << ",f" << j;
    f << "\n";
}

}  // namespace steato
