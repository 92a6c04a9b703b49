// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "steato/error.hpp"
#include "steato/learners.hpp"
#include "steato/parallel.hpp"
#include "steato/pipeline.hpp"
#include "steato/rng.hpp"
#include "steato/stats.hpp"

namespace steato {

// --- metrics -------------------------------------------------------------------

/// Binary confusion counts with Fatty = 1 as the positive class.
struct ConfusionCounts {
    long long tp = 0, fp = 0, fn = 0, tn = 0;
    long long total() const { return tp + fp + fn + tn; }
};

inline ConfusionCounts confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size())
        raise(ErrorCode::LengthMismatch, "prediction count does not match label count");
    ConfusionCounts c;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1)
            y_pred[i] == 1 ? ++c.tp : ++c.fn;
        else
            y_pred[i] == 1 ? ++c.fp : ++c.tn;
    }
    return c;
}

struct MetricSet {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double kappa = 0.0;
};

/// Standard binary metrics. Precision/recall/F1 fall back to 0 on an empty
/// denominator; Cohen's κ uses marginal-product chance agreement with the
/// degenerate case p_e = 1 mapping to 1 when agreement is perfect, else 0.
inline MetricSet metrics(const ConfusionCounts& c) {
    const double n = static_cast<double>(c.total());
    if (c.total() <= 0) raise(ErrorCode::EmptyConfusion, "confusion counts are empty");
    MetricSet m;
    m.accuracy = static_cast<double>(c.tp + c.tn) / n;
    m.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    m.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                        : 0.0;
    const double po = m.accuracy;
    const double pe = (static_cast<double>(c.tp + c.fp) * static_cast<double>(c.tp + c.fn) +
                       static_cast<double>(c.fn + c.tn) * static_cast<double>(c.fp + c.tn)) /
                      (n * n);
    if (pe >= 1.0)
        m.kappa = po >= 1.0 ? 1.0 : 0.0;
    else
        m.kappa = (po - pe) / (1.0 - pe);
    return m;
}

// --- cross-validation ------------------------------------------------------------

/// k disjoint index lists covering all labeled rows, class-balanced to within
/// one member.
struct FoldAssignment {
    std::vector<std::vector<std::size_t>> folds;
};

/// Shuffles each class separately with a seed-derived stream and deals the
/// indices round-robin into k folds.
inline FoldAssignment stratified_kfold(const std::vector<int>& y, int k, std::uint64_t seed) {
    if (k < 1) raise(ErrorCode::InvalidConfig, "fold count must be >= 1");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);
    if (pos.size() < static_cast<std::size_t>(k) || neg.size() < static_cast<std::size_t>(k))
        raise(ErrorCode::TooFewPerClass, "each class needs at least k members");
    FoldAssignment fa;
    fa.folds.assign(static_cast<std::size_t>(k), {});
    int which = 0;
    for (auto* cls : {&pos, &neg}) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(which++)));
        rng.shuffle(*cls);
        for (std::size_t i = 0; i < cls->size(); ++i)
            fa.folds[i % static_cast<std::size_t>(k)].push_back((*cls)[i]);
    }
    for (auto& fold : fa.folds) std::sort(fold.begin(), fold.end());
    return fa;
}

/// One held-out fold's outcome. Scaler and model are retained so leakage can
/// be audited after the fact.
struct FoldOutcome {
    std::vector<std::size_t> test_indices;
    MetricSet metrics;
    Scaler scaler;
    FittedClassifier model;
};

struct CVResult {
    std::vector<FoldOutcome> folds;
    MetricSet mean;
    MetricSet stdev;  // population std across folds
};

namespace detail {

inline MetricSet fold_mean(const std::vector<FoldOutcome>& folds) {
    MetricSet m;
    for (const auto& f : folds) {
        m.accuracy += f.metrics.accuracy;
        m.precision += f.metrics.precision;
        m.recall += f.metrics.recall;
        m.f1 += f.metrics.f1;
        m.kappa += f.metrics.kappa;
    }
    const double k = static_cast<double>(folds.size());
    m.accuracy /= k;
    m.precision /= k;
    m.recall /= k;
    m.f1 /= k;
    m.kappa /= k;
    return m;
}

inline MetricSet fold_stdev(const std::vector<FoldOutcome>& folds, const MetricSet& mean) {
    MetricSet v;
    for (const auto& f : folds) {
        v.accuracy += (f.metrics.accuracy - mean.accuracy) * (f.metrics.accuracy - mean.accuracy);
        v.precision += (f.metrics.precision - mean.precision) * (f.metrics.precision - mean.precision);
        v.recall += (f.metrics.recall - mean.recall) * (f.metrics.recall - mean.recall);
        v.f1 += (f.metrics.f1 - mean.f1) * (f.metrics.f1 - mean.f1);
        v.kappa += (f.metrics.kappa - mean.kappa) * (f.metrics.kappa - mean.kappa);
    }
    const double k = static_cast<double>(folds.size());
    v.accuracy = std::sqrt(v.accuracy / k);
    v.precision = std::sqrt(v.precision / k);
    v.recall = std::sqrt(v.recall / k);
    v.f1 = std::sqrt(v.f1 / k);
    v.kappa = std::sqrt(v.kappa / k);
    return v;
}

}  // namespace detail

/// Per-fold protocol: scaler and classifier are fit on training rows only;
/// held-out rows are scored with them. K-Means identifies its fatty cluster
/// from training members and assigns held-out rows by nearest centroid.
inline CVResult cross_validate(const Dataset& ds, const ClassifierSpec& spec, int k,
                               std::uint64_t seed) {
    ds.validate();
    if (!ds.labeled()) raise(ErrorCode::EmptyDataset, "cross-validation needs labels");
    const FoldAssignment fa = stratified_kfold(ds.y, k, seed);
    CVResult cv;
    cv.folds.resize(fa.folds.size());
    for (std::size_t f = 0; f < fa.folds.size(); ++f) {
        std::vector<char> is_test(ds.size(), 0);
        for (std::size_t i : fa.folds[f]) is_test[i] = 1;
        Matrix x_train;
        std::vector<int> y_train;
        std::vector<double> raw_col0;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (is_test[i]) continue;
            x_train.push_back(ds.X[i]);
            y_train.push_back(ds.y[i]);
            raw_col0.push_back(ds.X[i][0]);
        }
        FoldOutcome out;
        out.test_indices = fa.folds[f];
        out.scaler = fit_scaler(x_train);
        ClassifierSpec fold_spec = spec;
        fold_spec.seed = derive_seed(spec.seed, f);
        out.model = fit_classifier(fold_spec, apply_scaler(out.scaler, x_train), y_train, raw_col0);
        std::vector<int> y_true, y_pred;
        for (std::size_t i : fa.folds[f]) {
            y_true.push_back(ds.y[i]);
            y_pred.push_back(out.model.predict(apply_scaler(out.scaler, ds.X[i])));
        }
        out.metrics = metrics(confusion(y_true, y_pred));
        cv.folds[f] = std::move(out);
    }
    cv.mean = detail::fold_mean(cv.folds);
    cv.stdev = detail::fold_stdev(cv.folds, cv.mean);
    return cv;
}

// --- whole-cohort evaluation ------------------------------------------------------

/// Outcome of one method on one extraction config. K-Means is evaluated
/// unsupervised over the whole labeled cohort (its natural protocol);
/// supervised methods report stratified CV means. `error` is nonempty when
/// the method could not run.
struct MethodOutcome {
    MethodKind method = MethodKind::KMeans;
    MetricSet metrics;
    MetricSet metrics_std;  // zero for the unsupervised path
    std::string protocol;
    std::string error;
};

inline MethodOutcome evaluate_method(const Dataset& ds, const ClassifierSpec& spec, int cv_k,
                                     std::uint64_t seed) {
    MethodOutcome out;
    out.method = spec.kind;
    try {
        if (spec.kind == MethodKind::KMeans) {
            out.protocol = "unsupervised";
            const Scaler sc = fit_scaler(ds.X);
            ClassifierSpec s = spec;
            s.seed = seed;
            std::vector<double> raw_col0(ds.size());
            for (std::size_t i = 0; i < ds.size(); ++i) raw_col0[i] = ds.X[i][0];
            const FittedClassifier fc = fit_classifier(s, apply_scaler(sc, ds.X), ds.y, raw_col0);
            std::vector<int> y_pred(ds.size());
            for (std::size_t i = 0; i < ds.size(); ++i)
                y_pred[i] = fc.kmeans.assignments[i] == fc.kmeans.fatty_cluster ? 1 : 0;
            out.metrics = metrics(confusion(ds.y, y_pred));
        } else {
            out.protocol = "stratified-cv";
            const CVResult cv = cross_validate(ds, spec, cv_k, seed);
            out.metrics = cv.mean;
            out.metrics_std = cv.stdev;
        }
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

// --- grid search -------------------------------------------------------------------

struct GridResult {
    ExtractionConfig config;
    std::vector<MethodOutcome> methods;
    std::size_t patients_evaluated = 0;
    std::vector<std::string> patients_skipped;
    std::string error;  // nonempty when the whole cell failed
};

/// Re-runs the full pipeline for every (s, δ, B) combination. Per-cell
/// failures are recorded in the result rather than aborting the sweep.
inline std::vector<GridResult> grid_search(const std::vector<PatientData>& patients,
                                           const std::vector<int>& s_grid,
                                           const std::vector<int>& delta_grid,
                                           const std::vector<int>& bins_grid,
                                           const std::vector<ClassifierSpec>& methods,
                                           std::uint64_t seed, int cv_k = 5) {
    if (s_grid.empty() || delta_grid.empty() || bins_grid.empty())
        raise(ErrorCode::InvalidConfig, "grid axes must be nonempty");
    std::vector<ExtractionConfig> cells;
    for (int s : s_grid)
        for (int delta : delta_grid)
            for (int bins : bins_grid) cells.push_back(ExtractionConfig{s, delta, bins});

    std::vector<GridResult> results(cells.size());
    parallel_for(cells.size(), [&](std::size_t c) {
        GridResult r;
        r.config = cells[c];
        try {
            r.config.validate();
            const PipelineDataset pd = build_dataset(patients, r.config);
            const Dataset ds = pd.labeled_subset();
            for (const auto& id : pd.skipped) r.patients_skipped.push_back(id);
            // Unlabeled rows cannot be scored; count evaluated labeled rows.
            r.patients_evaluated = ds.size();
            for (const auto& spec : methods)
                r.methods.push_back(evaluate_method(ds, spec, cv_k, seed));
        } catch (const Error& e) {
            r.error = e.what();
        }
        results[c] = std::move(r);
    });
    return results;
}

// --- mask-source comparison ----------------------------------------------------------

/// Pancreas and vein masks from one annotation source.
struct MaskSet {
    BinaryMask pancreas;
    BinaryMask vein;
};

using MaskSource = std::map<std::string, MaskSet>;

struct MaskComparisonRow {
    MethodKind method = MethodKind::KMeans;
    MetricSet source_a;
    MetricSet source_b;
    double accuracy_delta = 0.0;  // B - A
    double f1_delta = 0.0;
    std::string error;
};

/// Runs the identical pipeline once per mask source and reports per-method
/// metric deltas. Every patient must be covered by both sources.
inline std::vector<MaskComparisonRow> compare_mask_sources(
    const std::vector<PatientData>& patients, const MaskSource& masks_a, const MaskSource& masks_b,
    const ExtractionConfig& cfg, const std::vector<ClassifierSpec>& methods, std::uint64_t seed,
    int cv_k = 5) {
    auto with_masks = [&](const MaskSource& src) {
        std::vector<PatientData> out;
        out.reserve(patients.size());
        for (const auto& p : patients) {
            const auto it = src.find(p.id);
            if (it == src.end())
                raise(ErrorCode::MissingMask, "patient '" + p.id + "' missing from a mask source");
            PatientData q = p;
            q.pancreas = it->second.pancreas;
            q.vein = it->second.vein;
            out.push_back(std::move(q));
        }
        return out;
    };
    const Dataset ds_a = build_dataset(with_masks(masks_a), cfg).labeled_subset();
    const Dataset ds_b = build_dataset(with_masks(masks_b), cfg).labeled_subset();

    std::vector<MaskComparisonRow> rows;
    for (const auto& spec : methods) {
        MaskComparisonRow row;
        row.method = spec.kind;
        const MethodOutcome a = evaluate_method(ds_a, spec, cv_k, seed);
        const MethodOutcome b = evaluate_method(ds_b, spec, cv_k, seed);
        if (!a.error.empty() || !b.error.empty()) {
            row.error = !a.error.empty() ? a.error : b.error;
        } else {
            row.source_a = a.metrics;
            row.source_b = b.metrics;
            row.accuracy_delta = b.metrics.accuracy - a.metrics.accuracy;
            row.f1_delta = b.metrics.f1 - a.metrics.f1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// --- principal component analysis ------------------------------------------------------

struct PcaResult {
    Matrix projections;                      // n × components
    std::vector<double> variance_explained;  // λ_i / trace
    Matrix components;                       // components × d loadings
    std::vector<double> eigenvalues;
};

/// Leading principal components of mean-centered data via power iteration
/// with deflation. Loadings are sign-fixed so the first nonzero entry is
/// positive.
inline PcaResult pca_project(const Matrix& X, int components = 2) {
    if (X.size() < 2) raise(ErrorCode::TooFewSamples, "pca needs at least two rows");
    const std::size_t n = X.size(), d = X.front().size();
    if (components < 1 || static_cast<std::size_t>(components) > d)
        raise(ErrorCode::InvalidConfig, "component count out of range");

    std::vector<double> mu(d, 0.0);
    for (const auto& row : X) {
        if (row.size() != d) raise(ErrorCode::LengthMismatch, "ragged matrix");
        for (std::size_t j = 0; j < d; ++j) mu[j] += row[j];
    }
    for (std::size_t j = 0; j < d; ++j) mu[j] /= static_cast<double>(n);
    Matrix centered(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) centered[i][j] = X[i][j] - mu[j];

    // Population covariance, materialized: d stays small in this pipeline.
    Matrix cov(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) cov[a][b] += centered[i][a] * centered[i][b];
    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            cov[a][b] /= static_cast<double>(n);
            cov[b][a] = cov[a][b];
        }
        trace += cov[a][a];
    }
    if (trace <= 0.0) raise(ErrorCode::DegenerateData, "data has zero total variance");

    constexpr double kTol = 1e-10;
    constexpr int kMaxIters = 10000;
    PcaResult res;
    Rng rng(0x9e3779b97f4a7c15ULL);  // fixed stream: results must not depend on caller state
    for (int comp = 0; comp < components; ++comp) {
        std::vector<double> v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = rng.uniform() - 0.5;
        double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        for (std::size_t j = 0; j < d; ++j) v[j] /= norm;
        std::vector<double> next(d);
        for (int it = 0; it < kMaxIters; ++it) {
            for (std::size_t a = 0; a < d; ++a)
                next[a] = std::inner_product(cov[a].begin(), cov[a].end(), v.begin(), 0.0);
            norm = std::sqrt(std::inner_product(next.begin(), next.end(), next.begin(), 0.0));
            if (norm <= 0.0) break;  // v lies in the null space; eigenvalue 0
            for (std::size_t j = 0; j < d; ++j) next[j] /= norm;
            if (std::inner_product(next.begin(), next.end(), v.begin(), 0.0) < 0.0)
                for (std::size_t j = 0; j < d; ++j) next[j] = -next[j];
            double diff = 0.0;
            for (std::size_t j = 0; j < d; ++j) diff += (next[j] - v[j]) * (next[j] - v[j]);
            v = next;
            if (std::sqrt(diff) < kTol) break;
        }
        double lambda = 0.0;
        for (std::size_t a = 0; a < d; ++a)
            lambda += v[a] * std::inner_product(cov[a].begin(), cov[a].end(), v.begin(), 0.0);
        for (std::size_t j = 0; j < d; ++j)
            if (std::fabs(v[j]) > 1e-12) {
                if (v[j] < 0.0)
                    for (std::size_t t = 0; t < d; ++t) v[t] = -v[t];
                break;
            }
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) cov[a][b] -= lambda * v[a] * v[b];
        res.eigenvalues.push_back(lambda);
        res.variance_explained.push_back(lambda / trace);
        res.components.push_back(v);
    }
    res.projections.assign(n, std::vector<double>(static_cast<std::size_t>(components)));
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < components; ++c)
            res.projections[i][static_cast<std::size_t>(c)] =
                std::inner_product(centered[i].begin(), centered[i].end(),
                                   res.components[static_cast<std::size_t>(c)].begin(), 0.0);
    return res;
}

}  // namespace steato
