// SPDX-License-Identifier: Apache-2.0
// Command-line front end: phantom generation, annotation rasterization, the
// classification pipeline, parameter sweeps, mask-source comparison, and PCA
// export.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "steato/steato.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- helpers ---

json metrics_json(const steato::MetricSet& m) {
    return json{{"accuracy", m.accuracy},
                {"precision", m.precision},
                {"recall", m.recall},
                {"f1", m.f1},
                {"kappa", m.kappa}};
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) { return steato::detail::format_double(v); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) steato::raise(steato::ErrorCode::IoError, "cannot open '" + path + "' for writing");
    f << text;
    if (!f) steato::raise(steato::ErrorCode::IoError, "failed writing '" + path + "'");
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) steato::raise(steato::ErrorCode::IoError, "cannot create directory '" + dir + "'");
}

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
    std::vector<int> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            steato::raise(steato::ErrorCode::ParseError,
                          std::string("invalid ") + what + " entry '" + item + "'");
        }
    }
    if (out.empty()) steato::raise(steato::ErrorCode::InvalidConfig, std::string(what) + " list is empty");
    return out;
}

// ------------------------------------------------------------- run options ---

struct PipelineOpts {
    std::string manifest;
    std::string out_dir;
    std::string methods = "kmeans,knn,logreg,svm-linear,svm-rbf";
    int patch_size = 3;
    int fat_depth = 20;
    int bins = 32;
    int cv_folds = 5;
    std::uint64_t seed = 0;
    int knn_k = 5;
    double logreg_lambda = 1e-2;
    double logreg_lr = 0.1;
    int logreg_iters = 2000;
    double svm_c = 1.0;
    double svm_gamma = 0.0;  // 0 selects 1/d
    double svm_tol = 1e-3;
    int svm_max_passes = 10;

    steato::ExtractionConfig extraction() const {
        steato::ExtractionConfig cfg{patch_size, fat_depth, bins};
        cfg.validate();
        return cfg;
    }

    std::vector<steato::ClassifierSpec> classifier_specs() const {
        std::vector<steato::ClassifierSpec> specs;
        std::string item;
        std::istringstream in(methods);
        while (std::getline(in, item, ',')) {
            if (item.empty()) continue;
            steato::ClassifierSpec spec;
            spec.kind = steato::method_from_name(item);
            spec.knn_k = knn_k;
            spec.logreg_lambda = logreg_lambda;
            spec.logreg_lr = logreg_lr;
            spec.logreg_iters = logreg_iters;
            spec.svm_c = svm_c;
            spec.svm_gamma = svm_gamma;
            spec.svm_tol = svm_tol;
            spec.svm_max_passes = svm_max_passes;
            spec.seed = seed;
            spec.validate();
            specs.push_back(spec);
        }
        if (specs.empty()) steato::raise(steato::ErrorCode::InvalidConfig, "method list is empty");
        return specs;
    }

    json config_json(const char* command) const {
        json methods_list = json::array();
        for (const auto& spec : classifier_specs()) methods_list.push_back(steato::method_name(spec.kind));
        return json{{"command", command},
                    {"manifest", manifest},
                    {"patch_size", patch_size},
                    {"fat_depth", fat_depth},
                    {"bins", bins},
                    {"cv_folds", cv_folds},
                    {"seed", seed},
                    {"methods", methods_list},
                    {"hyperparameters",
                     json{{"knn_k", knn_k},
                          {"logreg_lambda", logreg_lambda},
                          {"logreg_lr", logreg_lr},
                          {"logreg_iters", logreg_iters},
                          {"svm_c", svm_c},
                          {"svm_gamma", svm_gamma},
                          {"svm_tol", svm_tol},
                          {"svm_max_passes", svm_max_passes}}},
                    {"std_convention", "population"}};
    }
};

void add_extraction_flags(CLI::App* cmd, PipelineOpts& o) {
    cmd->add_option("--patch-size", o.patch_size, "Patch edge length s in pixels");
    cmd->add_option("--fat-depth", o.fat_depth, "Fat band depth below the vein in pixels");
    cmd->add_option("--bins", o.bins, "Histogram bin count (must divide 256)");
}

void add_pipeline_flags(CLI::App* cmd, PipelineOpts& o) {
    cmd->add_option("--manifest", o.manifest, "Patient manifest CSV")->required();
    cmd->add_option("--out", o.out_dir, "Output directory")->required();
    add_extraction_flags(cmd, o);
    cmd->add_option("--methods", o.methods,
                    "Comma list: kmeans,knn,logreg,svm-linear,svm-rbf");
    cmd->add_option("--cv-folds", o.cv_folds, "Stratified cross-validation fold count");
    cmd->add_option("--seed", o.seed, "Root seed for all randomized steps");
    cmd->add_option("--knn-k", o.knn_k, "KNN neighbour count");
    cmd->add_option("--logreg-lambda", o.logreg_lambda, "Logistic regression L2 weight");
    cmd->add_option("--logreg-lr", o.logreg_lr, "Logistic regression learning rate");
    cmd->add_option("--logreg-iters", o.logreg_iters, "Logistic regression iterations");
    cmd->add_option("--svm-c", o.svm_c, "SVM box constraint C");
    cmd->add_option("--svm-gamma", o.svm_gamma, "RBF gamma (0 = 1/d)");
    cmd->add_option("--svm-tol", o.svm_tol, "SMO KKT tolerance");
    cmd->add_option("--svm-max-passes", o.svm_max_passes, "SMO no-change passes before stopping");
}

std::vector<steato::PatientData> load_cohort(const std::string& manifest) {
    const auto records = steato::load_manifest(manifest);
    const std::string base = fs::path(manifest).parent_path().string();
    return steato::load_patients(records, base);
}

// ---------------------------------------------------------- model exports ---

json scaler_json(const steato::Scaler& sc) {
    return json{{"mean", sc.mu}, {"std", sc.sigma}};
}

json model_json(const steato::FittedClassifier& fc, const steato::Scaler& sc) {
    json j{{"scaler", scaler_json(sc)}};
    switch (fc.kind) {
        case steato::MethodKind::KMeans:
            j["kind"] = "kmeans";
            j["centroids"] = fc.kmeans.centroids;
            j["fatty_cluster"] = fc.kmeans.fatty_cluster;
            j["inertia"] = fc.kmeans.inertia;
            break;
        case steato::MethodKind::Knn:
            j["kind"] = "knn";
            j["k"] = fc.knn_k;
            j["train_x"] = fc.knn_x;
            j["train_y"] = fc.knn_y;
            break;
        case steato::MethodKind::LogReg:
            j["kind"] = "logreg";
            j["weights"] = fc.logreg.w;
            j["bias"] = fc.logreg.b;
            break;
        case steato::MethodKind::SvmLinear:
        case steato::MethodKind::SvmRbf: {
            j["kind"] = steato::method_name(fc.kind);
            j["kernel"] = fc.svm.kernel == steato::KernelKind::Rbf ? "rbf" : "linear";
            j["gamma"] = fc.svm.gamma;
            j["C"] = fc.svm.c;
            j["bias"] = fc.svm.b;
            j["converged"] = fc.svm.converged;
            json svs = json::array(), coefs = json::array();
            for (std::size_t i = 0; i < fc.svm.alpha.size(); ++i) {
                if (fc.svm.alpha[i] <= 0.0) continue;
                svs.push_back(fc.svm.x[i]);
                coefs.push_back(fc.svm.alpha[i] * fc.svm.sign[i]);
            }
            j["support_vectors"] = svs;
            j["coefficients"] = coefs;
            break;
        }
    }
    return j;
}

// ------------------------------------------------------------- subcommands ---

int cmd_phantom(const std::string& out_dir, steato::CohortSpec cohort) {
    ensure_dir(out_dir);
    const auto records = steato::generate_cohort(cohort, out_dir);
    json j{{"command", "phantom"},
           {"out", out_dir},
           {"cases", records.size()},
           {"n_normal", cohort.n_normal},
           {"n_fatty", cohort.n_fatty},
           {"seed", cohort.seed}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_rasterize(const std::string& annotations, int width, int height,
                  const std::string& out_dir, const std::string& id) {
    ensure_dir(out_dir);
    const auto polys = steato::load_annotations(annotations);
    steato::BinaryMask pancreas(width, height), vein(width, height);
    bool saw_pancreas = false, saw_vein = false;
    for (const auto& poly : polys) {
        const steato::BinaryMask m = steato::rasterize_polygon(poly, width, height);
        auto& target = poly.structure == steato::Structure::Pancreas ? pancreas : vein;
        (poly.structure == steato::Structure::Pancreas ? saw_pancreas : saw_vein) = true;
        for (std::size_t i = 0; i < m.data.size(); ++i)
            if (m.data[i]) target.data[i] = 1;
    }
    if (!saw_pancreas)
        steato::raise(steato::ErrorCode::MissingMask, "no pancreas annotation in '" + annotations + "'");
    if (!saw_vein)
        steato::raise(steato::ErrorCode::MissingMask,
                      "no splenic_vein annotation in '" + annotations + "'");
    const std::string p_path = (fs::path(out_dir) / (id + "_pancreas.png")).string();
    const std::string v_path = (fs::path(out_dir) / (id + "_vein.png")).string();
    steato::save_mask(pancreas, p_path);
    steato::save_mask(vein, v_path);
    json j{{"command", "rasterize"},
           {"pancreas_mask", p_path},
           {"vein_mask", v_path},
           {"pancreas_pixels", pancreas.count()},
           {"vein_pixels", vein.count()}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_classify(const PipelineOpts& o, bool dump_patches) {
    ensure_dir(o.out_dir);
    const auto cfg = o.extraction();
    const auto specs = o.classifier_specs();
    const auto patients = load_cohort(o.manifest);
    const steato::PipelineDataset pd = steato::build_dataset(patients, cfg);
    const steato::Dataset labeled = pd.labeled_subset();

    json report;
    report["config"] = o.config_json("classify");
    json per_patient = json::object();
    std::size_t labeled_count = 0;
    for (std::size_t i = 0; i < pd.ids.size(); ++i) {
        per_patient[pd.ids[i]] =
            json{{"label", pd.labels[i] ? steato::label_name(*pd.labels[i]) : ""},
                 {"n_fat", pd.n_fat[i]},
                 {"n_pancreas", pd.n_pancreas[i]},
                 {"delta_mu", pd.delta_mu[i]}};
        if (pd.labels[i]) ++labeled_count;
    }
    report["patients"] = json{{"total", patients.size()},
                              {"evaluated", pd.ids.size()},
                              {"labeled", labeled_count},
                              {"skipped", pd.skipped},
                              {"per_patient", per_patient}};

    json methods = json::object();
    for (const auto& spec : specs) {
        json entry;
        try {
            if (spec.kind == steato::MethodKind::KMeans) {
                // Unsupervised protocol: cluster every evaluated patient, score
                // against the labeled subset.
                entry["protocol"] = "unsupervised";
                if (pd.X.empty()) steato::raise(steato::ErrorCode::EmptyDataset, "no evaluable patients");
                const steato::Scaler sc = steato::fit_scaler(pd.X);
                std::vector<double> raw_col0(pd.X.size());
                for (std::size_t i = 0; i < pd.X.size(); ++i) raw_col0[i] = pd.X[i][0];
                const auto fc = steato::fit_classifier(spec, steato::apply_scaler(sc, pd.X), {}, raw_col0);
                json preds = json::object();
                std::vector<int> y_true, y_pred;
                for (std::size_t i = 0; i < pd.X.size(); ++i) {
                    const int pred = fc.kmeans.assignments[i] == fc.kmeans.fatty_cluster ? 1 : 0;
                    preds[pd.ids[i]] = steato::label_name(static_cast<steato::Label>(pred));
                    if (pd.labels[i]) {
                        y_true.push_back(static_cast<int>(*pd.labels[i]));
                        y_pred.push_back(pred);
                    }
                }
                entry["predictions"] = preds;
                if (!y_true.empty()) {
                    const auto c = steato::confusion(y_true, y_pred);
                    entry["confusion"] =
                        json{{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
                    entry["metrics"] = metrics_json(steato::metrics(c));
                }
                write_text((fs::path(o.out_dir) / "model_kmeans.json").string(),
                           model_json(fc, sc).dump(2) + "\n");
            } else {
                entry["protocol"] = "stratified-cv";
                const auto cv = steato::cross_validate(labeled, spec, o.cv_folds, o.seed);
                json folds = json::array();
                bool converged = true;
                for (const auto& fold : cv.folds) {
                    json ids = json::array();
                    for (std::size_t i : fold.test_indices) ids.push_back(labeled.ids[i]);
                    folds.push_back(json{{"test_ids", ids}, {"metrics", metrics_json(fold.metrics)}});
                    if (fold.model.kind == steato::MethodKind::SvmLinear ||
                        fold.model.kind == steato::MethodKind::SvmRbf)
                        converged = converged && fold.model.svm.converged;
                }
                entry["folds"] = folds;
                entry["mean"] = metrics_json(cv.mean);
                entry["std"] = metrics_json(cv.stdev);

                // Final model on all labeled rows: exported, and used for the
                // prediction column over every evaluated patient.
                const steato::Scaler sc = steato::fit_scaler(labeled.X);
                steato::ClassifierSpec final_spec = spec;
                const auto fc = steato::fit_classifier(final_spec, steato::apply_scaler(sc, labeled.X),
                                                       labeled.y, {});
                if (fc.kind == steato::MethodKind::SvmLinear || fc.kind == steato::MethodKind::SvmRbf)
                    converged = converged && fc.svm.converged;
                entry["converged"] = converged;
                json preds = json::object();
                for (std::size_t i = 0; i < pd.X.size(); ++i) {
                    const int pred = fc.predict(steato::apply_scaler(sc, pd.X[i]));
                    preds[pd.ids[i]] = steato::label_name(static_cast<steato::Label>(pred));
                }
                entry["predictions"] = preds;
                write_text((fs::path(o.out_dir) /
                            ("model_" + std::string(steato::method_name(spec.kind)) + ".json"))
                               .string(),
                           model_json(fc, sc).dump(2) + "\n");
            }
        } catch (const steato::Error& e) {
            entry["error"] = e.what();
        }
        methods[steato::method_name(spec.kind)] = entry;
    }
    report["methods"] = methods;

    steato::save_patient_vectors(pd, (fs::path(o.out_dir) / "patient_vectors.csv").string());
    if (dump_patches) {
        std::ofstream pf((fs::path(o.out_dir) / "patch_features.csv").string(), std::ios::binary);
        if (!pf) steato::raise(steato::ErrorCode::IoError, "cannot write patch_features.csv");
        steato::write_patch_feature_header(pf, cfg.histogram_bins);
        ensure_dir((fs::path(o.out_dir) / "patches").string());
        for (const auto& p : patients) {
            const auto r = steato::compute_patient_vector(p, cfg, true);
            if (!r.ok) continue;
            steato::save_patch_features(p.id, r.pancreas_patches, cfg.histogram_bins, pf);
            steato::save_patch_features(p.id, r.fat_patches, cfg.histogram_bins, pf);
            json dump{{"patient_id", p.id},
                      {"config",
                       json{{"s", cfg.patch_size}, {"delta", cfg.fat_depth}, {"bins", cfg.histogram_bins}}}};
            json panc = json::array(), fat = json::array();
            for (const auto& patch : r.pancreas_patches) panc.push_back(json{{"x", patch.x}, {"y", patch.y}});
            for (const auto& patch : r.fat_patches) fat.push_back(json{{"x", patch.x}, {"y", patch.y}});
            dump["pancreas_patches"] = panc;
            dump["fat_patches"] = fat;
            write_text((fs::path(o.out_dir) / "patches" / (p.id + ".json")).string(),
                       dump.dump(2) + "\n");
        }
    }

    write_text((fs::path(o.out_dir) / "report.json").string(), report.dump(2) + "\n");
    std::cout << "report written to " << (fs::path(o.out_dir) / "report.json").string() << "\n";
    return 0;
}

int cmd_gridsearch(const PipelineOpts& o, const std::string& s_list, const std::string& d_list,
                   const std::string& b_list) {
    ensure_dir(o.out_dir);
    const auto specs = o.classifier_specs();
    const auto patients = load_cohort(o.manifest);
    const auto s_grid = parse_int_list(s_list, "patch size");
    const auto d_grid = parse_int_list(d_list, "fat depth");
    const auto b_grid = parse_int_list(b_list, "bin count");
    const auto results = steato::grid_search(patients, s_grid, d_grid, b_grid, specs, o.seed, o.cv_folds);

    json cells = json::array();
    std::ostringstream csv;
    csv << "s,delta,bins,method,protocol,accuracy,precision,recall,f1,kappa,accuracy_std,"
           "patients_evaluated,patients_skipped,error\n";
    for (const auto& r : results) {
        json cell{{"config",
                   json{{"patch_size", r.config.patch_size},
                        {"fat_depth", r.config.fat_depth},
                        {"bins", r.config.histogram_bins}}},
                  {"patients_evaluated", r.patients_evaluated},
                  {"patients_skipped", r.patients_skipped}};
        if (!r.error.empty()) cell["error"] = r.error;
        json per_method = json::object();
        for (const auto& m : r.methods) {
            json entry{{"protocol", m.protocol}};
            if (m.error.empty()) {
                entry["metrics"] = metrics_json(m.metrics);
                entry["metrics_std"] = metrics_json(m.metrics_std);
            } else {
                entry["error"] = m.error;
            }
            per_method[steato::method_name(m.method)] = entry;
            csv << r.config.patch_size << ',' << r.config.fat_depth << ','
                << r.config.histogram_bins << ',' << steato::method_name(m.method) << ','
                << m.protocol << ',';
            if (m.error.empty())
                csv << format_double(m.metrics.accuracy) << ',' << format_double(m.metrics.precision)
                    << ',' << format_double(m.metrics.recall) << ',' << format_double(m.metrics.f1)
                    << ',' << format_double(m.metrics.kappa) << ','
                    << format_double(m.metrics_std.accuracy);
            else
                csv << ",,,,,";
            csv << ',' << r.patients_evaluated << ',' << r.patients_skipped.size() << ','
                << csv_quote(m.error) << "\n";
        }
        cell["methods"] = per_method;
        cells.push_back(cell);
        if (!r.error.empty())
            csv << r.config.patch_size << ',' << r.config.fat_depth << ',' << r.config.histogram_bins
                << ",,,,,,,,," << r.patients_evaluated << ',' << r.patients_skipped.size() << ','
                << csv_quote(r.error) << "\n";
    }
    json report{{"config", o.config_json("gridsearch")},
                {"grid",
                 json{{"patch_sizes", s_grid}, {"fat_depths", d_grid}, {"bins", b_grid}}},
                {"cells", cells}};
    write_text((fs::path(o.out_dir) / "grid.json").string(), report.dump(2) + "\n");
    write_text((fs::path(o.out_dir) / "grid.csv").string(), csv.str());
    std::cout << results.size() << " grid cells written to " << o.out_dir << "\n";
    return 0;
}

int cmd_compare_masks(const PipelineOpts& o, const std::string& manifest_b, int dilate_b) {
    ensure_dir(o.out_dir);
    const auto cfg = o.extraction();
    const auto specs = o.classifier_specs();
    const auto patients = load_cohort(o.manifest);

    steato::MaskSource source_a, source_b;
    for (const auto& p : patients) source_a[p.id] = steato::MaskSet{p.pancreas, p.vein};
    if (!manifest_b.empty()) {
        for (const auto& p : load_cohort(manifest_b))
            source_b[p.id] = steato::MaskSet{p.pancreas, p.vein};
    } else {
        for (const auto& p : patients)
            source_b[p.id] = steato::MaskSet{steato::dilate(p.pancreas, dilate_b),
                                             steato::dilate(p.vein, dilate_b)};
    }
    const auto rows =
        steato::compare_mask_sources(patients, source_a, source_b, cfg, specs, o.seed, o.cv_folds);

    json table = json::array();
    std::ostringstream csv;
    csv << "method,accuracy_a,accuracy_b,accuracy_delta,f1_a,f1_b,f1_delta,error\n";
    for (const auto& r : rows) {
        json row{{"method", steato::method_name(r.method)}};
        if (r.error.empty()) {
            row["source_a"] = metrics_json(r.source_a);
            row["source_b"] = metrics_json(r.source_b);
            row["accuracy_delta"] = r.accuracy_delta;
            row["f1_delta"] = r.f1_delta;
            csv << steato::method_name(r.method) << ',' << format_double(r.source_a.accuracy) << ','
                << format_double(r.source_b.accuracy) << ',' << format_double(r.accuracy_delta)
                << ',' << format_double(r.source_a.f1) << ',' << format_double(r.source_b.f1) << ','
                << format_double(r.f1_delta) << ",\n";
        } else {
            row["error"] = r.error;
            csv << steato::method_name(r.method) << ",,,,,,," << csv_quote(r.error) << "\n";
        }
        table.push_back(row);
    }
    json report{{"config", o.config_json("compare-masks")},
                {"source_b", manifest_b.empty() ? "dilate:" + std::to_string(dilate_b) : manifest_b},
                {"comparison", table}};
    write_text((fs::path(o.out_dir) / "mask_comparison.json").string(), report.dump(2) + "\n");
    write_text((fs::path(o.out_dir) / "mask_comparison.csv").string(), csv.str());
    std::cout << "comparison written to " << o.out_dir << "\n";
    return 0;
}

int cmd_pca(const PipelineOpts& o, int components) {
    ensure_dir(o.out_dir);
    const auto cfg = o.extraction();
    const auto patients = load_cohort(o.manifest);
    const steato::PipelineDataset pd = steato::build_dataset(patients, cfg);
    if (pd.X.empty()) steato::raise(steato::ErrorCode::EmptyDataset, "no evaluable patients");
    const steato::Scaler sc = steato::fit_scaler(pd.X);
    const auto res = steato::pca_project(steato::apply_scaler(sc, pd.X), components);

    std::ostringstream csv;
    for (int c = 0; c < components; ++c)
        csv << "# variance_explained_pc" << (c + 1) << ','
            << format_double(res.variance_explained[static_cast<std::size_t>(c)]) << "\n";
    csv << "patient_id,label";
    for (int c = 0; c < components; ++c) csv << ",pc" << (c + 1);
    csv << "\n";
    for (std::size_t i = 0; i < pd.ids.size(); ++i) {
        csv << pd.ids[i] << ',' << (pd.labels[i] ? steato::label_name(*pd.labels[i]) : "");
        for (int c = 0; c < components; ++c)
            csv << ',' << format_double(res.projections[i][static_cast<std::size_t>(c)]);
        csv << "\n";
    }
    write_text((fs::path(o.out_dir) / "pca.csv").string(), csv.str());
    std::cout << "pca projection written to " << o.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ultrasound fatty-pancreas classification pipeline"};
    app.require_subcommand(1);
    // Key-value config file; keys live in a [subcommand] section and lose to
    // explicit command-line flags. Unknown keys are an error.
    app.set_config("--config", "", "INI config file with a [subcommand] section; flags win");
    app.allow_config_extras(CLI::config_extras_mode::error);

    // phantom
    auto* phantom = app.add_subcommand("phantom", "Generate a synthetic speckle cohort");
    std::string phantom_out;
    steato::CohortSpec cohort;
    phantom->add_option("--out", phantom_out, "Output directory")->required();
    phantom->add_option("--n-normal", cohort.n_normal, "Normal case count");
    phantom->add_option("--n-fatty", cohort.n_fatty, "Fatty case count");
    phantom->add_option("--dmu-normal", cohort.dmu_normal, "Fat/pancreas contrast for normal cases");
    phantom->add_option("--dmu-fatty", cohort.dmu_fatty, "Fat/pancreas contrast for fatty cases");
    phantom->add_option("--speckle", cohort.base.speckle_scale, "Multiplicative noise sigma");
    phantom->add_option("--grain", cohort.base.texture_grain, "Speckle correlation length, pixels");
    phantom->add_option("--width", cohort.base.width, "Frame width");
    phantom->add_option("--height", cohort.base.height, "Frame height");
    phantom->add_option("--seed", cohort.seed, "Cohort seed");

    // rasterize
    auto* rasterize = app.add_subcommand("rasterize", "Rasterize polygon annotations to masks");
    std::string annotations, raster_out, raster_id = "case";
    int raster_w = 256, raster_h = 256;
    rasterize->add_option("--annotations", annotations, "Annotation JSON file")->required();
    rasterize->add_option("--width", raster_w, "Mask width");
    rasterize->add_option("--height", raster_h, "Mask height");
    rasterize->add_option("--out", raster_out, "Output directory")->required();
    rasterize->add_option("--id", raster_id, "Output file prefix");

    // classify
    auto* classify = app.add_subcommand("classify", "Run the full pipeline with cross-validation");
    PipelineOpts classify_opts;
    bool dump_patches = false;
    add_pipeline_flags(classify, classify_opts);
    classify->add_flag("--dump-patches", dump_patches, "Write per-patch features and origin dumps");

    // gridsearch
    auto* grid = app.add_subcommand("gridsearch", "Sweep extraction parameters");
    PipelineOpts grid_opts;
    std::string s_list = "3,5,7,10,15", d_list = "10,15,20,30,40,50", b_list = "8,16,32";
    add_pipeline_flags(grid, grid_opts);
    grid->add_option("--patch-sizes", s_list, "Comma list of patch sizes");
    grid->add_option("--fat-depths", d_list, "Comma list of fat band depths");
    grid->add_option("--bins-list", b_list, "Comma list of histogram bin counts");

    // compare-masks
    auto* cmp = app.add_subcommand("compare-masks", "Re-run the pipeline under two mask sources");
    PipelineOpts cmp_opts;
    std::string manifest_b;
    int dilate_b = 1;
    add_pipeline_flags(cmp, cmp_opts);
    cmp->add_option("--manifest-b", manifest_b, "Second mask source manifest");
    cmp->add_option("--dilate-b", dilate_b,
                    "Synthesize source B by dilating source A masks this many pixels");

    // pca
    auto* pca = app.add_subcommand("pca", "Project patient vectors onto principal components");
    PipelineOpts pca_opts;
    int components = 2;
    pca->add_option("--manifest", pca_opts.manifest, "Patient manifest CSV")->required();
    pca->add_option("--out", pca_opts.out_dir, "Output directory")->required();
    add_extraction_flags(pca, pca_opts);
    pca->add_option("--components", components, "Component count");
    pca->add_option("--seed", pca_opts.seed, "Root seed");

    for (auto* sub : {phantom, rasterize, classify, grid, cmp, pca}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (phantom->parsed()) return cmd_phantom(phantom_out, cohort);
        if (rasterize->parsed())
            return cmd_rasterize(annotations, raster_w, raster_h, raster_out, raster_id);
        if (classify->parsed()) return cmd_classify(classify_opts, dump_patches);
        if (grid->parsed()) return cmd_gridsearch(grid_opts, s_list, d_list, b_list);
        if (cmp->parsed()) return cmd_compare_masks(cmp_opts, manifest_b, dilate_b);
        if (pca->parsed()) return cmd_pca(pca_opts, components);
    } catch (const steato::Error& e) {
        json j{{"error",
                json{{"code", steato::error_code_name(e.code())},
                     {"message", e.raw_message()},
                     {"patient", e.patient()},
                     {"stage", e.stage()}}}};
        std::cerr << j.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        json j{{"error", json{{"code", "Internal"}, {"message", e.what()}}}};
        std::cerr << j.dump() << "\n";
        return 1;
    }
    return 0;
}
