// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "steato/eval.hpp"
#include "steato/phantom.hpp"
#include "steato/rng.hpp"

using namespace steato;

namespace {

Dataset separable_dataset(int per_class, std::size_t d, double sep, std::uint64_t seed) {
    Rng rng(seed);
    Dataset ds;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < per_class; ++i) {
            std::vector<double> x(d);
            for (auto& e : x) e = c * sep + rng.uniform(-0.5, 0.5);
            ds.X.push_back(x);
            ds.y.push_back(c);
            ds.ids.push_back("p" + std::to_string(ds.ids.size()));
        }
    return ds;
}

CohortSpec small_cohort(int per_class, std::uint64_t seed) {
    CohortSpec c;
    c.n_normal = per_class;
    c.n_fatty = per_class;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("confusion counts quadrant examples") {
    const ConfusionCounts c = confusion({1, 1, 0, 0, 1}, {1, 0, 0, 1, 1});
    CHECK(c.tp == 2);
    CHECK(c.fn == 1);
    CHECK(c.tn == 1);
    CHECK(c.fp == 1);
    CHECK(c.total() == 5);

    CHECK_THROWS_MATCHES(confusion({1, 0}, {1}), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::LengthMismatch; }));
}

TEST_CASE("confusion matches direct counting on random label vectors") {
    Rng rng(1234);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 1 + rng.uniform_index(60);
        std::vector<int> yt(n), yp(n);
        for (std::size_t i = 0; i < n; ++i) {
            yt[i] = static_cast<int>(rng.uniform_index(2));
            yp[i] = static_cast<int>(rng.uniform_index(2));
        }
        long long tp = 0, fp = 0, fn = 0, tn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (yt[i] == 1 && yp[i] == 1) ++tp;
            if (yt[i] == 0 && yp[i] == 1) ++fp;
            if (yt[i] == 1 && yp[i] == 0) ++fn;
            if (yt[i] == 0 && yp[i] == 0) ++tn;
        }
        const ConfusionCounts c = confusion(yt, yp);
        CHECK(c.tp == tp);
        CHECK(c.fp == fp);
        CHECK(c.fn == fn);
        CHECK(c.tn == tn);
    }
}

TEST_CASE("metrics on hand-checked confusions") {
    SECTION("perfect predictions score 1 everywhere") {
        const MetricSet m = metrics(ConfusionCounts{10, 0, 0, 10});
        CHECK(m.accuracy == 1.0);
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
        CHECK(m.f1 == 1.0);
        CHECK(m.kappa == 1.0);
    }
    SECTION("predicting one class on balanced labels has zero kappa") {
        // 10 positives, 10 negatives, everything predicted positive
        const MetricSet m = metrics(ConfusionCounts{10, 10, 0, 0});
        CHECK(m.accuracy == Catch::Approx(0.5));
        CHECK(m.kappa == Catch::Approx(0.0).margin(1e-15));
    }
    SECTION("107-patient confusion reproduces the agreement statistics") {
        // tp=45 fp=5 fn=6 tn=51: accuracy 96/107, kappa (po-pe)/(1-pe) with
        // pe = (50*51 + 57*56)/107^2, which reduces to 4530/5707.
        const MetricSet m = metrics(ConfusionCounts{45, 5, 6, 51});
        CHECK(m.accuracy == Catch::Approx(96.0 / 107.0).margin(1e-12));
        CHECK(m.kappa == Catch::Approx(4530.0 / 5707.0).margin(1e-12));
        CHECK(m.precision == Catch::Approx(45.0 / 50.0).margin(1e-12));
        CHECK(m.recall == Catch::Approx(45.0 / 51.0).margin(1e-12));
    }
    SECTION("empty confusion is an error") {
        CHECK_THROWS_MATCHES(metrics(ConfusionCounts{}), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::EmptyConfusion;
                             }));
    }
}

TEST_CASE("stratified folds balance both classes to within one") {
    std::vector<int> y(107, 0);
    for (std::size_t i = 0; i < 53; ++i) y[i] = 1;
    const FoldAssignment fa = stratified_kfold(y, 5, 7);
    REQUIRE(fa.folds.size() == 5);
    for (const auto& fold : fa.folds) {
        std::size_t pos = 0, neg = 0;
        for (std::size_t i : fold) (y[i] == 1 ? pos : neg)++;
        CHECK((pos == 10 || pos == 11));
        CHECK((neg == 10 || neg == 11));
    }
}

TEST_CASE("folds partition the index range") {
    Rng rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 12 + rng.uniform_index(80);
        std::vector<int> y(n);
        for (auto& e : y) e = static_cast<int>(rng.uniform_index(2));
        const int k = 2 + static_cast<int>(rng.uniform_index(4));
        const auto pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
        if (pos < static_cast<std::size_t>(k) || n - pos < static_cast<std::size_t>(k)) continue;
        const FoldAssignment fa = stratified_kfold(y, k, rep);
        std::set<std::size_t> seen;
        for (const auto& fold : fa.folds)
            for (std::size_t i : fold) {
                CHECK(seen.insert(i).second);  // disjoint
                CHECK(i < n);
            }
        CHECK(seen.size() == n);  // complete coverage
    }
}

TEST_CASE("fold assignment is deterministic in the seed") {
    std::vector<int> y(40);
    for (std::size_t i = 0; i < 20; ++i) y[i] = 1;
    const FoldAssignment a = stratified_kfold(y, 5, 11);
    const FoldAssignment b = stratified_kfold(y, 5, 11);
    CHECK(a.folds == b.folds);
    const FoldAssignment c = stratified_kfold(y, 5, 12);
    CHECK(a.folds != c.folds);
}

TEST_CASE("single fold holds the whole labeled set") {
    std::vector<int> y{1, 0, 1, 0, 1, 0};
    const FoldAssignment fa = stratified_kfold(y, 1, 0);
    REQUIRE(fa.folds.size() == 1);
    CHECK(fa.folds[0] == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("too few members of a class refuses to fold") {
    std::vector<int> y{1, 1, 0, 0, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_MATCHES(stratified_kfold(y, 5, 0), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::TooFewPerClass; }));
}

TEST_CASE("cross-validation is perfect on well-separated blobs") {
    const Dataset ds = separable_dataset(15, 4, 12.0, 555);
    for (MethodKind kind :
         {MethodKind::Knn, MethodKind::LogReg, MethodKind::SvmLinear, MethodKind::SvmRbf}) {
        ClassifierSpec spec;
        spec.kind = kind;
        const CVResult cv = cross_validate(ds, spec, 5, 3);
        INFO(method_name(kind));
        CHECK(cv.mean.accuracy == Catch::Approx(1.0));
        CHECK(cv.mean.f1 == Catch::Approx(1.0));
        CHECK(cv.stdev.accuracy == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(cv.folds.size() == 5);
    }
}

TEST_CASE("cross-validation equals a manual replay through the public api") {
    Rng rng(2024);
    Dataset ds;
    for (int i = 0; i < 24; ++i) {
        std::vector<double> x(5);
        for (auto& e : x) e = rng.uniform(-2.0, 2.0);
        ds.X.push_back(x);
        ds.y.push_back(i % 2);
        ds.ids.push_back("r" + std::to_string(i));
    }
    ClassifierSpec spec;
    spec.kind = MethodKind::LogReg;
    spec.seed = 31;
    const int k = 4;
    const std::uint64_t seed = 17;
    const CVResult cv = cross_validate(ds, spec, k, seed);

    const FoldAssignment fa = stratified_kfold(ds.y, k, seed);
    REQUIRE(cv.folds.size() == fa.folds.size());
    for (std::size_t f = 0; f < fa.folds.size(); ++f) {
        CHECK(cv.folds[f].test_indices == fa.folds[f]);
        std::vector<char> is_test(ds.size(), 0);
        for (std::size_t i : fa.folds[f]) is_test[i] = 1;
        Matrix x_train;
        std::vector<int> y_train;
        std::vector<double> raw;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (is_test[i]) continue;
            x_train.push_back(ds.X[i]);
            y_train.push_back(ds.y[i]);
            raw.push_back(ds.X[i][0]);
        }
        const Scaler sc = fit_scaler(x_train);
        CHECK(sc.mu == cv.folds[f].scaler.mu);
        CHECK(sc.sigma == cv.folds[f].scaler.sigma);
        ClassifierSpec fold_spec = spec;
        fold_spec.seed = derive_seed(spec.seed, f);
        const FittedClassifier fc = fit_classifier(fold_spec, apply_scaler(sc, x_train), y_train, raw);
        CHECK(fc.logreg.w == cv.folds[f].model.logreg.w);
        CHECK(fc.logreg.b == cv.folds[f].model.logreg.b);
        std::vector<int> y_true, y_pred;
        for (std::size_t i : fa.folds[f]) {
            y_true.push_back(ds.y[i]);
            y_pred.push_back(fc.predict(apply_scaler(sc, ds.X[i])));
        }
        const MetricSet m = metrics(confusion(y_true, y_pred));
        CHECK(m.accuracy == cv.folds[f].metrics.accuracy);
        CHECK(m.kappa == cv.folds[f].metrics.kappa);
    }
}

TEST_CASE("held-out rows never influence the fold's scaler or model") {
    Rng rng(808);
    Dataset ds;
    for (int i = 0; i < 20; ++i) {
        std::vector<double> x(4);
        for (auto& e : x) e = rng.uniform(-1.0, 1.0);
        ds.X.push_back(x);
        ds.y.push_back(i % 2);
    }
    ClassifierSpec spec;
    spec.kind = MethodKind::LogReg;
    const CVResult before = cross_validate(ds, spec, 4, 9);
    // corrupt one test row of fold 0 by a large offset
    const std::size_t victim = before.folds[0].test_indices.front();
    Dataset mutated = ds;
    for (auto& e : mutated.X[victim]) e += 1000.0;
    const CVResult after = cross_validate(mutated, spec, 4, 9);
    // fold 0 trained without the victim: identical parameters required
    CHECK(before.folds[0].scaler.mu == after.folds[0].scaler.mu);
    CHECK(before.folds[0].scaler.sigma == after.folds[0].scaler.sigma);
    CHECK(before.folds[0].model.logreg.w == after.folds[0].model.logreg.w);
    CHECK(before.folds[0].model.logreg.b == after.folds[0].model.logreg.b);
    // a fold that trains on the victim must differ
    bool some_other_changed = false;
    for (std::size_t f = 1; f < after.folds.size(); ++f)
        if (after.folds[f].model.logreg.w != before.folds[f].model.logreg.w)
            some_other_changed = true;
    CHECK(some_other_changed);
}

TEST_CASE("unlabeled data cannot be cross-validated") {
    Dataset ds;
    ds.X = {{1.0}, {2.0}};
    ClassifierSpec spec;
    spec.kind = MethodKind::Knn;
    CHECK_THROWS_MATCHES(cross_validate(ds, spec, 2, 0), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::EmptyDataset; }));
}

TEST_CASE("grid search visits every axis combination once") {
    const auto cases = generate_cohort_cases(small_cohort(4, 21));
    const auto patients = to_patient_data(cases);
    ClassifierSpec km;
    km.kind = MethodKind::KMeans;
    const auto grid = grid_search(patients, {3, 5}, {15, 20, 30}, {8, 16}, {km}, 2);
    REQUIRE(grid.size() == 2 * 3 * 2);
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& cell : grid) {
        seen.insert({cell.config.patch_size, cell.config.fat_depth, cell.config.histogram_bins});
        CHECK(cell.error.empty());
        REQUIRE(cell.methods.size() == 1);
        CHECK(cell.patients_evaluated + cell.patients_skipped.size() == patients.size());
    }
    CHECK(seen.size() == grid.size());
}

TEST_CASE("a one-cell grid equals the direct pipeline run") {
    const auto cases = generate_cohort_cases(small_cohort(4, 33));
    const auto patients = to_patient_data(cases);
    ClassifierSpec km;
    km.kind = MethodKind::KMeans;
    const std::uint64_t seed = 6;
    const auto grid = grid_search(patients, {3}, {20}, {32}, {km}, seed);
    REQUIRE(grid.size() == 1);
    REQUIRE(grid[0].error.empty());

    const ExtractionConfig cfg{3, 20, 32};
    const Dataset ds = build_dataset(patients, cfg).labeled_subset();
    const MethodOutcome direct = evaluate_method(ds, km, 5, seed);
    REQUIRE(grid[0].methods.size() == 1);
    CHECK(grid[0].methods[0].metrics.accuracy == direct.metrics.accuracy);
    CHECK(grid[0].methods[0].metrics.kappa == direct.metrics.kappa);
    CHECK(grid[0].patients_evaluated == ds.size());
}

TEST_CASE("an invalid grid cell records its error without aborting the sweep") {
    const auto cases = generate_cohort_cases(small_cohort(4, 44));
    const auto patients = to_patient_data(cases);
    ClassifierSpec km;
    km.kind = MethodKind::KMeans;
    // 24 is not an accepted histogram resolution; that cell must fail alone
    const auto grid = grid_search(patients, {3}, {20}, {24, 8}, {km}, 1);
    REQUIRE(grid.size() == 2);
    CHECK_FALSE(grid[0].error.empty());
    CHECK(grid[1].error.empty());
}

TEST_CASE("identical mask sources produce exactly zero deltas") {
    const auto cases = generate_cohort_cases(small_cohort(4, 55));
    const auto patients = to_patient_data(cases);
    MaskSource src;
    for (const auto& p : patients) src[p.id] = MaskSet{p.pancreas, p.vein};
    ClassifierSpec km;
    km.kind = MethodKind::KMeans;
    const auto rows = compare_mask_sources(patients, src, src, ExtractionConfig{}, {km}, 5);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].error.empty());
    CHECK(rows[0].accuracy_delta == 0.0);
    CHECK(rows[0].f1_delta == 0.0);
    CHECK(rows[0].source_a.accuracy == rows[0].source_b.accuracy);
}

TEST_CASE("a patient missing from a mask source is reported by name") {
    const auto cases = generate_cohort_cases(small_cohort(2, 66));
    const auto patients = to_patient_data(cases);
    MaskSource full, partial;
    for (const auto& p : patients) full[p.id] = MaskSet{p.pancreas, p.vein};
    partial = full;
    partial.erase(patients.back().id);
    ClassifierSpec km;
    km.kind = MethodKind::KMeans;
    try {
        compare_mask_sources(patients, full, partial, ExtractionConfig{}, {km}, 0);
        FAIL("expected MissingMask");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingMask);
        CHECK(std::string(e.what()).find(patients.back().id) != std::string::npos);
    }
}

TEST_CASE("pca recovers a one-dimensional subspace") {
    Rng rng(31415);
    Matrix X;
    const std::vector<double> dir{1.0, -2.0, 0.5};
    for (int i = 0; i < 30; ++i) {
        const double t = rng.uniform(-5.0, 5.0);
        X.push_back({t * dir[0], t * dir[1], t * dir[2]});
    }
    const PcaResult res = pca_project(X, 2);
    CHECK(res.variance_explained[0] == Catch::Approx(1.0).margin(1e-8));
    CHECK(res.variance_explained[1] == Catch::Approx(0.0).margin(1e-8));
    // loading is the unit direction, sign-fixed to a positive first entry
    const double norm = std::sqrt(1.0 + 4.0 + 0.25);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(res.components[0][j] == Catch::Approx(dir[j] / norm).margin(1e-6));
}

TEST_CASE("pca on isotropic data splits variance evenly") {
    Rng rng(2020);
    Matrix X;
    for (int i = 0; i < 2000; ++i) X.push_back({rng.normal(), rng.normal()});
    const PcaResult res = pca_project(X, 2);
    CHECK(res.variance_explained[0] + res.variance_explained[1] == Catch::Approx(1.0).margin(1e-9));
    CHECK(res.variance_explained[0] == Catch::Approx(0.5).margin(0.05));
}

TEST_CASE("pca matches a jacobi eigensolver on random data") {
    Rng rng(112358);
    const std::size_t n = 20, d = 6;
    Matrix X(n, std::vector<double>(d));
    for (auto& row : X)
        for (auto& e : row) e = rng.uniform(-3.0, 3.0);

    // population covariance of centered data
    std::vector<double> mu(d, 0.0);
    for (const auto& row : X)
        for (std::size_t j = 0; j < d; ++j) mu[j] += row[j] / static_cast<double>(n);
    std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
    for (const auto& row : X)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                cov[a][b] += (row[a] - mu[a]) * (row[b] - mu[b]) / static_cast<double>(n);
    std::vector<double> eigvals;
    std::vector<std::vector<double>> eigvecs;
    oracle::jacobi_eigen(cov, eigvals, eigvecs);

    const int comps = 3;
    const PcaResult res = pca_project(X, comps);
    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a) trace += cov[a][a];
    for (int c = 0; c < comps; ++c) {
        CHECK(res.eigenvalues[static_cast<std::size_t>(c)] ==
              Catch::Approx(eigvals[static_cast<std::size_t>(c)]).margin(1e-6));
        CHECK(res.variance_explained[static_cast<std::size_t>(c)] ==
              Catch::Approx(eigvals[static_cast<std::size_t>(c)] / trace).margin(1e-9));
        // align oracle eigenvector to the library sign convention: first
        // nonzero entry positive
        std::vector<double> v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = eigvecs[j][static_cast<std::size_t>(c)];
        for (std::size_t j = 0; j < d; ++j)
            if (std::fabs(v[j]) > 1e-12) {
                if (v[j] < 0.0)
                    for (auto& e : v) e = -e;
                break;
            }
        for (std::size_t j = 0; j < d; ++j)
            CHECK(res.components[static_cast<std::size_t>(c)][j] == Catch::Approx(v[j]).margin(1e-6));
    }
    SECTION("explained variance is sorted and bounded") {
        for (std::size_t c = 1; c < res.variance_explained.size(); ++c)
            CHECK(res.variance_explained[c] <= res.variance_explained[c - 1] + 1e-12);
        double sum = 0.0;
        for (double v : res.variance_explained) sum += v;
        CHECK(sum <= 1.0 + 1e-9);
    }
}

TEST_CASE("pca rejects degenerate inputs") {
    Matrix constant(5, std::vector<double>(3, 2.0));
    CHECK_THROWS_MATCHES(pca_project(constant, 2), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::DegenerateData; }));
    Matrix one{{1.0, 2.0}};
    CHECK_THROWS_MATCHES(pca_project(one, 1), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::TooFewSamples; }));
    Matrix ok{{1.0, 2.0}, {3.0, 4.0}};
    CHECK_THROWS_MATCHES(pca_project(ok, 5), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::InvalidConfig; }));
}
