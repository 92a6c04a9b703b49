// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "steato/error.hpp"
#include "steato/manifest.hpp"
#include "steato/rng.hpp"
#include "steato/stats.hpp"

namespace steato {

using Matrix = std::vector<std::vector<double>>;

/// Patient-level dataset: one row per patient. `y` is empty for unlabeled
/// data, otherwise y[i] ∈ {0,1} with Fatty = 1.
struct Dataset {
    Matrix X;
    std::vector<int> y;
    std::vector<std::string> ids;

    std::size_t size() const { return X.size(); }
    bool labeled() const { return !y.empty(); }

    void validate() const {
        if (!y.empty() && y.size() != X.size())
            raise(ErrorCode::LengthMismatch, "label count does not match row count");
        if (!ids.empty() && ids.size() != X.size())
            raise(ErrorCode::LengthMismatch, "id count does not match row count");
        for (const auto& row : X)
            if (row.size() != X.front().size())
                raise(ErrorCode::LengthMismatch, "ragged feature matrix");
    }
};

enum class MethodKind { KMeans, Knn, LogReg, SvmLinear, SvmRbf };

inline const char* method_name(MethodKind m) {
    switch (m) {
        case MethodKind::KMeans: return "kmeans";
        case MethodKind::Knn: return "knn";
        case MethodKind::LogReg: return "logreg";
        case MethodKind::SvmLinear: return "svm-linear";
        case MethodKind::SvmRbf: return "svm-rbf";
    }
    return "?";
}

inline MethodKind method_from_name(const std::string& s) {
    if (s == "kmeans") return MethodKind::KMeans;
    if (s == "knn") return MethodKind::Knn;
    if (s == "logreg") return MethodKind::LogReg;
    if (s == "svm-linear") return MethodKind::SvmLinear;
    if (s == "svm-rbf") return MethodKind::SvmRbf;
    raise(ErrorCode::ParseError, "unknown method '" + s + "'");
}

/// Classifier choice plus hyperparameters. Fields outside the chosen kind are
/// ignored.
struct ClassifierSpec {
    MethodKind kind = MethodKind::KMeans;
    int knn_k = 5;
    double logreg_lambda = 1e-2;
    double logreg_lr = 0.1;
    int logreg_iters = 2000;
    double svm_c = 1.0;
    double svm_gamma = 0.0;  // <= 0 selects 1/d at fit time
    double svm_tol = 1e-3;
    int svm_max_passes = 10;
    std::uint64_t seed = 0;

    void validate() const {
        if (knn_k < 1) raise(ErrorCode::InvalidConfig, "knn k must be >= 1");
        if (logreg_lambda < 0.0) raise(ErrorCode::InvalidConfig, "logreg lambda must be >= 0");
        if (logreg_lr <= 0.0) raise(ErrorCode::InvalidConfig, "logreg lr must be > 0");
        if (logreg_iters < 1) raise(ErrorCode::InvalidConfig, "logreg iters must be >= 1");
        if (svm_c <= 0.0) raise(ErrorCode::InvalidConfig, "svm C must be > 0");
        if (svm_tol <= 0.0) raise(ErrorCode::InvalidConfig, "svm tol must be > 0");
        if (svm_max_passes < 1) raise(ErrorCode::InvalidConfig, "svm max_passes must be >= 1");
    }
};

// --- scaling ----------------------------------------------------------------

/// Per-dimension z-scoring. σ is the population stddev of the training rows;
/// dimensions with σ=0 transform to 0.
struct Scaler {
    std::vector<double> mu;
    std::vector<double> sigma;
};

inline Scaler fit_scaler(const Matrix& X_train) {
    if (X_train.empty()) raise(ErrorCode::EmptyDataset, "cannot fit scaler on empty data");
    const std::size_t n = X_train.size(), d = X_train.front().size();
    Scaler sc;
    sc.mu.assign(d, 0.0);
    sc.sigma.assign(d, 0.0);
    for (const auto& row : X_train) {
        if (row.size() != d) raise(ErrorCode::LengthMismatch, "ragged feature matrix");
        for (std::size_t j = 0; j < d; ++j) sc.mu[j] += row[j];
    }
    for (std::size_t j = 0; j < d; ++j) sc.mu[j] /= static_cast<double>(n);
    for (const auto& row : X_train)
        for (std::size_t j = 0; j < d; ++j)
            sc.sigma[j] += (row[j] - sc.mu[j]) * (row[j] - sc.mu[j]);
    for (std::size_t j = 0; j < d; ++j) sc.sigma[j] = std::sqrt(sc.sigma[j] / static_cast<double>(n));
    return sc;
}

inline std::vector<double> apply_scaler(const Scaler& sc, const std::vector<double>& x) {
    if (x.size() != sc.mu.size()) raise(ErrorCode::LengthMismatch, "scaler dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        out[j] = sc.sigma[j] > 0.0 ? (x[j] - sc.mu[j]) / sc.sigma[j] : 0.0;
    return out;
}

inline Matrix apply_scaler(const Scaler& sc, const Matrix& X) {
    Matrix out(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) out[i] = apply_scaler(sc, X[i]);
    return out;
}

// --- k-means ----------------------------------------------------------------

struct KMeansModel {
    Matrix centroids;
    std::vector<int> assignments;         // per training row
    double inertia = 0.0;                 // sum of squared distances
    std::vector<double> inertia_history;  // after each assignment step
    int fatty_cluster = -1;               // set by identify_fatty_cluster
};

namespace detail {

inline int nearest_centroid(const Matrix& centroids, const std::vector<double>& x) {
    int best = 0;
    double bd = squared_distance(centroids[0], x);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
        const double d = squared_distance(centroids[c], x);
        if (d < bd) {
            bd = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

inline Matrix kmeanspp_init(const Matrix& X, int k, Rng& rng) {
    const std::size_t n = X.size();
    Matrix centroids;
    centroids.push_back(X[rng.uniform_index(n)]);
    std::vector<double> d2(n);
    while (centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = squared_distance(centroids[0], X[i]);
            for (std::size_t c = 1; c < centroids.size(); ++c)
                best = std::min(best, squared_distance(centroids[c], X[i]));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = n - 1;
        if (total <= 0.0) {
            pick = rng.uniform_index(n);
        } else {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (target < acc) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.push_back(X[pick]);
    }
    return centroids;
}

// One Lloyd run from a fixed initialization. Assignment ties go to the lowest
// centroid index; an empty cluster captures the point currently farthest from
// its assigned centroid, which keeps the inertia sequence non-increasing.
inline KMeansModel lloyd_run(const Matrix& X, Matrix centroids, int max_iters, double tol) {
    const std::size_t n = X.size();
    const std::size_t d = X.front().size();
    const int k = static_cast<int>(centroids.size());
    KMeansModel m;
    m.assignments.assign(n, 0);

    auto assign_and_score = [&]() {
        for (std::size_t i = 0; i < n; ++i) m.assignments[i] = nearest_centroid(centroids, X[i]);
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (int a : m.assignments) ++counts[static_cast<std::size_t>(a)];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            std::size_t far = 0;
            double fd = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dist = squared_distance(X[i], centroids[static_cast<std::size_t>(m.assignments[i])]);
                if (dist > fd) {
                    fd = dist;
                    far = i;
                }
            }
            --counts[static_cast<std::size_t>(m.assignments[far])];
            m.assignments[far] = c;
            ++counts[static_cast<std::size_t>(c)];
            centroids[static_cast<std::size_t>(c)] = X[far];
        }
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inertia += squared_distance(X[i], centroids[static_cast<std::size_t>(m.assignments[i])]);
        return inertia;
    };

    m.inertia = assign_and_score();
    m.inertia_history.push_back(m.inertia);
    for (int iter = 0; iter < max_iters; ++iter) {
        Matrix next(static_cast<std::size_t>(k), std::vector<double>(d, 0.0));
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = static_cast<std::size_t>(m.assignments[i]);
            ++counts[a];
            for (std::size_t j = 0; j < d; ++j) next[a][j] += X[i][j];
        }
        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            const auto cc = static_cast<std::size_t>(c);
            if (counts[cc] == 0) {
                next[cc] = centroids[cc];
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) next[cc][j] /= static_cast<double>(counts[cc]);
            movement = std::max(movement, euclidean_distance(centroids[cc], next[cc]));
        }
        centroids = std::move(next);
        m.inertia = assign_and_score();
        m.inertia_history.push_back(m.inertia);
        if (movement < tol) break;
    }
    m.centroids = std::move(centroids);
    return m;
}

}  // namespace detail

/// Lloyd's algorithm with k-means++ initialization, 10 restarts on the
/// deterministic sub-seed schedule seed+r, best inertia kept.
inline KMeansModel kmeans_fit(const Matrix& X, std::uint64_t seed, int k = 2) {
    if (k < 1) raise(ErrorCode::InvalidConfig, "k must be >= 1");
    if (X.size() < static_cast<std::size_t>(k))
        raise(ErrorCode::TooFewSamples, "k-means needs at least k points");
    constexpr int kRestarts = 10;
    constexpr int kMaxIters = 300;
    constexpr double kTol = 1e-6;
    KMeansModel best;
    double best_inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < kRestarts; ++r) {
        Rng rng(seed + static_cast<std::uint64_t>(r));
        auto init = detail::kmeanspp_init(X, k, rng);
        KMeansModel m = detail::lloyd_run(X, std::move(init), kMaxIters, kTol);
        if (m.inertia < best_inertia) {
            best_inertia = m.inertia;
            best = std::move(m);
        }
    }
    return best;
}

/// The fatty cluster is the one whose members have the lower average raw
/// (unstandardized) mean patch distance. Ties resolve to cluster 0.
inline int identify_fatty_cluster(KMeansModel& model, const std::vector<double>& raw_mean_distance) {
    if (raw_mean_distance.size() != model.assignments.size())
        raise(ErrorCode::LengthMismatch, "raw distance count does not match assignments");
    const auto k = model.centroids.size();
    std::vector<double> sum(k, 0.0);
    std::vector<int> count(k, 0);
    for (std::size_t i = 0; i < raw_mean_distance.size(); ++i) {
        const auto a = static_cast<std::size_t>(model.assignments[i]);
        sum[a] += raw_mean_distance[i];
        ++count[a];
    }
    for (std::size_t c = 0; c < k; ++c)
        if (count[c] == 0) raise(ErrorCode::EmptyCluster, "cluster has no members");
    int fatty = 0;
    double best = sum[0] / count[0];
    for (std::size_t c = 1; c < k; ++c) {
        const double avg = sum[c] / count[c];
        if (avg < best) {
            best = avg;
            fatty = static_cast<int>(c);
        }
    }
    model.fatty_cluster = fatty;
    return fatty;
}

/// Assigns a point to the nearest centroid and maps cluster id to a label.
inline int kmeans_predict(const KMeansModel& model, const std::vector<double>& x) {
    if (model.fatty_cluster < 0)
        raise(ErrorCode::InvalidConfig, "fatty cluster must be identified before prediction");
    return detail::nearest_centroid(model.centroids, x) == model.fatty_cluster ? 1 : 0;
}

// --- k-nearest neighbours ----------------------------------------------------

/// Majority vote among the k nearest training points by L2 distance. Distance
/// ties prefer the lower training index; vote ties resolve to Fatty.
inline int knn_predict(const Matrix& X_train, const std::vector<int>& y_train,
                       const std::vector<double>& x, int k) {
    if (X_train.empty()) raise(ErrorCode::EmptyDataset, "knn needs training data");
    if (y_train.size() != X_train.size())
        raise(ErrorCode::LengthMismatch, "label count does not match row count");
    if (k < 1 || static_cast<std::size_t>(k) > X_train.size())
        raise(ErrorCode::TooFewSamples, "knn k exceeds training size");
    std::vector<std::pair<double, std::size_t>> order(X_train.size());
    for (std::size_t i = 0; i < X_train.size(); ++i)
        order[i] = {euclidean_distance(X_train[i], x), i};
    std::sort(order.begin(), order.end());
    int fatty = 0;
    for (int i = 0; i < k; ++i) fatty += y_train[order[static_cast<std::size_t>(i)].second];
    return 2 * fatty >= k ? 1 : 0;
}

// --- logistic regression -----------------------------------------------------

struct LogRegModel {
    std::vector<double> w;
    double b = 0.0;
};

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace detail {
// softplus(z) = log(1 + e^z), overflow-safe.
inline double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z))); }
}  // namespace detail

/// Mean negative log-likelihood plus (λ/2)‖w‖²; the bias is unregularized.
inline double logreg_objective(const Matrix& X, const std::vector<int>& y,
                               const std::vector<double>& w, double b, double lambda) {
    const std::size_t n = X.size();
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = b;
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * X[i][j];
        loss += detail::softplus(z) - static_cast<double>(y[i]) * z;
    }
    loss /= static_cast<double>(n);
    double reg = 0.0;
    for (double wj : w) reg += wj * wj;
    return loss + 0.5 * lambda * reg;
}

/// Analytic gradient of logreg_objective.
inline void logreg_gradient(const Matrix& X, const std::vector<int>& y,
                            const std::vector<double>& w, double b, double lambda,
                            std::vector<double>& grad_w, double& grad_b) {
    const std::size_t n = X.size(), d = w.size();
    grad_w.assign(d, 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = b;
        for (std::size_t j = 0; j < d; ++j) z += w[j] * X[i][j];
        const double err = sigmoid(z) - static_cast<double>(y[i]);
        for (std::size_t j = 0; j < d; ++j) grad_w[j] += err * X[i][j];
        grad_b += err;
    }
    for (std::size_t j = 0; j < d; ++j) grad_w[j] = grad_w[j] / static_cast<double>(n) + lambda * w[j];
    grad_b /= static_cast<double>(n);
}

/// Full-batch gradient descent from zero initialization.
inline LogRegModel logreg_fit(const Matrix& X, const std::vector<int>& y, double lambda = 1e-2,
                              double lr = 0.1, int iters = 2000) {
    if (X.empty()) raise(ErrorCode::EmptyDataset, "logreg needs training data");
    if (y.size() != X.size()) raise(ErrorCode::LengthMismatch, "label count does not match row count");
    const bool has0 = std::find(y.begin(), y.end(), 0) != y.end();
    const bool has1 = std::find(y.begin(), y.end(), 1) != y.end();
    if (!has0 || !has1) raise(ErrorCode::SingleClassTraining, "logreg needs both classes");
    LogRegModel m;
    m.w.assign(X.front().size(), 0.0);
    std::vector<double> gw;
    double gb = 0.0;
    for (int it = 0; it < iters; ++it) {
        logreg_gradient(X, y, m.w, m.b, lambda, gw, gb);
        for (std::size_t j = 0; j < m.w.size(); ++j) m.w[j] -= lr * gw[j];
        m.b -= lr * gb;
    }
    return m;
}

inline double logreg_prob(const LogRegModel& m, const std::vector<double>& x) {
    double z = m.b;
    for (std::size_t j = 0; j < m.w.size(); ++j) z += m.w[j] * x[j];
    return sigmoid(z);
}

inline int logreg_predict(const LogRegModel& m, const std::vector<double>& x) {
    return logreg_prob(m, x) >= 0.5 ? 1 : 0;
}

// --- support vector machine ---------------------------------------------------

enum class KernelKind { Linear, Rbf };

inline double kernel_eval(KernelKind kernel, double gamma, const std::vector<double>& a,
                          const std::vector<double>& b) {
    if (kernel == KernelKind::Linear) return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    return std::exp(-gamma * squared_distance(a, b));
}

struct SvmModel {
    KernelKind kernel = KernelKind::Linear;
    double gamma = 0.0;
    double c = 1.0;
    double b = 0.0;
    bool converged = true;        // false when the pass budget ran out
    Matrix x;                     // training points
    std::vector<int> sign;        // labels mapped to {-1,+1}
    std::vector<double> alpha;    // dual variables, one per training point
};

inline double svm_decision(const SvmModel& m, const std::vector<double>& x) {
    double f = m.b;
    for (std::size_t i = 0; i < m.alpha.size(); ++i)
        if (m.alpha[i] > 0.0)
            f += m.alpha[i] * m.sign[i] * kernel_eval(m.kernel, m.gamma, m.x[i], x);
    return f;
}

/// Sign of the decision function; exact zero resolves to Fatty.
inline int svm_predict(const SvmModel& m, const std::vector<double>& x) {
    return svm_decision(m, x) >= 0.0 ? 1 : 0;
}

/// Simplified SMO: sweep KKT-violating points, pair each with a random second
/// index, and solve the two-variable subproblem in closed form. Terminates
/// after max_passes consecutive sweeps without an update; a hard sweep cap
/// marks the model non-converged instead of looping.
inline SvmModel svm_fit(const Matrix& X, const std::vector<int>& y, KernelKind kernel,
                        double C = 1.0, double gamma = 0.0, double tol = 1e-3,
                        int max_passes = 10, std::uint64_t seed = 0) {
    if (X.empty()) raise(ErrorCode::EmptyDataset, "svm needs training data");
    if (y.size() != X.size()) raise(ErrorCode::LengthMismatch, "label count does not match row count");
    if (C <= 0.0) raise(ErrorCode::InvalidConfig, "svm C must be > 0");
    const std::size_t n = X.size();
    const std::size_t d = X.front().size();

    SvmModel m;
    m.kernel = kernel;
    m.gamma = kernel == KernelKind::Rbf ? (gamma > 0.0 ? gamma : 1.0 / static_cast<double>(d)) : 0.0;
    m.c = C;
    m.x = X;
    m.sign.resize(n);
    for (std::size_t i = 0; i < n; ++i) m.sign[i] = y[i] == 1 ? 1 : -1;
    const bool has_pos = std::find(m.sign.begin(), m.sign.end(), 1) != m.sign.end();
    const bool has_neg = std::find(m.sign.begin(), m.sign.end(), -1) != m.sign.end();
    if (!has_pos || !has_neg) raise(ErrorCode::SingleClassTraining, "svm needs both classes");
    m.alpha.assign(n, 0.0);

    Matrix K(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) K[i][j] = K[j][i] = kernel_eval(kernel, m.gamma, X[i], X[j]);

    auto f_of = [&](std::size_t i) {
        double f = m.b;
        for (std::size_t t = 0; t < n; ++t)
            if (m.alpha[t] > 0.0) f += m.alpha[t] * m.sign[t] * K[t][i];
        return f;
    };

    Rng rng(seed);
    constexpr int kMaxSweeps = 2000;
    int passes = 0, sweeps = 0;
    while (passes < max_passes && sweeps < kMaxSweeps) {
        int changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = f_of(i) - m.sign[i];
            const double ri = ei * m.sign[i];
            if (!((ri < -tol && m.alpha[i] < C) || (ri > tol && m.alpha[i] > 0.0))) continue;
            std::size_t j = rng.uniform_index(n - 1);
            if (j >= i) ++j;
            const double ej = f_of(j) - m.sign[j];
            const double ai_old = m.alpha[i], aj_old = m.alpha[j];
            double lo, hi;
            if (m.sign[i] != m.sign[j]) {
                lo = std::max(0.0, aj_old - ai_old);
                hi = std::min(C, C + aj_old - ai_old);
            } else {
                lo = std::max(0.0, ai_old + aj_old - C);
                hi = std::min(C, ai_old + aj_old);
            }
            if (lo >= hi) continue;
            const double eta = 2.0 * K[i][j] - K[i][i] - K[j][j];
            if (eta >= 0.0) continue;
            double aj = aj_old - m.sign[j] * (ei - ej) / eta;
            aj = std::clamp(aj, lo, hi);
            if (std::fabs(aj - aj_old) < 1e-5) continue;
            const double ai = ai_old + m.sign[i] * m.sign[j] * (aj_old - aj);
            const double b1 = m.b - ei - m.sign[i] * (ai - ai_old) * K[i][i] -
                              m.sign[j] * (aj - aj_old) * K[i][j];
            const double b2 = m.b - ej - m.sign[i] * (ai - ai_old) * K[i][j] -
                              m.sign[j] * (aj - aj_old) * K[j][j];
            m.alpha[i] = ai;
            m.alpha[j] = aj;
            if (ai > 0.0 && ai < C)
                m.b = b1;
            else if (aj > 0.0 && aj < C)
                m.b = b2;
            else
                m.b = 0.5 * (b1 + b2);
            ++changed;
        }
        passes = changed == 0 ? passes + 1 : 0;
        ++sweeps;
    }
    m.converged = passes >= max_passes;
    return m;
}

/// Dual objective Σαᵢ − ½ ΣΣ αᵢαⱼyᵢyⱼK(xᵢ,xⱼ) of a fitted model.
inline double svm_dual_objective(const SvmModel& m) {
    const std::size_t n = m.alpha.size();
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) obj += m.alpha[i];
    for (std::size_t i = 0; i < n; ++i) {
        if (m.alpha[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (m.alpha[j] == 0.0) continue;
            obj -= 0.5 * m.alpha[i] * m.alpha[j] * m.sign[i] * m.sign[j] *
                   kernel_eval(m.kernel, m.gamma, m.x[i], m.x[j]);
        }
    }
    return obj;
}

// --- unified fit/predict -------------------------------------------------------

/// A fitted classifier of any supported kind. For K-Means the fatty cluster is
/// already identified from the training members.
struct FittedClassifier {
    MethodKind kind = MethodKind::KMeans;
    KMeansModel kmeans;
    LogRegModel logreg;
    SvmModel svm;
    Matrix knn_x;
    std::vector<int> knn_y;
    int knn_k = 5;

    int predict(const std::vector<double>& x) const {
        switch (kind) {
            case MethodKind::KMeans: return kmeans_predict(kmeans, x);
            case MethodKind::Knn: return knn_predict(knn_x, knn_y, x, knn_k);
            case MethodKind::LogReg: return logreg_predict(logreg, x);
            case MethodKind::SvmLinear:
            case MethodKind::SvmRbf: return svm_predict(svm, x);
        }
        raise(ErrorCode::InvalidConfig, "unknown classifier kind");
    }
};

/// Fits the classifier named by `spec` on already-scaled rows. K-Means ignores
/// `y` and identifies the fatty cluster from `raw_mean_distance` (the
/// unstandardized mean patch distance of each training row); supervised kinds
/// ignore `raw_mean_distance`.
inline FittedClassifier fit_classifier(const ClassifierSpec& spec, const Matrix& X,
                                       const std::vector<int>& y,
                                       const std::vector<double>& raw_mean_distance) {
    spec.validate();
    FittedClassifier fc;
    fc.kind = spec.kind;
    switch (spec.kind) {
        case MethodKind::KMeans:
            fc.kmeans = kmeans_fit(X, spec.seed);
            identify_fatty_cluster(fc.kmeans, raw_mean_distance);
            break;
        case MethodKind::Knn:
            if (X.empty()) raise(ErrorCode::EmptyDataset, "knn needs training data");
            fc.knn_x = X;
            fc.knn_y = y;
            fc.knn_k = spec.knn_k;
            break;
        case MethodKind::LogReg:
            fc.logreg = logreg_fit(X, y, spec.logreg_lambda, spec.logreg_lr, spec.logreg_iters);
            break;
        case MethodKind::SvmLinear:
            fc.svm = svm_fit(X, y, KernelKind::Linear, spec.svm_c, 0.0, spec.svm_tol,
                             spec.svm_max_passes, spec.seed);
            break;
        case MethodKind::SvmRbf:
            fc.svm = svm_fit(X, y, KernelKind::Rbf, spec.svm_c, spec.svm_gamma, spec.svm_tol,
                             spec.svm_max_passes, spec.seed);
            break;
    }
    return fc;
}

}  // namespace steato
