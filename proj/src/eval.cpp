#include "fsasl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "fsasl/errors.hpp"

namespace fsasl {

namespace {

std::vector<int> compact_ids(const std::vector<int>& raw, int& count) {
    std::unordered_map<int, int> map;
    std::vector<int> out(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        auto [it, inserted] = map.emplace(raw[i], static_cast<int>(map.size()));
        out[i] = it->second;
    }
    count = static_cast<int>(map.size());
    return out;
}

Eigen::MatrixXd contingency(const std::vector<int>& a, const std::vector<int>& b, int ka, int kb) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(ka, kb);
    for (size_t i = 0; i < a.size(); ++i) t(a[i], b[i]) += 1.0;
    return t;
}

void require_same_length(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size()) {
        throw ConfigError("label vectors differ in length: " + std::to_string(pred.size()) +
                          " vs " + std::to_string(truth.size()));
    }
    if (pred.empty()) throw ConfigError("label vectors are empty");
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

namespace detail {

// Shortest augmenting path assignment (maximize total weight). 1-based
// internal arrays, the usual formulation on the cost matrix -weights.
double max_assignment(const Eigen::MatrixXd& weights) {
    const int n = static_cast<int>(weights.rows());
    if (weights.cols() != n || n == 0) throw ConfigError("assignment matrix must be square");
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -weights(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) total += weights(p[j] - 1, j - 1);
    return total;
}

}  // namespace detail

ClusteringResult kmeans(const Eigen::MatrixXd& x_selected, int n_clusters, unsigned seed,
                        int max_iters) {
    const Eigen::Index n = x_selected.cols();
    if (n_clusters < 1 || n_clusters > n) {
        throw ConfigError("n_clusters=" + std::to_string(n_clusters) + " out of range for n=" +
                          std::to_string(n));
    }
    if (x_selected.rows() < 1) throw ConfigError("kmeans needs at least one feature row");

    // seeded uniform sampling of distinct points
    std::mt19937 rng(seed);
    std::vector<Eigen::Index> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    Eigen::MatrixXd centroids(x_selected.rows(), n_clusters);
    for (int k = 0; k < n_clusters; ++k) {
        std::uniform_int_distribution<Eigen::Index> pick(k, n - 1);
        std::swap(pool[static_cast<size_t>(k)], pool[static_cast<size_t>(pick(rng))]);
        centroids.col(k) = x_selected.col(pool[static_cast<size_t>(k)]);
    }

    ClusteringResult res;
    res.n_clusters = n_clusters;
    res.labels.assign(static_cast<size_t>(n), 0);
    std::vector<int> prev_labels;
    bool reseeded_last = false;

    std::vector<double> dist_to_own(static_cast<size_t>(n), 0.0);
    for (int it = 0; it < max_iters; ++it) {
        double inertia = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            int best = 0;
            double best_d = (x_selected.col(j) - centroids.col(0)).squaredNorm();
            for (int k = 1; k < n_clusters; ++k) {
                const double dkj = (x_selected.col(j) - centroids.col(k)).squaredNorm();
                if (dkj < best_d) {
                    best_d = dkj;
                    best = k;
                }
            }
            res.labels[static_cast<size_t>(j)] = best;
            dist_to_own[static_cast<size_t>(j)] = best_d;
            inertia += best_d;
        }
        res.inertia = inertia;
        res.inertia_trace.push_back(inertia);
        if (!reseeded_last && prev_labels == res.labels) break;
        prev_labels = res.labels;

        // centroid update
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(x_selected.rows(), n_clusters);
        std::vector<Eigen::Index> counts(static_cast<size_t>(n_clusters), 0);
        for (Eigen::Index j = 0; j < n; ++j) {
            sums.col(res.labels[static_cast<size_t>(j)]) += x_selected.col(j);
            ++counts[static_cast<size_t>(res.labels[static_cast<size_t>(j)])];
        }
        reseeded_last = false;
        std::vector<char> stolen(static_cast<size_t>(n), 0);
        for (int k = 0; k < n_clusters; ++k) {
            if (counts[static_cast<size_t>(k)] > 0) {
                centroids.col(k) = sums.col(k) / static_cast<double>(counts[static_cast<size_t>(k)]);
            }
        }
        for (int k = 0; k < n_clusters; ++k) {
            if (counts[static_cast<size_t>(k)] > 0) continue;
            // re-seed the empty centroid to the farthest point
            Eigen::Index far = -1;
            double far_d = -1.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (stolen[static_cast<size_t>(j)]) continue;
                if (dist_to_own[static_cast<size_t>(j)] > far_d) {
                    far_d = dist_to_own[static_cast<size_t>(j)];
                    far = j;
                }
            }
            if (far >= 0) {
                centroids.col(k) = x_selected.col(far);
                stolen[static_cast<size_t>(far)] = 1;
                reseeded_last = true;
            }
        }
    }

    std::vector<Eigen::Index> final_counts(static_cast<size_t>(n_clusters), 0);
    for (int lab : res.labels) ++final_counts[static_cast<size_t>(lab)];
    res.empty_cluster = std::any_of(final_counts.begin(), final_counts.end(),
                                    [](Eigen::Index c) { return c == 0; });
    return res;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    require_same_length(pred, truth);
    int kp = 0, kt = 0;
    const std::vector<int> a = compact_ids(pred, kp);
    const std::vector<int> b = compact_ids(truth, kt);
    const int k = std::max(kp, kt);
    Eigen::MatrixXd table = Eigen::MatrixXd::Zero(k, k);
    table.topLeftCorner(kp, kt) = contingency(a, b, kp, kt);
    const double matched = detail::max_assignment(table);
    return matched / static_cast<double>(pred.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    require_same_length(pred, truth);
    int kp = 0, kt = 0;
    const std::vector<int> a = compact_ids(pred, kp);
    const std::vector<int> b = compact_ids(truth, kt);
    if (kp == 1 && kt == 1) return 1.0;  // identical single-cluster partitions
    if (kp == 1 || kt == 1) return 0.0;  // one side carries no information

    const Eigen::MatrixXd t = contingency(a, b, kp, kt);
    const double n = static_cast<double>(pred.size());
    const Eigen::VectorXd rows = t.rowwise().sum();
    const Eigen::VectorXd cols = t.colwise().sum();

    double hp = 0.0, ht = 0.0, mi = 0.0;
    for (int i = 0; i < kp; ++i) hp -= rows(i) / n * std::log(rows(i) / n);
    for (int j = 0; j < kt; ++j) ht -= cols(j) / n * std::log(cols(j) / n);
    for (int i = 0; i < kp; ++i) {
        for (int j = 0; j < kt; ++j) {
            if (t(i, j) > 0.0) {
                mi += t(i, j) / n * std::log(n * t(i, j) / (rows(i) * cols(j)));
            }
        }
    }
    const double denom = std::sqrt(hp * ht);
    if (denom <= 0.0) return 0.0;
    return std::clamp(mi / denom, 0.0, 1.0);
}

EvalReport evaluate_ranking(const DataMatrix& x, const std::vector<int>& truth,
                            const FeatureRanking& ranking, const std::vector<int>& m_grid,
                            const std::vector<unsigned>& seeds, int n_clusters) {
    const Eigen::Index d = x.n_features();
    const Eigen::Index n = x.n_samples();
    if (truth.size() != static_cast<size_t>(n)) throw ConfigError("truth labels length mismatch");
    if (static_cast<Eigen::Index>(ranking.order.size()) != d) {
        throw ConfigError("ranking does not cover all features");
    }
    if (m_grid.empty()) throw ConfigError("m_grid is empty");
    for (int m : m_grid) {
        if (m < 1 || m > d) {
            throw ConfigError("m=" + std::to_string(m) + " outside [1, d=" + std::to_string(d) +
                              "]");
        }
    }
    if (seeds.empty()) throw ConfigError("need at least one seed");

    EvalReport rep;
    const size_t g = m_grid.size();
    const size_t r = seeds.size();
    rep.raw_acc.assign(g, std::vector<double>(r, 0.0));
    rep.raw_nmi.assign(g, std::vector<double>(r, 0.0));

    // (m, seed) tasks are independent; slots are preassigned so the result
    // does not depend on scheduling
    const long total = static_cast<long>(g * r);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long task = 0; task < total; ++task) {
        const size_t gi = static_cast<size_t>(task) / r;
        const size_t ri = static_cast<size_t>(task) % r;
        const int m = m_grid[gi];
        Eigen::MatrixXd sel(m, n);
        for (int f = 0; f < m; ++f) sel.row(f) = x.values.row(ranking.order[static_cast<size_t>(f)]);
        const ClusteringResult cr = kmeans(sel, n_clusters, seeds[ri]);
        rep.raw_acc[gi][ri] = accuracy(cr.labels, truth);
        rep.raw_nmi[gi][ri] = nmi(cr.labels, truth);
    }

    for (size_t gi = 0; gi < g; ++gi) {
        EvalRow row;
        row.m = m_grid[gi];
        row.mean_acc = std::accumulate(rep.raw_acc[gi].begin(), rep.raw_acc[gi].end(), 0.0) /
                       static_cast<double>(r);
        row.mean_nmi = std::accumulate(rep.raw_nmi[gi].begin(), rep.raw_nmi[gi].end(), 0.0) /
                       static_cast<double>(r);
        row.std_acc = sample_std(rep.raw_acc[gi], row.mean_acc);
        row.std_nmi = sample_std(rep.raw_nmi[gi], row.mean_nmi);
        rep.per_feature_count.push_back(row);
        rep.aggregated_acc += row.mean_acc;
        rep.aggregated_nmi += row.mean_nmi;
    }
    rep.aggregated_acc /= static_cast<double>(g);
    rep.aggregated_nmi /= static_cast<double>(g);
    return rep;
}

FeatureRanking maxvar_baseline(const DataMatrix& x) {
    validate(x);
    const Eigen::Index d = x.n_features();
    const double n = static_cast<double>(x.n_samples());
    FeatureRanking r;
    r.scores.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double mean = x.values.row(i).mean();
        r.scores(i) = (x.values.row(i).array() - mean).square().sum() / n;
    }
    r.order.resize(static_cast<size_t>(d));
    std::iota(r.order.begin(), r.order.end(), 0);
    std::stable_sort(r.order.begin(), r.order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (r.scores(a) != r.scores(b)) return r.scores(a) > r.scores(b);
        return a < b;
    });
    return r;
}

}  // namespace fsasl
