#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fsasl/data_matrix.hpp"
#include "fsasl/solver.hpp"

namespace fsasl {

struct ClusteringResult {
    std::vector<int> labels;  // length n, values in [0, n_clusters)
    double inertia = 0.0;
    int n_clusters = 0;
    // true when an empty cluster could not be repaired (coincident points)
    bool empty_cluster = false;
    std::vector<double> inertia_trace;  // after every assignment step
};

struct EvalRow {
    int m = 0;  // number of selected features
    double mean_acc = 0.0, std_acc = 0.0;
    double mean_nmi = 0.0, std_nmi = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> per_feature_count;
    double aggregated_acc = 0.0;  // mean over the m grid of mean_acc
    double aggregated_nmi = 0.0;
    // raw per-repeat metrics, [grid index][repeat], for external analysis
    std::vector<std::vector<double>> raw_acc;
    std::vector<std::vector<double>> raw_nmi;
};

/// Lloyd's algorithm on the columns of x_selected (m x n), seeded
/// uniform sampling of distinct points as initial centroids. Deterministic
/// for a fixed seed. Empty clusters are re-seeded to the point farthest from
/// its centroid.
ClusteringResult kmeans(const Eigen::MatrixXd& x_selected, int n_clusters, unsigned seed,
                        int max_iters = 100);

/// Fraction of agreement under the best one-to-one mapping of predicted
/// clusters to true classes (optimal assignment on the contingency matrix).
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

/// I(pred; truth) / sqrt(H(pred) H(truth)). Zero when either partition is a
/// single cluster and they differ; 1 when both are the identical single
/// cluster.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

/// For each m in m_grid, k-means on the top-m ranked features once per seed;
/// mean and std of ACC/NMI per m, then means aggregated over the grid.
/// Repeats are independent tasks and run in parallel; the report is
/// deterministic given the seed list.
EvalReport evaluate_ranking(const DataMatrix& x, const std::vector<int>& truth,
                            const FeatureRanking& ranking, const std::vector<int>& m_grid,
                            const std::vector<unsigned>& seeds, int n_clusters);

/// Features ranked by descending population variance (sanity baseline).
FeatureRanking maxvar_baseline(const DataMatrix& x);

namespace detail {
/// Max-weight one-to-one assignment value on a square nonnegative matrix
/// (Hungarian / shortest augmenting path).
double max_assignment(const Eigen::MatrixXd& weights);
}

}  // namespace fsasl
