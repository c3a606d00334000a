#pragma once

#include <Eigen/Dense>

namespace fsasl {

/// Probabilistic neighborhood graph. Every row sums to 1, entries lie in
/// [0,1], and the diagonal is zero (a sample is never its own neighbor).
struct LocalGraph {
    Eigen::MatrixXd p;  // n x n row-stochastic
    double mu = 0.0;    // quadratic regularizer that set the row supports
    int k = 0;          // target neighborhood size mu was derived from

    Eigen::Index n() const { return p.rows(); }
};

/// Euclidean projection of a onto the probability simplex
/// {p : p >= 0, sum p = 1}, by the sorting-based closed form: with a sorted
/// descending into b, rho = max{ j : b_j + (1 - sum_{i<=j} b_i)/j > 0 },
/// z = (1 - sum_{i<=rho} b_i)/rho and p_j = max(a_j + z, 0).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& a);

/// Pairwise squared Euclidean distances between the columns of x
/// (OpenMP-parallel; entries are independent).
Eigen::MatrixXd pairwise_sq_dists(const Eigen::MatrixXd& x);

/// Regularizer that keeps ~k nonzeros per row of P: for each sample average
/// (k/2) d_(k+1) - (1/2) sum_{k'<=k} d_(k'), with d_(.) the ascending sorted
/// squared distances to the other samples, then floor at 1e-12 for
/// degenerate (all-coincident) inputs. Requires 1 <= k <= n-2.
double compute_mu(const Eigen::MatrixXd& x_prime, int k);

/// A_ij = -||x_i - x_j||^2 / (2 mu); symmetric, zero diagonal, entries <= 0.
Eigen::MatrixXd affinity_matrix(const Eigen::MatrixXd& x_prime, double mu);

/// Learns P: mu from compute_mu, then each row is the simplex projection of
/// its affinity row with the self entry excluded (P_ii = 0). Rows are
/// independent and projected in parallel.
LocalGraph update_local_graph(const Eigen::MatrixXd& x_prime, int k);

/// Same, with an externally fixed mu.
LocalGraph update_local_graph(const Eigen::MatrixXd& x_prime, int k, double mu);

/// L_P = D_P - (P + P^T)/2 with D_P the diagonal of row sums of (P + P^T)/2.
/// Symmetric PSD with zero row sums.
Eigen::MatrixXd local_laplacian(const LocalGraph& g);

}  // namespace fsasl
