#pragma once

#include <Eigen/Dense>

#include "fsasl/lasso.hpp"
#include "fsasl/local_graph.hpp"
#include "fsasl/solver.hpp"

namespace fsasl::reference {

// Serial reference implementations of the parallel kernels. They are written
// independently of the production code paths (naive residual updates instead
// of Gram covariance updates, bisection instead of the sorting projection,
// explicit double loops instead of matrix identities) and exist to validate
// the OpenMP kernels in the test suite and to baseline them in the benchmark.

/// Naive O(n^2 c) double loop.
Eigen::MatrixXd pairwise_sq_dists(const Eigen::MatrixXd& x);

/// Simplex projection by bisection on the shift z in sum_j max(a_j + z, 0) = 1.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& a);

/// Coordinate descent with residual (not covariance) updates, serial columns.
Eigen::MatrixXd update_global_graph(const Eigen::MatrixXd& x_prime, double alpha,
                                    const LassoSettings& settings = {});

/// Row-by-row local graph via the bisection projection.
Eigen::MatrixXd update_local_graph(const Eigen::MatrixXd& x_prime, double mu);

/// Term-by-term objective evaluation with explicit loops.
double objective(const Eigen::MatrixXd& x, const FsaslState& state, const FsaslConfig& config);

}  // namespace fsasl::reference
