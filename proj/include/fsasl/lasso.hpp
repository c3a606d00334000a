#pragma once

#include <Eigen/Dense>

namespace fsasl {

enum class LassoAlgorithm { coordinate_descent, proximal_gradient };

struct LassoSettings {
    int max_iters = 10000;   // coordinate-descent sweeps, or FISTA iterations
    double kkt_tol = 1e-8;   // max stationarity violation accepted as converged
    LassoAlgorithm algorithm = LassoAlgorithm::coordinate_descent;
};

/// Sparse self-representation graph. Column i holds the coefficients that
/// reconstruct sample i from the other samples; the diagonal is exactly zero.
struct GlobalGraph {
    Eigen::MatrixXd s;  // n x n
    double alpha = 0.0;

    Eigen::Index n() const { return s.rows(); }
};

/// Minimizes ||x'_i - X' s||^2 + alpha * |s|_1 over s with s[i] pinned to 0.
/// x_prime is the transformed data (c x n); the reconstruction term carries
/// no 1/2 factor. On exit the KKT residual is <= settings.kkt_tol:
///   nonzero s_j:  |2 (X'^T (X' s - x'_i))_j + alpha sign(s_j)| <= tol
///   zero s_j:     |2 (X'^T (X' s - x'_i))_j| <= alpha + tol
/// Throws SolverError when max_iters is exhausted first.
Eigen::VectorXd solve_lasso_column(const Eigen::MatrixXd& x_prime, Eigen::Index i, double alpha,
                                   const LassoSettings& settings = {});

/// Solves all n column subproblems (OpenMP-parallel; columns are independent
/// and the result is bitwise independent of scheduling). Coefficients with
/// |s| < 1e-12 are stored as exact zeros. warm_start, when given, must be an
/// n x n graph and seeds each column solve.
GlobalGraph update_global_graph(const Eigen::MatrixXd& x_prime, double alpha,
                                const LassoSettings& settings = {},
                                const GlobalGraph* warm_start = nullptr);

namespace detail {

/// Gram-based coordinate descent core shared by the public entry points and
/// the serial reference path. gram = X'^T X', target = gram.col(i).
Eigen::VectorXd lasso_column_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& target,
                                  Eigen::Index i, double alpha, const LassoSettings& settings,
                                  const Eigen::VectorXd* warm_start);

double lasso_objective(const Eigen::MatrixXd& x_prime, Eigen::Index i,
                       const Eigen::VectorXd& s, double alpha);

/// Max KKT stationarity violation of s for column i (coordinate i excluded).
double lasso_kkt_residual(const Eigen::MatrixXd& gram, const Eigen::VectorXd& target,
                          Eigen::Index i, const Eigen::VectorXd& s, double alpha);

}  // namespace detail

}  // namespace fsasl
