#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fsasl/lasso.hpp"
#include "fsasl/local_graph.hpp"

namespace fsasl {

/// L = L_S + beta * L_P, symmetrized to kill roundoff drift.
struct CombinedLaplacian {
    Eigen::MatrixXd l;  // n x n symmetric PSD
    double beta = 0.0;
};

/// Columns are orthonormal eigenvectors of L for the ascending eigenvalues.
struct Embedding {
    Eigen::MatrixXd y;           // n x c
    Eigen::VectorXd eigenvalues;  // length c, ascending
};

/// Row-sparse projection; row norms rank the features.
struct SelectionMatrix {
    Eigen::MatrixXd w;  // d x c
    double gamma = 0.0;
    Eigen::VectorXd row_norms;  // length d, row_norms[i] = ||w_i||_2
};

struct EigenSettings {
    // Dense symmetric solver up to this order; shift-invert Lanczos above.
    Eigen::Index dense_threshold = 2000;
    double residual_tol = 1e-6;  // accepted ||L y - lambda y|| / ||L||_F
    int max_subspace = 0;        // 0 = automatic cap
};

struct L21Settings {
    int max_iters = 500;
    double tol = 1e-10;     // relative objective change between IRLS iterations
    double delta = 1e-8;    // smoothing added to row norms in the IRLS weights
    bool auto_ridge = true; // add eps*I to X X^T when d > n
};

struct L21Result {
    SelectionMatrix selection;
    // objective ||Y - X^T W||^2 + gamma ||W||_21 after every IRLS iteration
    std::vector<double> objective_trace;
    int iterations = 0;
    bool converged = false;
};

/// L_S = (I - S)(I - S)^T.
Eigen::MatrixXd global_laplacian(const GlobalGraph& s);

CombinedLaplacian combine(const Eigen::MatrixXd& l_s, const Eigen::MatrixXd& l_p, double beta);

/// The c algebraically smallest eigenpairs of L. Eigenvector signs are fixed
/// by making the largest-magnitude entry positive; degenerate eigenvalues
/// keep the solver's order, so downstream checks must be subspace-based.
Embedding smallest_eigenpairs(const CombinedLaplacian& l, Eigen::Index c,
                              const EigenSettings& settings = {});

/// min_W ||Y - X^T W||^2 + gamma ||W||_21 by iteratively reweighted least
/// squares: W <- (X X^T + gamma D)^{-1} X Y, D = diag(1/(2 ||w_i|| + delta)).
/// x is d x n (features x samples), y is n x c. gamma = 0 degenerates to a
/// single least-squares solve. Rows of W for all-zero feature rows of x are
/// exactly zero.
L21Result solve_l21(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double gamma,
                    const L21Settings& settings = {});

/// Direct path: the c smallest generalized eigenpairs of
/// X (L + gamma D_{W_prev}) X^T W = Lambda X X^T W, normalized so that
/// W^T X X^T W = I. w_prev = nullptr uses D = I. Throws SolverError when
/// X X^T is singular and the ridge is disabled.
SelectionMatrix solve_w_generalized(const Eigen::MatrixXd& x, const CombinedLaplacian& l,
                                    double gamma, const SelectionMatrix* w_prev, Eigen::Index c,
                                    const L21Settings& settings = {});

/// Smallest gamma for which solve_l21's optimum is W = 0: the largest row
/// norm of 2 X Y.
double gamma_max(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

namespace detail {
/// Fixes eigenvector signs in place: largest-magnitude entry positive.
void fix_signs(Eigen::MatrixXd& vectors);
}

}  // namespace fsasl
