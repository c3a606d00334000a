#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fsasl/data_matrix.hpp"
#include "fsasl/lasso.hpp"
#include "fsasl/local_graph.hpp"
#include "fsasl/spectral.hpp"

namespace fsasl {

// Which structure terms participate in the objective.
enum class StructureVariant { full, global_only, local_only };

// W-update route: the two-step spectral-regression path is the default; the
// direct generalized eigen path is kept for validation (it is the one with a
// monotone-descent guarantee on the unified objective).
enum class WPath { two_step, generalized };

// mu can track the projected-space distances or stay frozen at its initial
// value; recomputing follows the distances d^W as W evolves, freezing keeps
// the objective parameterization constant across iterations.
enum class MuPolicy { recompute_each_iteration, fixed_from_init };

struct FsaslConfig {
    double alpha = 1.0;   // sparsity weight of S
    double beta = 1.0;    // weight of the local structure term
    double gamma = 0.01;  // row-sparsity weight of W
    // Interpret gamma as a fraction of gamma_max (computed from the initial
    // embedding), the grid convention for sweeps.
    bool gamma_is_fraction = false;
    int k = 5;            // target neighborhood size
    Eigen::Index c = 2;   // embedding dimension (number of clusters, typically)
    int max_outer_iters = 30;
    double obj_tol = 1e-5;  // relative objective change that counts as converged
    StructureVariant structure = StructureVariant::full;
    bool adaptive = true;   // false: S and P are built once from the initial W
    WPath w_path = WPath::two_step;
    MuPolicy mu_policy = MuPolicy::recompute_each_iteration;
    LassoSettings lasso;
    L21Settings l21;
    EigenSettings eigen;
};

struct FsaslState {
    SelectionMatrix w;
    GlobalGraph s;  // empty (0x0) when structure = local_only
    LocalGraph p;   // empty (0x0) when structure = global_only
    double mu = 0.0;
    std::vector<double> objective_trace;  // one entry per outer iteration
    int iterations = 0;
    bool converged = false;
    double gamma_resolved = 0.0;  // gamma actually used by the W subproblem
    double gamma_max_value = 0.0;
    // objective increases beyond 1e-9 relative slack; expected to stay 0 on
    // the generalized path, logged (not fatal) on the two-step path
    int monotonicity_violations = 0;
    std::vector<double> iteration_seconds;
};

struct FeatureRanking {
    std::vector<Eigen::Index> order;  // feature indices, best first
    Eigen::VectorXd scores;           // scores[f] = ||w_f||_2 for feature f
};

/// Unified objective
///   ||W^T X - W^T X S||_F^2 + alpha |S|_1
///   + beta sum_ij (||W^T x_i - W^T x_j||^2 P_ij + mu P_ij^2)
///   + gamma ||W||_21
/// restricted to the terms the variant uses. x is d x n.
double objective(const Eigen::MatrixXd& x, const FsaslState& state, const FsaslConfig& config);
double objective(const DataMatrix& x, const FsaslState& state, const FsaslConfig& config);

/// The alternating solver: S-update, P-update, L = L_S + beta L_P, W-update,
/// until the relative objective change drops below obj_tol or the iteration
/// cap is hit. Expects preprocessed data.
FsaslState run(const DataMatrix& x, const FsaslConfig& config);

/// Features sorted by descending ||w_i||_2, ties broken by ascending index.
FeatureRanking rank_features(const FsaslState& state);

StructureVariant parse_variant(const std::string& name, bool* adaptive = nullptr);
std::string to_string(StructureVariant v);
WPath parse_w_path(const std::string& name);
std::string to_string(WPath p);
MuPolicy parse_mu_policy(const std::string& name);
std::string to_string(MuPolicy p);

}  // namespace fsasl
