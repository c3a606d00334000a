#include "fsasl/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "fsasl/errors.hpp"

namespace fsasl {

namespace {

bool uses_global(StructureVariant v) { return v != StructureVariant::local_only; }
bool uses_local(StructureVariant v) { return v != StructureVariant::global_only; }

void check_config(const FsaslConfig& cfg, Eigen::Index d, Eigen::Index n) {
    if (cfg.c < 1 || cfg.c > std::min(d, n - 1)) {
        throw ConfigError("embedding dimension c=" + std::to_string(cfg.c) +
                          " violates 1 <= c <= min(d, n-1) = " +
                          std::to_string(std::min(d, n - 1)));
    }
    if (uses_local(cfg.structure) && (cfg.k < 1 || cfg.k > n - 2)) {
        throw ConfigError("neighborhood size k=" + std::to_string(cfg.k) +
                          " violates 1 <= k <= n-2 = " + std::to_string(n - 2));
    }
    if (uses_global(cfg.structure) && cfg.alpha <= 0.0) {
        throw ConfigError("alpha must be positive");
    }
    if (uses_local(cfg.structure) && cfg.beta <= 0.0) {
        throw ConfigError("beta must be positive");
    }
    if (cfg.gamma <= 0.0) throw ConfigError("gamma must be positive");
    if (cfg.max_outer_iters < 1) throw ConfigError("max_outer_iters must be positive");
    if (cfg.obj_tol <= 0.0) throw ConfigError("obj_tol must be positive");
}

Eigen::MatrixXd build_laplacian(const FsaslConfig& cfg, Eigen::Index n, const GlobalGraph& s,
                                const LocalGraph& p) {
    Eigen::MatrixXd l;
    if (uses_global(cfg.structure)) {
        l = global_laplacian(s);
    } else {
        l = Eigen::MatrixXd::Zero(n, n);
    }
    if (uses_local(cfg.structure)) l.noalias() += cfg.beta * local_laplacian(p);
    l = 0.5 * (l + l.transpose()).eval();
    return l;
}

SelectionMatrix w_step(const FsaslConfig& cfg, const Eigen::MatrixXd& x,
                       const Eigen::MatrixXd& laplacian, double gamma,
                       const SelectionMatrix* w_prev) {
    CombinedLaplacian cl;
    cl.l = laplacian;
    cl.beta = cfg.beta;
    if (cfg.w_path == WPath::generalized) {
        return solve_w_generalized(x, cl, gamma, w_prev, cfg.c, cfg.l21);
    }
    const Embedding emb = smallest_eigenpairs(cl, cfg.c, cfg.eigen);
    return solve_l21(x, emb.y, gamma, cfg.l21).selection;
}

}  // namespace

double objective(const Eigen::MatrixXd& x, const FsaslState& state, const FsaslConfig& config) {
    if (state.w.w.size() == 0) throw ConfigError("objective: state has no W");
    const Eigen::MatrixXd xp = state.w.w.transpose() * x;

    // the solver stores the resolved gamma on W; fall back to the config value
    // for hand-built states
    const double gamma_used = state.w.gamma > 0.0 ? state.w.gamma : config.gamma;
    double total = gamma_used > 0.0 ? gamma_used * state.w.w.rowwise().norm().sum() : 0.0;
    if (uses_global(config.structure)) {
        if (state.s.s.size() == 0) throw ConfigError("objective: state has no S");
        total += (xp - xp * state.s.s).squaredNorm();
        total += config.alpha * state.s.s.cwiseAbs().sum();
    }
    if (uses_local(config.structure)) {
        if (state.p.p.size() == 0) throw ConfigError("objective: state has no P");
        const Eigen::MatrixXd dist = pairwise_sq_dists(xp);
        total += config.beta *
                 ((dist.array() * state.p.p.array()).sum() + state.mu * state.p.p.squaredNorm());
    }
    return total;
}

double objective(const DataMatrix& x, const FsaslState& state, const FsaslConfig& config) {
    return objective(x.values, state, config);
}

FsaslState run(const DataMatrix& x, const FsaslConfig& config) {
    validate(x);
    const Eigen::Index d = x.n_features();
    const Eigen::Index n = x.n_samples();
    check_config(config, d, n);
    const Eigen::MatrixXd& xm = x.values;

    FsaslState state;

    // Initialization: W0 solves the W subproblem with S = 0 and P from a
    // plain distance projection on the input data.
    state.s.alpha = config.alpha;
    if (uses_global(config.structure)) state.s.s = Eigen::MatrixXd::Zero(n, n);
    if (uses_local(config.structure)) state.p = update_local_graph(xm, config.k);

    Eigen::MatrixXd laplacian = build_laplacian(config, n, state.s, state.p);
    {
        CombinedLaplacian cl;
        cl.l = laplacian;
        cl.beta = config.beta;
        const Embedding emb0 = smallest_eigenpairs(cl, config.c, config.eigen);
        state.gamma_max_value = gamma_max(xm, emb0.y);
    }
    state.gamma_resolved =
        config.gamma_is_fraction ? config.gamma * state.gamma_max_value : config.gamma;
    if (state.gamma_resolved <= 0.0) {
        throw ConfigError("resolved gamma is not positive (gamma_max may be zero)");
    }

    state.w = w_step(config, xm, laplacian, state.gamma_resolved, nullptr);

    Eigen::MatrixXd x_prime = state.w.w.transpose() * xm;
    if (uses_local(config.structure)) state.mu = compute_mu(x_prime, config.k);

    if (!config.adaptive) {
        // fixed-structure mode: S and P come from the initial W, once
        try {
            if (uses_global(config.structure)) {
                state.s = update_global_graph(x_prime, config.alpha, config.lasso);
            }
            if (uses_local(config.structure)) {
                state.p = update_local_graph(x_prime, config.k, state.mu);
            }
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " (structure initialization)", e.column, 0);
        }
        laplacian = build_laplacian(config, n, state.s, state.p);
    }

    for (int t = 1; t <= config.max_outer_iters; ++t) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            if (config.adaptive) {
                x_prime.noalias() = state.w.w.transpose() * xm;
                if (uses_global(config.structure)) {
                    state.s =
                        update_global_graph(x_prime, config.alpha, config.lasso, &state.s);
                }
                if (uses_local(config.structure)) {
                    if (config.mu_policy == MuPolicy::recompute_each_iteration) {
                        state.mu = compute_mu(x_prime, config.k);
                    }
                    state.p = update_local_graph(x_prime, config.k, state.mu);
                }
                laplacian = build_laplacian(config, n, state.s, state.p);
            }
            state.w = w_step(config, xm, laplacian, state.gamma_resolved, &state.w);
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " (outer iteration " + std::to_string(t) +
                                  ")",
                              e.column, t);
        }

        const double obj = objective(xm, state, config);
        if (!std::isfinite(obj)) {
            throw SolverError("objective is not finite at outer iteration " + std::to_string(t),
                              -1, t);
        }
        state.objective_trace.push_back(obj);
        state.iterations = t;
        const auto t1 = std::chrono::steady_clock::now();
        state.iteration_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());

        if (t >= 2) {
            const double prev = state.objective_trace[static_cast<size_t>(t) - 2];
            if (obj > prev + 1e-9 * std::abs(prev)) ++state.monotonicity_violations;
            if (std::abs(obj - prev) <= config.obj_tol * std::max(std::abs(prev), 1e-30)) {
                state.converged = true;
                break;
            }
        }
    }
    return state;
}

FeatureRanking rank_features(const FsaslState& state) {
    if (state.w.w.size() == 0) throw ConfigError("rank_features: state has no W");
    FeatureRanking r;
    r.scores = state.w.w.rowwise().norm();
    r.order.resize(static_cast<size_t>(r.scores.size()));
    std::iota(r.order.begin(), r.order.end(), 0);
    std::stable_sort(r.order.begin(), r.order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (r.scores(a) != r.scores(b)) return r.scores(a) > r.scores(b);
        return a < b;
    });
    return r;
}

StructureVariant parse_variant(const std::string& name, bool* adaptive) {
    if (adaptive) *adaptive = true;
    if (name == "full") return StructureVariant::full;
    if (name == "global-only") return StructureVariant::global_only;
    if (name == "local-only") return StructureVariant::local_only;
    if (name == "fixed-structure") {
        if (adaptive) *adaptive = false;
        return StructureVariant::full;
    }
    throw ConfigError("unknown variant: " + name);
}

std::string to_string(StructureVariant v) {
    switch (v) {
        case StructureVariant::full: return "full";
        case StructureVariant::global_only: return "global-only";
        case StructureVariant::local_only: return "local-only";
    }
    return "full";
}

WPath parse_w_path(const std::string& name) {
    if (name == "two-step") return WPath::two_step;
    if (name == "generalized") return WPath::generalized;
    throw ConfigError("unknown w-path: " + name);
}

std::string to_string(WPath p) { return p == WPath::two_step ? "two-step" : "generalized"; }

MuPolicy parse_mu_policy(const std::string& name) {
    if (name == "recompute") return MuPolicy::recompute_each_iteration;
    if (name == "fixed") return MuPolicy::fixed_from_init;
    throw ConfigError("unknown mu policy: " + name);
}

std::string to_string(MuPolicy p) {
    return p == MuPolicy::recompute_each_iteration ? "recompute" : "fixed";
}

}  // namespace fsasl
