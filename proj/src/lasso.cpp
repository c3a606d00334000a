#include "fsasl/lasso.hpp"

#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fsasl/errors.hpp"

namespace fsasl {

namespace {

constexpr double kZeroThreshold = 1e-12;  // coefficients below this are stored as exact zeros

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

// Spectral norm estimate for the FISTA step size.
double gram_spectral_norm(const Eigen::MatrixXd& gram) {
    const Eigen::Index n = gram.rows();
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double lambda = 0.0;
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd w = gram * v;
        const double norm = w.norm();
        if (norm <= 0.0) return 0.0;
        v = w / norm;
        lambda = norm;
    }
    return lambda;
}

Eigen::VectorXd lasso_column_fista(const Eigen::MatrixXd& gram, const Eigen::VectorXd& target,
                                   Eigen::Index i, double alpha, const LassoSettings& settings,
                                   const Eigen::VectorXd* warm_start) {
    const Eigen::Index n = gram.rows();
    Eigen::VectorXd s = warm_start ? *warm_start : Eigen::VectorXd::Zero(n);
    s(i) = 0.0;

    const double lip = 2.0 * gram_spectral_norm(gram) * 1.02 + 1e-30;
    const double step = 1.0 / lip;

    Eigen::VectorXd y = s;
    double t = 1.0;
    for (int it = 0; it < settings.max_iters; ++it) {
        Eigen::VectorXd grad = 2.0 * (gram * y - target);
        Eigen::VectorXd s_next(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            s_next(j) = soft_threshold(y(j) - step * grad(j), step * alpha);
        }
        s_next(i) = 0.0;  // the pinned coordinate is a separable constraint
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = s_next + ((t - 1.0) / t_next) * (s_next - s);
        y(i) = 0.0;
        s = s_next;
        t = t_next;
        if (it % 8 == 7 &&
            detail::lasso_kkt_residual(gram, target, i, s, alpha) <= settings.kkt_tol) {
            break;
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(s(j)) < kZeroThreshold) s(j) = 0.0;
    }
    const double r = detail::lasso_kkt_residual(gram, target, i, s, alpha);
    if (r > settings.kkt_tol) {
        throw SolverError("lasso column " + std::to_string(i) +
                              " did not converge (proximal gradient): kkt residual " +
                              std::to_string(r),
                          i);
    }
    return s;
}

}  // namespace

namespace detail {

double lasso_kkt_residual(const Eigen::MatrixXd& gram, const Eigen::VectorXd& target,
                          Eigen::Index i, const Eigen::VectorXd& s, double alpha) {
    const Eigen::VectorXd grad = 2.0 * (gram * s - target);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < gram.rows(); ++j) {
        if (j == i) continue;
        double v;
        if (s(j) > 0.0) {
            v = std::abs(grad(j) + alpha);
        } else if (s(j) < 0.0) {
            v = std::abs(grad(j) - alpha);
        } else {
            v = std::max(0.0, std::abs(grad(j)) - alpha);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

double lasso_objective(const Eigen::MatrixXd& x_prime, Eigen::Index i, const Eigen::VectorXd& s,
                       double alpha) {
    return (x_prime.col(i) - x_prime * s).squaredNorm() + alpha * s.lpNorm<1>();
}

Eigen::VectorXd lasso_column_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& target,
                                  Eigen::Index i, double alpha, const LassoSettings& settings,
                                  const Eigen::VectorXd* warm_start) {
    const Eigen::Index n = gram.rows();
    if (i < 0 || i >= n) {
        throw ConfigError("lasso column index " + std::to_string(i) + " out of range");
    }
    if (alpha <= 0.0) throw ConfigError("lasso alpha must be positive");
    if (warm_start && warm_start->size() != n) {
        throw ConfigError("lasso warm start has wrong size");
    }

    Eigen::VectorXd s = warm_start ? *warm_start : Eigen::VectorXd::Zero(n);
    s(i) = 0.0;
    Eigen::VectorXd q = s.isZero(0.0) ? Eigen::VectorXd::Zero(n) : Eigen::VectorXd(gram * s);

    for (int sweep = 0; sweep < settings.max_iters; ++sweep) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double gjj = gram(j, j);
            double s_new = 0.0;
            if (gjj > 0.0) {
                // rho_j = x'_j . (x'_i - sum_{l != j} s_l x'_l), via the maintained q = G s
                const double rho = target(j) - q(j) + gjj * s(j);
                s_new = soft_threshold(rho, 0.5 * alpha) / gjj;
                if (std::abs(s_new) < kZeroThreshold) s_new = 0.0;
            }
            if (s_new != s(j)) {
                q.noalias() += gram.col(j) * (s_new - s(j));
                s(j) = s_new;
            }
        }
        if ((sweep & 63) == 63) q.noalias() = gram * s;  // counter incremental drift
        const Eigen::VectorXd grad = 2.0 * (q - target);
        double worst = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            double v;
            if (s(j) > 0.0) {
                v = std::abs(grad(j) + alpha);
            } else if (s(j) < 0.0) {
                v = std::abs(grad(j) - alpha);
            } else {
                v = std::max(0.0, std::abs(grad(j)) - alpha);
            }
            worst = std::max(worst, v);
        }
        if (worst <= settings.kkt_tol) {
            const double exact = lasso_kkt_residual(gram, target, i, s, alpha);
            if (exact <= settings.kkt_tol) return s;
            q.noalias() = gram * s;  // drift made the cheap check optimistic; keep going
        }
    }
    const double r = lasso_kkt_residual(gram, target, i, s, alpha);
    throw SolverError("lasso column " + std::to_string(i) + " did not converge in " +
                          std::to_string(settings.max_iters) + " sweeps: kkt residual " +
                          std::to_string(r),
                      i);
}

}  // namespace detail

Eigen::VectorXd solve_lasso_column(const Eigen::MatrixXd& x_prime, Eigen::Index i, double alpha,
                                   const LassoSettings& settings) {
    const Eigen::Index n = x_prime.cols();
    if (i < 0 || i >= n) {
        throw ConfigError("lasso column index " + std::to_string(i) + " out of range");
    }
    const Eigen::MatrixXd gram = x_prime.transpose() * x_prime;
    const Eigen::VectorXd target = gram.col(i);
    if (settings.algorithm == LassoAlgorithm::proximal_gradient) {
        return lasso_column_fista(gram, target, i, alpha, settings, nullptr);
    }
    return detail::lasso_column_gram(gram, target, i, alpha, settings, nullptr);
}

GlobalGraph update_global_graph(const Eigen::MatrixXd& x_prime, double alpha,
                                const LassoSettings& settings, const GlobalGraph* warm_start) {
    const Eigen::Index n = x_prime.cols();
    if (alpha <= 0.0) throw ConfigError("lasso alpha must be positive");
    if (warm_start && (warm_start->s.rows() != n || warm_start->s.cols() != n)) {
        throw ConfigError("warm start graph has wrong shape");
    }

    const Eigen::MatrixXd gram = x_prime.transpose() * x_prime;
    GlobalGraph out;
    out.alpha = alpha;
    out.s = Eigen::MatrixXd::Zero(n, n);

    // Columns are independent; each solve is deterministic given its inputs,
    // so the result does not depend on the schedule.
    long failed_column = -1;
    std::string failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (Eigen::Index i = 0; i < n; ++i) {
        try {
            const Eigen::VectorXd warm_col = warm_start ? warm_start->s.col(i) : Eigen::VectorXd();
            const Eigen::VectorXd* warm = warm_start ? &warm_col : nullptr;
            Eigen::VectorXd si;
            if (settings.algorithm == LassoAlgorithm::proximal_gradient) {
                si = lasso_column_fista(gram, gram.col(i), i, alpha, settings, warm);
            } else {
                si = detail::lasso_column_gram(gram, gram.col(i), i, alpha, settings, warm);
            }
            out.s.col(i) = si;
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (failed_column < 0 || i < failed_column) {
                    failed_column = i;
                    failure = e.what();
                }
            }
        }
    }
    if (failed_column >= 0) throw SolverError(failure, failed_column);
    return out;
}

}  // namespace fsasl
