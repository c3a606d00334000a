#include "fsasl/reference.hpp"

#include <algorithm>
#include <cmath>

#include "fsasl/errors.hpp"

namespace fsasl::reference {

Eigen::MatrixXd pairwise_sq_dists(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.cols();
    const Eigen::Index c = x.rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double acc = 0.0;
            for (Eigen::Index f = 0; f < c; ++f) {
                const double diff = x(f, i) - x(f, j);
                acc += diff * diff;
            }
            d(i, j) = acc;
        }
    }
    return d;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& a) {
    const Eigen::Index n = a.size();
    if (n == 0) throw ConfigError("cannot project an empty vector");
    auto mass = [&](double z) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) s += std::max(a(j) + z, 0.0);
        return s;
    };
    // mass(z) is nondecreasing in z; bracket the root of mass(z) = 1
    double lo = 1.0 / static_cast<double>(n) - a.maxCoeff();  // mass <= 1
    double hi = 1.0 / static_cast<double>(n) - a.minCoeff();  // mass >= 1
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mass(mid) < 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double z = 0.5 * (lo + hi);
    Eigen::VectorXd p(n);
    for (Eigen::Index j = 0; j < n; ++j) p(j) = std::max(a(j) + z, 0.0);
    // exact re-normalization of the positive support
    const double s = p.sum();
    if (s > 0.0) p /= s;
    return p;
}

Eigen::MatrixXd update_global_graph(const Eigen::MatrixXd& x_prime, double alpha,
                                    const LassoSettings& settings) {
    const Eigen::Index n = x_prime.cols();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd si = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd residual = x_prime.col(i);  // x'_i - X' s, maintained directly
        for (int sweep = 0; sweep < settings.max_iters; ++sweep) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                const double norm2 = x_prime.col(j).squaredNorm();
                if (norm2 <= 0.0) continue;
                const double rho = x_prime.col(j).dot(residual) + norm2 * si(j);
                double s_new = 0.0;
                if (rho > 0.5 * alpha) {
                    s_new = (rho - 0.5 * alpha) / norm2;
                } else if (rho < -0.5 * alpha) {
                    s_new = (rho + 0.5 * alpha) / norm2;
                }
                if (s_new != si(j)) {
                    residual -= x_prime.col(j) * (s_new - si(j));
                    si(j) = s_new;
                }
            }
            double worst = 0.0;
            const Eigen::VectorXd grad = -2.0 * (x_prime.transpose() * residual);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                double v;
                if (si(j) > 0.0) {
                    v = std::abs(grad(j) + alpha);
                } else if (si(j) < 0.0) {
                    v = std::abs(grad(j) - alpha);
                } else {
                    v = std::max(0.0, std::abs(grad(j)) - alpha);
                }
                worst = std::max(worst, v);
            }
            if (worst <= settings.kkt_tol) break;
        }
        s.col(i) = si;
    }
    return s;
}

Eigen::MatrixXd update_local_graph(const Eigen::MatrixXd& x_prime, double mu) {
    const Eigen::Index n = x_prime.cols();
    const Eigen::MatrixXd dist = pairwise_sq_dists(x_prime);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd a(n - 1);
        Eigen::Index t = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) a(t++) = -dist(i, j) / (2.0 * mu);
        }
        const Eigen::VectorXd row = project_simplex(a);
        t = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) p(i, j) = row(t++);
        }
    }
    return p;
}

double objective(const Eigen::MatrixXd& x, const FsaslState& state, const FsaslConfig& config) {
    const Eigen::MatrixXd xp = state.w.w.transpose() * x;
    const Eigen::Index n = x.cols();
    const Eigen::Index c = xp.rows();
    const double gamma_used = state.w.gamma > 0.0 ? state.w.gamma : config.gamma;

    double total = 0.0;
    for (Eigen::Index f = 0; f < state.w.w.rows(); ++f) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < state.w.w.cols(); ++j) row += state.w.w(f, j) * state.w.w(f, j);
        total += gamma_used * std::sqrt(row);
    }
    if (config.structure != StructureVariant::local_only) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index f = 0; f < c; ++f) {
                double rec = 0.0;
                for (Eigen::Index j = 0; j < n; ++j) rec += xp(f, j) * state.s.s(j, i);
                const double diff = xp(f, i) - rec;
                total += diff * diff;
            }
            for (Eigen::Index j = 0; j < n; ++j) total += config.alpha * std::abs(state.s.s(j, i));
        }
    }
    if (config.structure != StructureVariant::global_only) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                double dij = 0.0;
                for (Eigen::Index f = 0; f < c; ++f) {
                    const double diff = xp(f, i) - xp(f, j);
                    dij += diff * diff;
                }
                total += config.beta *
                         (dij * state.p.p(i, j) + state.mu * state.p.p(i, j) * state.p.p(i, j));
            }
        }
    }
    return total;
}

}  // namespace fsasl::reference
