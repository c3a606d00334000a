#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace oracles {

Eigen::VectorXd simplex_qp(const Eigen::VectorXd& a) {
    const int n = static_cast<int>(a.size());
    if (n > 16) throw std::runtime_error("simplex_qp oracle limited to n <= 16");
    const double inf = std::numeric_limits<double>::infinity();

    Eigen::VectorXd best;
    double best_dist = inf;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        double sum = 0.0;
        int size = 0;
        for (int j = 0; j < n; ++j) {
            if (mask & (1u << j)) {
                sum += a(j);
                ++size;
            }
        }
        const double z = (1.0 - sum) / size;
        Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
        bool feasible = true;
        for (int j = 0; j < n && feasible; ++j) {
            if (mask & (1u << j)) {
                p(j) = a(j) + z;
                feasible = p(j) >= -1e-12;
            } else {
                feasible = a(j) + z <= 1e-12;  // KKT for the inactive coordinates
            }
        }
        if (!feasible) continue;
        const double dist = (p - a).squaredNorm();
        if (dist < best_dist) {
            best_dist = dist;
            best = p.cwiseMax(0.0);
        }
    }
    if (best.size() == 0) throw std::runtime_error("simplex_qp found no feasible support");
    return best;
}

namespace {

double lasso_obj(const Eigen::MatrixXd& x_prime, Eigen::Index i, const Eigen::VectorXd& s,
                 double alpha) {
    return (x_prime.col(i) - x_prime * s).squaredNorm() + alpha * s.lpNorm<1>();
}

}  // namespace

LassoSolution lasso_enumeration(const Eigen::MatrixXd& x_prime, Eigen::Index i, double alpha) {
    const Eigen::Index n = x_prime.cols();
    std::vector<Eigen::Index> free_idx;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i) free_idx.push_back(j);
    }
    const int f = static_cast<int>(free_idx.size());
    if (f > 12) throw std::runtime_error("lasso_enumeration limited to 12 free coordinates");

    const Eigen::MatrixXd gram = x_prime.transpose() * x_prime;
    const Eigen::VectorXd b = gram.col(i);

    long total = 1;
    for (int t = 0; t < f; ++t) total *= 3;

    LassoSolution best;
    best.s = Eigen::VectorXd::Zero(n);
    best.objective = lasso_obj(x_prime, i, best.s, alpha);
    std::vector<int> sign(static_cast<size_t>(f), 0);
    for (long code = 0; code < total; ++code) {
        long rem = code;
        int active = 0;
        for (int t = 0; t < f; ++t) {
            sign[static_cast<size_t>(t)] = static_cast<int>(rem % 3) - 1;  // -1, 0, +1
            rem /= 3;
            if (sign[static_cast<size_t>(t)] != 0) ++active;
        }
        if (active == 0) continue;  // handled by the zero start

        Eigen::MatrixXd gaa(active, active);
        Eigen::VectorXd rhs(active);
        std::vector<Eigen::Index> cols;
        cols.reserve(static_cast<size_t>(active));
        for (int t = 0; t < f; ++t) {
            if (sign[static_cast<size_t>(t)] != 0) cols.push_back(free_idx[static_cast<size_t>(t)]);
        }
        for (int r = 0; r < active; ++r) {
            for (int c2 = 0; c2 < active; ++c2) {
                gaa(r, c2) = gram(cols[static_cast<size_t>(r)], cols[static_cast<size_t>(c2)]);
            }
        }
        {
            int r = 0;
            for (int t = 0; t < f; ++t) {
                if (sign[static_cast<size_t>(t)] != 0) {
                    rhs(r) = b(free_idx[static_cast<size_t>(t)]) -
                             0.5 * alpha * sign[static_cast<size_t>(t)];
                    ++r;
                }
            }
        }
        const Eigen::VectorXd sa = gaa.ldlt().solve(rhs);
        if (!sa.allFinite()) continue;

        Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
        bool ok = true;
        {
            int r = 0;
            for (int t = 0; t < f && ok; ++t) {
                if (sign[static_cast<size_t>(t)] != 0) {
                    s(free_idx[static_cast<size_t>(t)]) = sa(r);
                    ok = sa(r) * sign[static_cast<size_t>(t)] > 0.0;
                    ++r;
                }
            }
        }
        if (!ok) continue;
        // inactive coordinates must satisfy the subgradient bound
        const Eigen::VectorXd grad = 2.0 * (gram * s - b);
        for (int t = 0; t < f && ok; ++t) {
            if (sign[static_cast<size_t>(t)] == 0) {
                ok = std::abs(grad(free_idx[static_cast<size_t>(t)])) <= alpha + 1e-9;
            }
        }
        if (!ok) continue;
        const double obj = lasso_obj(x_prime, i, s, alpha);
        if (obj < best.objective) {
            best.objective = obj;
            best.s = s;
        }
    }
    return best;
}

LassoSolution lasso_long_cd(const Eigen::MatrixXd& x_prime, Eigen::Index i, double alpha,
                            int sweeps, double tol) {
    const Eigen::Index n = x_prime.cols();
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd residual = x_prime.col(i);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        double max_delta = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double norm2 = x_prime.col(j).squaredNorm();
            if (norm2 <= 0.0) continue;
            const double rho = x_prime.col(j).dot(residual) + norm2 * s(j);
            double s_new = 0.0;
            if (rho > 0.5 * alpha) {
                s_new = (rho - 0.5 * alpha) / norm2;
            } else if (rho < -0.5 * alpha) {
                s_new = (rho + 0.5 * alpha) / norm2;
            }
            if (s_new != s(j)) {
                residual -= x_prime.col(j) * (s_new - s(j));
                max_delta = std::max(max_delta, std::abs(s_new - s(j)));
                s(j) = s_new;
            }
        }
        if (max_delta <= tol) break;
    }
    return {s, lasso_obj(x_prime, i, s, alpha)};
}

double l21_prox_objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double gamma,
                          int max_iters, double tol) {
    const Eigen::Index d = x.rows();
    const Eigen::MatrixXd xxt = x * x.transpose();

    // power iteration for the Lipschitz constant of the smooth part
    Eigen::VectorXd v = Eigen::VectorXd::Ones(d).normalized();
    double lam = 1.0;
    for (int it = 0; it < 200; ++it) {
        v = (xxt * v).eval();
        const double nv = v.norm();
        if (nv <= 0.0) break;
        v /= nv;
        lam = nv;
    }
    const double step = 1.0 / (2.0 * lam * 1.01 + 1e-30);

    auto objective = [&](const Eigen::MatrixXd& w) {
        return (y - x.transpose() * w).squaredNorm() + gamma * w.rowwise().norm().sum();
    };

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, y.cols());
    Eigen::MatrixXd z = w;
    double t = 1.0;
    double best = objective(w);
    double prev = best;
    for (int it = 0; it < max_iters; ++it) {
        const Eigen::MatrixXd grad = 2.0 * (x * (x.transpose() * z - y));
        Eigen::MatrixXd w_next = z - step * grad;
        for (Eigen::Index r = 0; r < d; ++r) {
            const double norm = w_next.row(r).norm();
            const double shrink = norm > 0.0 ? std::max(0.0, 1.0 - step * gamma / norm) : 0.0;
            w_next.row(r) *= shrink;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        z = w_next + ((t - 1.0) / t_next) * (w_next - w);
        w = w_next;
        t = t_next;
        const double obj = objective(w);
        best = std::min(best, obj);
        if (it > 50 && std::abs(prev - obj) <= tol * std::max(1.0, std::abs(prev))) break;
        prev = obj;
    }
    return best;
}

double assignment_bruteforce(const Eigen::MatrixXd& weights) {
    const int n = static_cast<int>(weights.rows());
    if (n > 8) throw std::runtime_error("assignment_bruteforce limited to n <= 8");
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = -std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += weights(i, perm[static_cast<size_t>(i)]);
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937& rng,
                              double scale) {
    std::normal_distribution<double> gauss(0.0, scale);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
    }
    return m;
}

}  // namespace oracles
