#include "fsasl/local_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fsasl/errors.hpp"

namespace fsasl {

namespace {

constexpr double kMuFloor = 1e-12;

void check_finite(const Eigen::VectorXd& a) {
    if (!a.allFinite()) throw ConfigError("simplex projection input has NaN/Inf entries");
}

}  // namespace

Eigen::VectorXd project_simplex(const Eigen::VectorXd& a) {
    check_finite(a);
    const Eigen::Index n = a.size();
    if (n == 0) throw ConfigError("cannot project an empty vector");

    std::vector<double> b(a.data(), a.data() + n);
    std::sort(b.begin(), b.end(), std::greater<double>());

    double cumsum = 0.0;
    double z = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        cumsum += b[static_cast<size_t>(j)];
        const double candidate = (1.0 - cumsum) / static_cast<double>(j + 1);
        if (b[static_cast<size_t>(j)] + candidate > 0.0) z = candidate;
    }

    Eigen::VectorXd p(n);
    for (Eigen::Index j = 0; j < n; ++j) p(j) = std::max(a(j) + z, 0.0);
    return p;
}

Eigen::MatrixXd pairwise_sq_dists(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.cols();
    Eigen::MatrixXd d(n, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (Eigen::Index i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = (x.col(i) - x.col(j)).squaredNorm();
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return d;
}

double compute_mu(const Eigen::MatrixXd& x_prime, int k) {
    const Eigen::Index n = x_prime.cols();
    if (k < 1 || k > n - 2) {
        throw ConfigError("neighborhood size k=" + std::to_string(k) +
                          " out of range [1, n-2] for n=" + std::to_string(n));
    }
    const Eigen::MatrixXd dist = pairwise_sq_dists(x_prime);

    double total = 0.0;
    std::vector<std::pair<double, Eigen::Index>> row;
    row.reserve(static_cast<size_t>(n - 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        row.clear();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) row.emplace_back(dist(i, j), j);
        }
        // ties broken by sample index for determinism
        std::sort(row.begin(), row.end());
        double head = 0.0;
        for (int k2 = 0; k2 < k; ++k2) head += row[static_cast<size_t>(k2)].first;
        total += 0.5 * k * row[static_cast<size_t>(k)].first - 0.5 * head;
    }
    const double mu = total / static_cast<double>(n);
    return mu < kMuFloor ? kMuFloor : mu;
}

Eigen::MatrixXd affinity_matrix(const Eigen::MatrixXd& x_prime, double mu) {
    if (mu <= 0.0) throw ConfigError("affinity requires mu > 0");
    Eigen::MatrixXd a = pairwise_sq_dists(x_prime);
    a *= -1.0 / (2.0 * mu);
    return a;
}

LocalGraph update_local_graph(const Eigen::MatrixXd& x_prime, int k) {
    return update_local_graph(x_prime, k, compute_mu(x_prime, k));
}

LocalGraph update_local_graph(const Eigen::MatrixXd& x_prime, int k, double mu) {
    const Eigen::Index n = x_prime.cols();
    if (n < 3) throw ConfigError("local graph needs n >= 3 samples");
    const Eigen::MatrixXd a = affinity_matrix(x_prime, mu);

    LocalGraph g;
    g.mu = mu;
    g.k = k;
    g.p = Eigen::MatrixXd::Zero(n, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (Eigen::Index i = 0; i < n; ++i) {
        // project the off-diagonal entries; the self affinity stays out so the
        // row cannot collapse onto P_ii
        Eigen::VectorXd row(n - 1);
        Eigen::Index t = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) row(t++) = a(i, j);
        }
        const Eigen::VectorXd p = project_simplex(row);
        t = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) g.p(i, j) = p(t++);
        }
    }
    return g;
}

Eigen::MatrixXd local_laplacian(const LocalGraph& g) {
    const Eigen::Index n = g.p.rows();
    if (n == 0 || g.p.cols() != n) throw ConfigError("local graph matrix must be square");
    const Eigen::MatrixXd w = 0.5 * (g.p + g.p.transpose());
    Eigen::MatrixXd l = -w;
    l.diagonal() += w.rowwise().sum();
    return l;
}

}  // namespace fsasl
