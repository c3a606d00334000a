#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "fsasl/errors.hpp"
#include "fsasl/local_graph.hpp"
#include "oracles.hpp"

using namespace fsasl;

TEST_CASE("simplex projection: point already on the simplex is fixed") {
    Eigen::VectorXd a(2);
    a << 0.3, 0.7;
    const Eigen::VectorXd p = project_simplex(a);
    CHECK(p(0) == doctest::Approx(0.3));
    CHECK(p(1) == doctest::Approx(0.7));
}

TEST_CASE("simplex projection: hand-traced cases") {
    // (2,0): rho=1, z=-1 -> (1,0)
    Eigen::VectorXd a(2);
    a << 2.0, 0.0;
    Eigen::VectorXd p = project_simplex(a);
    CHECK(p(0) == doctest::Approx(1.0));
    CHECK(p(1) == doctest::Approx(0.0));

    // (0.4,0.4): rho=2, z=0.1 -> (0.5,0.5)
    a << 0.4, 0.4;
    p = project_simplex(a);
    CHECK(p(0) == doctest::Approx(0.5));
    CHECK(p(1) == doctest::Approx(0.5));
}

TEST_CASE("simplex projection matches the QP oracle on random vectors") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> dn(1, 10);
    for (int rep = 0; rep < 300; ++rep) {
        const int n = dn(rng);
        Eigen::VectorXd a = oracles::random_matrix(n, 1, rng, 2.0).col(0);
        const Eigen::VectorXd p = project_simplex(a);
        const Eigen::VectorXd q = oracles::simplex_qp(a);
        CHECK((p - q).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(p.minCoeff() >= 0.0);
        CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("simplex projection is order-equivariant") {
    std::mt19937 rng(37);
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::VectorXd a = oracles::random_matrix(7, 1, rng, 3.0).col(0);
        const Eigen::VectorXd p = project_simplex(a);
        std::vector<int> perm(7);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Eigen::VectorXd ap(7);
        for (int j = 0; j < 7; ++j) ap(j) = a(perm[static_cast<size_t>(j)]);
        const Eigen::VectorXd pp = project_simplex(ap);
        for (int j = 0; j < 7; ++j) {
            CHECK(pp(j) == doctest::Approx(p(perm[static_cast<size_t>(j)])).epsilon(1e-12));
        }
    }
}

TEST_CASE("compute_mu: 1-D points (0,1,3), k=1 gives exactly 8/3") {
    Eigen::MatrixXd x(1, 3);
    x << 0.0, 1.0, 3.0;
    CHECK(compute_mu(x, 1) == 8.0 / 3.0);
}

TEST_CASE("compute_mu: degenerate inputs floor at epsilon") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Constant(2, 5, 3.14);
    CHECK(compute_mu(x, 2) == 1e-12);
}

TEST_CASE("compute_mu scales quadratically with the data") {
    std::mt19937 rng(41);
    const Eigen::MatrixXd x = oracles::random_matrix(3, 8, rng);
    const double mu1 = compute_mu(x, 3);
    const double mu2 = compute_mu((2.0 * x).eval(), 3);
    CHECK(mu2 == doctest::Approx(4.0 * mu1).epsilon(1e-12));
}

TEST_CASE("compute_mu validates k") {
    Eigen::MatrixXd x(1, 4);
    x << 0, 1, 2, 3;
    CHECK_THROWS_AS(compute_mu(x, 0), ConfigError);
    CHECK_THROWS_AS(compute_mu(x, 3), ConfigError);
}

TEST_CASE("update_local_graph: near-duplicate pairs pick their partner") {
    Eigen::MatrixXd x(2, 4);
    x.col(0) << 0.0, 0.0;
    x.col(1) << 0.01, 0.0;
    x.col(2) << 10.0, 10.0;
    x.col(3) << 10.01, 10.0;
    const LocalGraph g = update_local_graph(x, 1);
    CHECK(g.p(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(g.p(1, 0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(g.p(2, 3) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(g.p(3, 2) == doctest::Approx(1.0).epsilon(1e-6));
    // verify each row against the QP oracle
    const Eigen::MatrixXd a = affinity_matrix(x, g.mu);
    for (int i = 0; i < 4; ++i) {
        Eigen::VectorXd row(3);
        int t = 0;
        for (int j = 0; j < 4; ++j) {
            if (j != i) row(t++) = a(i, j);
        }
        const Eigen::VectorXd q = oracles::simplex_qp(row);
        t = 0;
        for (int j = 0; j < 4; ++j) {
            if (j != i) CHECK(g.p(i, j) == doctest::Approx(q(t++)).epsilon(1e-8));
        }
    }
}

TEST_CASE("update_local_graph: coincident samples give uniform off-diagonal rows") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Constant(3, 5, 1.0);
    const LocalGraph g = update_local_graph(x, 2);
    for (int i = 0; i < 5; ++i) {
        CHECK(g.p(i, i) == 0.0);
        for (int j = 0; j < 5; ++j) {
            if (j != i) CHECK(g.p(i, j) == doctest::Approx(0.25));
        }
    }
}

TEST_CASE("update_local_graph: middle of the line (0,1,3) leans to the near end") {
    Eigen::MatrixXd x(1, 3);
    x << 0.0, 1.0, 3.0;
    const LocalGraph g = update_local_graph(x, 1);
    CHECK(g.mu == 8.0 / 3.0);
    CHECK(g.p(1, 0) > g.p(1, 2));
    for (int i = 0; i < 3; ++i) CHECK(g.p.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("row support stays near k on Gaussian data") {
    for (int k : {3, 5, 8}) {
        std::mt19937 rng(100 + static_cast<unsigned>(k));
        const Eigen::MatrixXd x = oracles::random_matrix(3, 50, rng);
        const LocalGraph g = update_local_graph(x, k);
        double nnz = 0.0;
        for (int i = 0; i < 50; ++i) {
            nnz += static_cast<double>((g.p.row(i).array() > 0.0).count());
        }
        const double mean_support = nnz / 50.0;
        CHECK(mean_support >= k - 1.0);
        CHECK(mean_support <= k + 1.0);
    }
}

TEST_CASE("local graph rows are stochastic and in [0,1]") {
    std::mt19937 rng(43);
    const Eigen::MatrixXd x = oracles::random_matrix(4, 12, rng);
    const LocalGraph g = update_local_graph(x, 4);
    for (int i = 0; i < 12; ++i) {
        CHECK(g.p.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(g.p.row(i).minCoeff() >= 0.0);
        CHECK(g.p.row(i).maxCoeff() <= 1.0);
    }
}

TEST_CASE("local_laplacian: two-node exchange graph") {
    LocalGraph g;
    g.p.resize(2, 2);
    g.p << 0, 1, 1, 0;
    g.mu = 1.0;
    g.k = 1;
    const Eigen::MatrixXd l = local_laplacian(g);
    CHECK(l(0, 0) == doctest::Approx(1.0));
    CHECK(l(0, 1) == doctest::Approx(-1.0));
    CHECK(l(1, 0) == doctest::Approx(-1.0));
    CHECK(l(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("local_laplacian: PSD, zero row sums, quadratic form identity") {
    std::mt19937 rng(47);
    const Eigen::MatrixXd x = oracles::random_matrix(3, 9, rng);
    const LocalGraph g = update_local_graph(x, 3);
    const Eigen::MatrixXd l = local_laplacian(g);
    CHECK((l - l.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 9; ++i) CHECK(std::abs(l.row(i).sum()) < 1e-10);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);

    const Eigen::MatrixXd w = 0.5 * (g.p + g.p.transpose());
    for (int rep = 0; rep < 5; ++rep) {
        const Eigen::VectorXd v = oracles::random_matrix(9, 1, rng).col(0);
        double quad = 0.0;
        for (int i = 0; i < 9; ++i) {
            for (int j = 0; j < 9; ++j) quad += 0.5 * w(i, j) * (v(i) - v(j)) * (v(i) - v(j));
        }
        CHECK(v.dot(l * v) == doctest::Approx(quad).epsilon(1e-8));
    }
}

TEST_CASE("uniform P on n=3 has the constant vector in its null space") {
    LocalGraph g;
    g.p = Eigen::MatrixXd::Constant(3, 3, 0.5);
    g.p.diagonal().setZero();
    g.mu = 1.0;
    g.k = 1;
    const Eigen::MatrixXd l = local_laplacian(g);
    CHECK((l * Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() < 1e-12);
}
