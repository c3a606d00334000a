#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fsasl/errors.hpp"
#include "fsasl/lasso.hpp"
#include "oracles.hpp"

using namespace fsasl;

TEST_CASE("duplicate column takes all the weight") {
    // x'_1 = x'_2, small alpha: column 1 reconstructs through its twin
    Eigen::MatrixXd x(2, 3);
    x.col(0) << 1.0, 2.0;
    x.col(1) << 1.0, 2.0;
    x.col(2) << -3.0, 0.5;
    const double alpha = 1e-3;
    const Eigen::VectorXd s = solve_lasso_column(x, 0, alpha);
    CHECK(s(0) == 0.0);
    CHECK(s(1) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK((x.col(0) - x * s).norm() < 1e-2);
    const auto oracle = oracles::lasso_enumeration(x, 0, alpha);
    CHECK(detail::lasso_objective(x, 0, s, alpha) <= oracle.objective + 1e-6);
}

TEST_CASE("large alpha deactivates every coordinate") {
    Eigen::MatrixXd x(3, 4);
    x << 1, 0, 2, -1, 0, 1, 1, 3, 2, 2, 0, 1;
    const Eigen::MatrixXd gram = x.transpose() * x;
    for (Eigen::Index i = 0; i < 4; ++i) {
        double bound = 0.0;
        for (Eigen::Index j = 0; j < 4; ++j) {
            if (j != i) bound = std::max(bound, std::abs(gram(j, i)));
        }
        const Eigen::VectorXd s = solve_lasso_column(x, i, 2.0 * bound + 0.5);
        CHECK(s.isZero(0.0));
    }
}

TEST_CASE("hand-checked 2x3 instance: s_3 = (0.95, 0.95, 0)") {
    Eigen::MatrixXd x(2, 3);
    x << 1, 0, 1, 0, 1, 1;
    const Eigen::VectorXd s = solve_lasso_column(x, 2, 0.1);
    CHECK(s(0) == doctest::Approx(0.95).epsilon(1e-9));
    CHECK(s(1) == doctest::Approx(0.95).epsilon(1e-9));
    CHECK(s(2) == 0.0);
    const auto oracle = oracles::lasso_enumeration(x, 2, 0.1);
    CHECK(std::abs(detail::lasso_objective(x, 2, s, 0.1) - oracle.objective) < 1e-6);
}

TEST_CASE("objective certificate on random instances") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> dc(1, 5), dn(3, 12);
    std::uniform_real_distribution<double> da(0.05, 1.5);
    for (int rep = 0; rep < 15; ++rep) {
        const Eigen::MatrixXd x = oracles::random_matrix(dc(rng), dn(rng), rng);
        const double alpha = da(rng);
        const Eigen::Index i = std::uniform_int_distribution<Eigen::Index>(0, x.cols() - 1)(rng);
        const Eigen::VectorXd s = solve_lasso_column(x, i, alpha);
        const auto oracle = oracles::lasso_long_cd(x, i, alpha);
        CHECK(detail::lasso_objective(x, i, s, alpha) <= oracle.objective + 1e-6);
        const Eigen::MatrixXd gram = x.transpose() * x;
        CHECK(detail::lasso_kkt_residual(gram, gram.col(i), i, s, alpha) <= 1e-6);
    }
}

TEST_CASE("enumeration oracle agrees with long-run coordinate descent") {
    // validates one oracle against the other on tiny instances
    std::mt19937 rng(13);
    for (int rep = 0; rep < 8; ++rep) {
        const Eigen::MatrixXd x = oracles::random_matrix(3, 6, rng);
        const auto a = oracles::lasso_enumeration(x, 1, 0.3);
        const auto b = oracles::lasso_long_cd(x, 1, 0.3);
        CHECK(std::abs(a.objective - b.objective) < 1e-8);
    }
}

TEST_CASE("update_global_graph: zero diagonal, identical samples share weight") {
    Eigen::MatrixXd x(2, 3);
    x.col(0) << 1.0, 1.0;
    x.col(1) << 1.0, 1.0;
    x.col(2) << 1.0, 1.0;
    const GlobalGraph g = update_global_graph(x, 1e-4);
    for (Eigen::Index i = 0; i < 3; ++i) {
        CHECK(g.s(i, i) == 0.0);
        // the two other samples carry weight summing to ~1
        CHECK(g.s.col(i).sum() == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(g.s.col(i).minCoeff() >= 0.0);
    }
}

TEST_CASE("update_global_graph: very large alpha empties the graph") {
    std::mt19937 rng(3);
    const Eigen::MatrixXd x = oracles::random_matrix(4, 6, rng);
    const GlobalGraph g = update_global_graph(x, 1e9);
    CHECK(g.s.isZero(0.0));
}

TEST_CASE("monotone sparsity along an alpha grid") {
    std::mt19937 rng(5);
    const Eigen::MatrixXd x = oracles::random_matrix(4, 10, rng);
    int prev_nnz = std::numeric_limits<int>::max();
    for (double alpha : {0.01, 0.1, 0.5, 2.0, 10.0}) {
        const GlobalGraph g = update_global_graph(x, alpha);
        const int nnz = static_cast<int>((g.s.array() != 0.0).count());
        CHECK(nnz <= prev_nnz);
        prev_nnz = nnz;
    }
}

TEST_CASE("proximal gradient agrees with coordinate descent") {
    std::mt19937 rng(17);
    const Eigen::MatrixXd x = oracles::random_matrix(4, 8, rng);
    LassoSettings cd;
    LassoSettings pg;
    pg.algorithm = LassoAlgorithm::proximal_gradient;
    pg.max_iters = 200000;
    pg.kkt_tol = 1e-7;
    for (Eigen::Index i = 0; i < 8; i += 3) {
        const Eigen::VectorXd a = solve_lasso_column(x, i, 0.4, cd);
        const Eigen::VectorXd b = solve_lasso_column(x, i, 0.4, pg);
        CHECK(std::abs(detail::lasso_objective(x, i, a, 0.4) -
                       detail::lasso_objective(x, i, b, 0.4)) < 1e-6);
    }
}

TEST_CASE("warm start does not change the fixed point") {
    std::mt19937 rng(23);
    const Eigen::MatrixXd x = oracles::random_matrix(3, 7, rng);
    const GlobalGraph cold = update_global_graph(x, 0.2);
    const GlobalGraph warm = update_global_graph(x, 0.2, {}, &cold);
    CHECK((cold.s - warm.s).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("non-convergence reports the offending column") {
    std::mt19937 rng(29);
    const Eigen::MatrixXd x = oracles::random_matrix(4, 9, rng);
    LassoSettings strict;
    strict.max_iters = 1;
    strict.kkt_tol = 1e-300;
    try {
        update_global_graph(x, 0.01, strict);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.column >= 0);
        CHECK(std::string(e.what()).find("kkt residual") != std::string::npos);
    }
}

TEST_CASE("dimension and parameter validation") {
    Eigen::MatrixXd x(2, 4);
    x.setRandom();
    CHECK_THROWS_AS(solve_lasso_column(x, 4, 0.1), ConfigError);
    CHECK_THROWS_AS(solve_lasso_column(x, -1, 0.1), ConfigError);
    CHECK_THROWS_AS(update_global_graph(x, 0.0), ConfigError);
    GlobalGraph bad;
    bad.s = Eigen::MatrixXd::Zero(3, 3);
    CHECK_THROWS_AS(update_global_graph(x, 0.1, {}, &bad), ConfigError);
}
