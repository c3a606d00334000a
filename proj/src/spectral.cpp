#include "fsasl/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <string>

#include "fsasl/errors.hpp"

namespace fsasl {

namespace detail {

void fix_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index at = 0;
        double best = 0.0;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const double mag = std::abs(vectors(i, j));
            if (mag > best) {
                best = mag;
                at = i;
            }
        }
        if (best > 0.0 && vectors(at, j) < 0.0) vectors.col(j) = -vectors.col(j);
    }
}

}  // namespace detail

namespace {

void require_square_match(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw ConfigError("laplacians must be square with matching order");
    }
}

Eigen::VectorXd irls_weights(const Eigen::VectorXd& row_norms, double delta) {
    return (2.0 * row_norms.array() + delta).inverse().matrix();
}

Eigen::VectorXd row_norms_of(const Eigen::MatrixXd& w) {
    return w.rowwise().norm();
}

// Shift-invert Lanczos with full reorthogonalization for the c smallest
// eigenpairs of a PSD matrix. Deterministic start vector.
Embedding lanczos_smallest(const Eigen::MatrixXd& l, Eigen::Index c,
                           const EigenSettings& settings) {
    const Eigen::Index n = l.rows();
    const double scale = std::max(l.diagonal().cwiseAbs().maxCoeff(), 1e-12);

    double sigma = 1e-6 * scale;
    Eigen::LLT<Eigen::MatrixXd> llt;
    for (int attempt = 0; attempt < 6; ++attempt) {
        llt.compute(l + sigma * Eigen::MatrixXd::Identity(n, n));
        if (llt.info() == Eigen::Success) break;
        sigma *= 100.0;
    }
    if (llt.info() != Eigen::Success) {
        throw SolverError("eigensolver: could not factor the shifted laplacian");
    }

    const double fnorm = std::max(l.norm(), 1e-300);
    const Eigen::Index cap = settings.max_subspace > 0
                                 ? std::min<Eigen::Index>(n, settings.max_subspace)
                                 : std::min<Eigen::Index>(n, std::max<Eigen::Index>(8 * c + 200, 100));
    Eigen::Index m = std::min<Eigen::Index>(n, std::max<Eigen::Index>(4 * c + 30, 50));

    std::mt19937 rng(20240601u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto fresh_vector = [&](const Eigen::MatrixXd& v, Eigen::Index cols) {
        Eigen::VectorXd w(n);
        for (int tries = 0; tries < 50; ++tries) {
            for (Eigen::Index i = 0; i < n; ++i) w(i) = gauss(rng);
            if (cols > 0) {
                w.noalias() -= v.leftCols(cols) * (v.leftCols(cols).transpose() * w);
                w.noalias() -= v.leftCols(cols) * (v.leftCols(cols).transpose() * w);
            }
            const double norm = w.norm();
            if (norm > 1e-8) return Eigen::VectorXd(w / norm);
        }
        throw SolverError("eigensolver: failed to extend the Krylov basis");
    };

    while (true) {
        Eigen::MatrixXd v(n, m);
        Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);  // beta(j) couples j and j+1
        v.col(0) = fresh_vector(v, 0);

        Eigen::Index built = 0;
        for (Eigen::Index j = 0; j < m; ++j) {
            Eigen::VectorXd w = llt.solve(v.col(j));
            alpha(j) = v.col(j).dot(w);
            // full reorthogonalization, twice
            w.noalias() -= v.leftCols(j + 1) * (v.leftCols(j + 1).transpose() * w);
            w.noalias() -= v.leftCols(j + 1) * (v.leftCols(j + 1).transpose() * w);
            built = j + 1;
            if (j + 1 == m) break;
            const double norm = w.norm();
            if (norm < 1e-13) {
                beta(j) = 0.0;  // invariant subspace; restart the recurrence
                v.col(j + 1) = fresh_vector(v, j + 1);
            } else {
                beta(j) = norm;
                v.col(j + 1) = w / norm;
            }
        }

        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(built, built);
        for (Eigen::Index j = 0; j < built; ++j) {
            t(j, j) = alpha(j);
            if (j + 1 < built) {
                t(j, j + 1) = beta(j);
                t(j + 1, j) = beta(j);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(t);
        if (tes.info() != Eigen::Success) throw SolverError("eigensolver: tridiagonal solve failed");

        // largest theta of the inverted operator = smallest eigenvalues of L
        Embedding out;
        out.y.resize(n, c);
        out.eigenvalues.resize(c);
        bool ok = built >= c;
        for (Eigen::Index j = 0; ok && j < c; ++j) {
            const Eigen::Index src = built - 1 - j;  // descending theta
            const double theta = tes.eigenvalues()(src);
            if (theta <= 0.0) {
                ok = false;
                break;
            }
            const Eigen::VectorXd y = v.leftCols(built) * tes.eigenvectors().col(src);
            const double lambda = 1.0 / theta - sigma;
            out.y.col(j) = y;
            out.eigenvalues(j) = lambda;
            ok = (l * y - lambda * y).norm() <= settings.residual_tol * fnorm;
        }
        if (ok) {
            // theta was taken descending, so lambda is already ascending
            detail::fix_signs(out.y);
            return out;
        }
        if (m >= cap) {
            throw SolverError("eigensolver did not converge with subspace dimension " +
                              std::to_string(m));
        }
        m = std::min(cap, 2 * m);
    }
}

}  // namespace

Eigen::MatrixXd global_laplacian(const GlobalGraph& s) {
    const Eigen::Index n = s.s.rows();
    if (s.s.cols() != n) throw ConfigError("global graph matrix must be square");
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - s.s;
    Eigen::MatrixXd l = m * m.transpose();
    l = 0.5 * (l + l.transpose()).eval();
    return l;
}

CombinedLaplacian combine(const Eigen::MatrixXd& l_s, const Eigen::MatrixXd& l_p, double beta) {
    require_square_match(l_s, l_p);
    if (beta < 0.0) throw ConfigError("beta must be nonnegative");
    CombinedLaplacian out;
    out.beta = beta;
    out.l = l_s + beta * l_p;
    out.l = 0.5 * (out.l + out.l.transpose()).eval();
    return out;
}

Embedding smallest_eigenpairs(const CombinedLaplacian& l, Eigen::Index c,
                              const EigenSettings& settings) {
    const Eigen::Index n = l.l.rows();
    if (l.l.cols() != n) throw ConfigError("laplacian must be square");
    if (c < 1 || c > n - 1) {
        throw ConfigError("embedding dimension c=" + std::to_string(c) +
                          " out of range [1, n-1] for n=" + std::to_string(n));
    }
    if (n > settings.dense_threshold) return lanczos_smallest(l.l, c, settings);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l.l);
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver did not converge");
    Embedding out;
    out.y = es.eigenvectors().leftCols(c);
    out.eigenvalues = es.eigenvalues().head(c);
    detail::fix_signs(out.y);
    return out;
}

L21Result solve_l21(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double gamma,
                    const L21Settings& settings) {
    const Eigen::Index d = x.rows();
    const Eigen::Index n = x.cols();
    if (y.rows() != n) {
        throw ConfigError("regression target must have one row per sample: expected " +
                          std::to_string(n) + ", got " + std::to_string(y.rows()));
    }
    if (gamma < 0.0) throw ConfigError("gamma must be nonnegative");

    const Eigen::MatrixXd xxt = x * x.transpose();
    const Eigen::MatrixXd xy = x * y;
    const double ridge =
        (settings.auto_ridge && d > n) ? 1e-8 * xxt.trace() / static_cast<double>(d) : 0.0;

    std::vector<Eigen::Index> zero_rows;
    for (Eigen::Index i = 0; i < d; ++i) {
        if ((x.row(i).array() == 0.0).all()) zero_rows.push_back(i);
    }

    L21Result res;
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(d);
    Eigen::MatrixXd w;
    double prev_obj = 0.0;
    for (int it = 0; it < settings.max_iters; ++it) {
        Eigen::MatrixXd lhs = xxt;
        if (gamma > 0.0) lhs.diagonal() += gamma * weights;
        if (ridge > 0.0) lhs.diagonal().array() += ridge;
        w = lhs.ldlt().solve(xy);
        if (!w.allFinite()) {
            throw SolverError("l21 regression: singular linear system after regularization");
        }
        for (const Eigen::Index i : zero_rows) w.row(i).setZero();

        const Eigen::VectorXd norms = row_norms_of(w);
        const double obj = (y - x.transpose() * w).squaredNorm() + gamma * norms.sum();
        res.objective_trace.push_back(obj);
        res.iterations = it + 1;
        if (gamma == 0.0) {
            res.converged = true;
            break;
        }
        if (it > 0 && std::abs(prev_obj - obj) <= settings.tol * std::max(std::abs(prev_obj), 1e-30)) {
            res.converged = true;
            break;
        }
        prev_obj = obj;
        weights = irls_weights(norms, settings.delta);
    }

    res.selection.w = w;
    res.selection.gamma = gamma;
    res.selection.row_norms = row_norms_of(w);
    return res;
}

SelectionMatrix solve_w_generalized(const Eigen::MatrixXd& x, const CombinedLaplacian& l,
                                    double gamma, const SelectionMatrix* w_prev, Eigen::Index c,
                                    const L21Settings& settings) {
    const Eigen::Index d = x.rows();
    const Eigen::Index n = x.cols();
    if (l.l.rows() != n) throw ConfigError("laplacian order must match the sample count");
    if (c < 1 || c > d) throw ConfigError("need 1 <= c <= d for the generalized eigen path");
    if (gamma < 0.0) throw ConfigError("gamma must be nonnegative");
    if (w_prev && w_prev->w.rows() != d) throw ConfigError("w_prev has wrong row count");

    Eigen::VectorXd weights = w_prev ? irls_weights(w_prev->row_norms.size() == d
                                                        ? w_prev->row_norms
                                                        : row_norms_of(w_prev->w),
                                                    settings.delta)
                                     : Eigen::VectorXd::Ones(d);

    Eigen::MatrixXd inner = l.l;
    Eigen::MatrixXd a = x * inner * x.transpose();
    if (gamma > 0.0) a.noalias() += x * (gamma * weights).asDiagonal() * x.transpose();
    a = 0.5 * (a + a.transpose()).eval();

    Eigen::MatrixXd b = x * x.transpose();
    if (settings.auto_ridge && d > n) {
        b.diagonal().array() += 1e-8 * b.trace() / static_cast<double>(d);
    }
    {
        Eigen::LLT<Eigen::MatrixXd> llt(b);
        if (llt.info() != Eigen::Success) {
            throw SolverError("generalized eigen path: X X^T is singular (ridge disabled or ineffective)");
        }
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(a, b);
    if (ges.info() != Eigen::Success) {
        throw SolverError("generalized eigensolver did not converge");
    }

    SelectionMatrix out;
    out.w = ges.eigenvectors().leftCols(c);  // ascending eigenvalues, W^T B W = I
    detail::fix_signs(out.w);
    out.gamma = gamma;
    out.row_norms = row_norms_of(out.w);
    return out;
}

double gamma_max(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (y.rows() != x.cols()) throw ConfigError("gamma_max: dimension mismatch");
    return (2.0 * x * y).rowwise().norm().maxCoeff();
}

}  // namespace fsasl
