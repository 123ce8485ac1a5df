#include "atomonly/krylov_schur.hpp"
#include "atomonly/errors.hpp"

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace atomonly {

namespace {

using cplx = std::complex<double>;

Eigen::VectorXcd random_vector(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(nd(rng), nd(rng));
    return v;
}

// orthogonalize w against the first j+1 columns of V (classical Gram-Schmidt, one DGKS pass)
Eigen::VectorXcd orthogonalize(const Eigen::MatrixXcd& V, Eigen::Index cols, Eigen::VectorXcd& w) {
    const auto Vj = V.leftCols(cols);
    Eigen::VectorXcd h = Vj.adjoint() * w;
    w.noalias() -= Vj * h;
    Eigen::VectorXcd h2 = Vj.adjoint() * w;
    w.noalias() -= Vj * h2;
    h += h2;
    return h;
}

// eigenvector of upper-triangular T for diagonal entry i, unit norm
Eigen::VectorXcd triangular_eigvec(const Eigen::MatrixXcd& T, Eigen::Index i) {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(T.rows());
    y[i] = 1.0;
    const cplx lam = T(i, i);
    const double small = 1e-300 + 1e-15 * std::abs(lam);
    for (Eigen::Index r = i - 1; r >= 0; --r) {
        cplx s = 0.0;
        for (Eigen::Index c = r + 1; c <= i; ++c) s += T(r, c) * y[c];
        cplx den = T(r, r) - lam;
        if (std::abs(den) < small) den = small;
        y[r] = -s / den;
    }
    return y / y.norm();
}

void reorder_by_magnitude(Eigen::MatrixXcd& T, Eigen::MatrixXcd& U) {
    const lapack_int m = static_cast<lapack_int>(T.rows());
    for (lapack_int pos = 0; pos < m; ++pos) {
        lapack_int best = pos;
        for (lapack_int i = pos + 1; i < m; ++i)
            if (std::abs(T(i, i)) > std::abs(T(best, best))) best = i;
        if (best == pos) continue;
        const lapack_int info = LAPACKE_ztrexc(LAPACK_COL_MAJOR, 'V', m,
                                               reinterpret_cast<lapack_complex_double*>(T.data()), m,
                                               reinterpret_cast<lapack_complex_double*>(U.data()), m,
                                               best + 1, pos + 1);
        if (info != 0) throw NumericalError("ztrexc failed, info=" + std::to_string(info));
    }
}

} // namespace

ArnoldiResult krylov_schur(const LinearOp& op, Eigen::Index n, int nev, const ArnoldiOptions& opt,
                           const Projector& project) {
    if (nev < 1) throw NumericalError("krylov_schur: nev must be >= 1");
    const Eigen::Index m = std::min<Eigen::Index>(std::max(opt.ncv, nev + 2), n);
    if (nev > m) throw NumericalError("krylov_schur: nev exceeds problem dimension");
    std::mt19937_64 rng(opt.seed);

    Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(n, m + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
    Eigen::VectorXcd w(n);

    {
        Eigen::VectorXcd v0 = random_vector(n, rng);
        if (project) project(v0);
        V.col(0) = v0 / v0.norm();
    }

    ArnoldiResult res;
    Eigen::Index k = 0;
    Eigen::MatrixXcd T, U;
    for (int restart = 0; restart <= opt.max_restarts; ++restart) {
        res.restarts = restart;
        for (Eigen::Index j = k; j < m; ++j) {
            op(V.col(j), w);
            ++res.applications;
            if (project) project(w);
            const double wn0 = w.norm();
            Eigen::VectorXcd h = orthogonalize(V, j + 1, w);
            H.block(0, j, j + 1, 1) = h;
            double beta = w.norm();
            if (beta <= 1e-13 * std::max(wn0, 1e-300)) {
                // invariant subspace: continue with a fresh orthogonal direction
                Eigen::VectorXcd r = random_vector(n, rng);
                if (project) project(r);
                orthogonalize(V, j + 1, r);
                V.col(j + 1) = r / r.norm();
                H(j + 1, j) = 0.0;
            } else {
                V.col(j + 1) = w / beta;
                H(j + 1, j) = beta;
            }
        }

        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(H.topRows(m));
        if (schur.info() != Eigen::Success) throw NumericalError("krylov_schur: Schur decomposition failed");
        T = schur.matrixT();
        U = schur.matrixU();
        reorder_by_magnitude(T, U);
        const Eigen::RowVectorXcd b = H.row(m) * U;

        int nconv = 0;
        res.ritz_residual.assign(nev, 0.0);
        for (int i = 0; i < nev; ++i) {
            const Eigen::VectorXcd y = triangular_eigvec(T, i);
            const double est = std::abs((b * y)(0));
            const double scale = std::max(std::abs(T(i, i)), 1e-300);
            res.ritz_residual[i] = est / scale;
            if (est <= opt.tol * scale) ++nconv;
        }
        res.nconv = nconv;
        if (nconv >= nev || restart == opt.max_restarts) {
            res.converged = nconv >= nev;
            res.theta.resize(nev);
            res.vectors.resize(n, nev);
            for (int i = 0; i < nev; ++i) {
                res.theta[i] = T(i, i);
                const Eigen::VectorXcd y = triangular_eigvec(T, i);
                Eigen::VectorXcd x = V.leftCols(m) * (U * y);
                res.vectors.col(i) = x / x.norm();
            }
            return res;
        }

        // keep the leading p Schur vectors
        const Eigen::Index p = std::min<Eigen::Index>(m - 1, nev + (m - nev) / 2);
        Eigen::MatrixXcd Vp = V.leftCols(m) * U.leftCols(p);
        V.leftCols(p) = Vp;
        V.col(p) = V.col(m);
        H.setZero();
        H.topLeftCorner(p, p) = T.topLeftCorner(p, p);
        H.block(p, 0, 1, p) = b.leftCols(p);
        k = p;
    }
    return res;  // unreachable
}

} // namespace atomonly
