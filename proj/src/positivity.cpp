#include "atomonly/positivity.hpp"
#include "atomonly/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace atomonly {

namespace {
using Trip = Eigen::Triplet<cplx>;

Eigen::SparseMatrix<cplx> from_triplets(int d, const std::vector<Trip>& t) {
    Eigen::SparseMatrix<cplx> m(d, d);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}
} // namespace

GellMannBasis gell_mann_basis(int d) {
    if (d < 1) throw ConfigError("Gell-Mann basis needs d >= 1");
    GellMannBasis b;
    b.d = d;
    b.mats.reserve(static_cast<std::size_t>(d) * d);
    {
        std::vector<Trip> t;
        for (int i = 0; i < d; ++i) t.emplace_back(i, i, 1.0 / std::sqrt(static_cast<double>(d)));
        b.mats.push_back(from_triplets(d, t));
    }
    for (int p = 1; p < d; ++p) {
        const double nrm = 1.0 / std::sqrt(static_cast<double>(p) * (p + 1));
        std::vector<Trip> t;
        for (int i = 0; i < p; ++i) t.emplace_back(i, i, nrm);
        t.emplace_back(p, p, -p * nrm);
        b.mats.push_back(from_triplets(d, t));
    }
    const double s = 1.0 / std::sqrt(2.0);
    const cplx I{0.0, 1.0};
    for (int i = 1; i < d; ++i)
        for (int j = 0; j < i; ++j) {
            b.mats.push_back(from_triplets(d, {Trip(i, j, s), Trip(j, i, s)}));
            b.mats.push_back(from_triplets(d, {Trip(i, j, I * s), Trip(j, i, -I * s)}));
        }
    return b;
}

Eigen::SparseMatrix<cplx> element_to_ggm_matrix(const GellMannBasis& b) {
    const int d = b.d;
    const int n = d * d;
    std::vector<Trip> t;
    for (int j = 0; j < n; ++j) {
        const auto& g = b.mats[j];
        for (int col = 0; col < g.outerSize(); ++col)
            for (Eigen::SparseMatrix<cplx>::InnerIterator it(g, col); it; ++it) {
                // Tr(|Q><R| gamma) = gamma(R, Q); entry gamma(r, c) belongs to i = c*d + r
                t.emplace_back(static_cast<int>(it.col()) * d + static_cast<int>(it.row()), j, it.value());
            }
    }
    Eigen::SparseMatrix<cplx> X(n, n);
    X.setFromTriplets(t.begin(), t.end());
    return X;
}

Eigen::MatrixXcd superoperator_to_element_tensor(const DenseSuperoperator& L) {
    const Eigen::Index d = L.hilbert_dim;
    Eigen::MatrixXcd lO(d * d, d * d);
    // rho'(Q, Q') = sum_{R,R'} LO[(Q,R),(Q',R')] rho(R, R')
    for (Eigen::Index Q = 0; Q < d; ++Q)
        for (Eigen::Index R = 0; R < d; ++R)
            for (Eigen::Index Qp = 0; Qp < d; ++Qp)
                for (Eigen::Index Rp = 0; Rp < d; ++Rp)
                    lO(Q * d + R, Qp * d + Rp) = L.matrix(Q * d + Qp, R * d + Rp);
    return lO;
}

Eigen::MatrixXcd element_tensor_to_superoperator(const Eigen::MatrixXcd& lO, int d_) {
    const Eigen::Index d = d_;
    Eigen::MatrixXcd m(d * d, d * d);
    for (Eigen::Index Q = 0; Q < d; ++Q)
        for (Eigen::Index R = 0; R < d; ++R)
            for (Eigen::Index Qp = 0; Qp < d; ++Qp)
                for (Eigen::Index Rp = 0; Rp < d; ++Rp)
                    m(Q * d + Qp, R * d + Rp) = lO(Q * d + R, Qp * d + Rp);
    return m;
}

Eigen::MatrixXcd transform_to_ggm(const Eigen::MatrixXcd& lO, const GellMannBasis& b) {
    if (lO.rows() != static_cast<Eigen::Index>(b.d) * b.d)
        throw ConfigError("transform_to_ggm: basis dimension mismatch");
    const Eigen::SparseMatrix<cplx> X = element_to_ggm_matrix(b);
    const Eigen::SparseMatrix<cplx> Xc = X.conjugate();
    const Eigen::MatrixXcd right = lO * Xc;
    const Eigen::SparseMatrix<cplx> Xt = X.transpose();
    return Xt * right;
}

namespace {
// accumulate c * (A kron B^T) into a dense superoperator, A and B sparse
void add_sandwich_sparse(Eigen::MatrixXcd& S, cplx c, const Eigen::SparseMatrix<cplx>& A,
                         const Eigen::SparseMatrix<cplx>& B, Eigen::Index d) {
    for (int ca = 0; ca < A.outerSize(); ++ca)
        for (Eigen::SparseMatrix<cplx>::InnerIterator ia(A, ca); ia; ++ia)
            for (int cb = 0; cb < B.outerSize(); ++cb)
                for (Eigen::SparseMatrix<cplx>::InnerIterator ib(B, cb); ib; ++ib)
                    // (A rho B)_{i j} += A_ip rho_pq B_qj
                    S(ia.row() * d + ib.col(), ia.col() * d + ib.row()) += c * ia.value() * ib.value();
}
} // namespace

Eigen::MatrixXcd ggm_to_superoperator(const Eigen::MatrixXcd& lg, const GellMannBasis& b) {
    const Eigen::Index d = b.d, n = d * d;
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (lg(i, j) != 0.0) add_sandwich_sparse(S, lg(i, j), b.mats[i], b.mats[j], d);
    return S;
}

LindbladForm split_lindblad(const Eigen::MatrixXcd& lg, const GellMannBasis& b) {
    const Eigen::Index d = b.d, n = d * d;
    LindbladForm f;
    f.hamiltonian = Eigen::MatrixXcd::Zero(d, d);
    const cplx denom = cplx(0.0, 2.0) * std::sqrt(static_cast<double>(d));
    for (Eigen::Index i = 1; i < n; ++i) {
        const cplx h = (lg(0, i) - lg(i, 0)) / denom;
        if (h != 0.0) f.hamiltonian += h * Eigen::MatrixXcd(b.mats[i]);
    }
    f.kossakowski = lg.bottomRightCorner(n - 1, n - 1);
    return f;
}

Eigen::MatrixXcd lindblad_superoperator(const LindbladForm& f, const GellMannBasis& b) {
    const Eigen::Index d = b.d, n = d * d;
    const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
    // -i[H, rho]
    S += cplx(0.0, -1.0) * sandwich_superoperator(f.hamiltonian, Id);
    S += cplx(0.0, 1.0) * sandwich_superoperator(Id, f.hamiltonian);
    Eigen::MatrixXcd anti = Eigen::MatrixXcd::Zero(d, d);  // sum_ij K_ij gamma_j gamma_i
    for (Eigen::Index i = 1; i < n; ++i)
        for (Eigen::Index j = 1; j < n; ++j) {
            const cplx k = f.kossakowski(i - 1, j - 1);
            if (k == 0.0) continue;
            add_sandwich_sparse(S, k, b.mats[i], b.mats[j], d);
            anti += k * Eigen::MatrixXcd(b.mats[j] * b.mats[i]);
        }
    S -= 0.5 * sandwich_superoperator(anti, Id);
    S -= 0.5 * sandwich_superoperator(Id, anti);
    return S;
}

KossakowskiReport kossakowski_report(const DenseSuperoperator& L, double nonzero_rel) {
    if (L.hilbert_dim > kPositivityMaxDim)
        throw DenseCapError("positivity analysis limited to d <= " + std::to_string(kPositivityMaxDim));
    const GellMannBasis b = gell_mann_basis(L.hilbert_dim);
    const Eigen::MatrixXcd lg = transform_to_ggm(superoperator_to_element_tensor(L), b);
    const LindbladForm f = split_lindblad(lg, b);

    KossakowskiReport r;
    r.nonzero_threshold = nonzero_rel;
    r.hermiticity_defect = hermiticity_defect(L);
    r.trace_defect = trace_defect(L);
    const double kmax = std::max(f.kossakowski.cwiseAbs().maxCoeff(), 1e-300);
    r.max_antihermitian = (f.kossakowski - f.kossakowski.adjoint()).cwiseAbs().maxCoeff() / kmax;
    const Eigen::MatrixXcd herm = 0.5 * (f.kossakowski + f.kossakowski.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("Kossakowski eigen-decomposition failed");
    r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), std::greater<>());
    double lmax = 0.0;
    for (double v : r.eigenvalues) lmax = std::max(lmax, std::abs(v));
    for (double v : r.eigenvalues)
        if (std::abs(v) > nonzero_rel * lmax) ++r.nonzero_count;
    r.min_eigenvalue = r.eigenvalues.empty() ? 0.0 : r.eigenvalues.back();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f.hamiltonian);
    r.effective_hamiltonian_norm = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    const Eigen::MatrixXcd back = lindblad_superoperator(f, b);
    const double lnorm = std::max(L.matrix.cwiseAbs().maxCoeff(), 1e-300);
    r.round_trip_defect = (back - L.matrix).cwiseAbs().maxCoeff() / lnorm;
    return r;
}

KossakowskiReport kossakowski_report(const ModelParams& p, const QCoefficients& q, TheoryOrder order,
                                     double nonzero_rel) {
    if (p.two_s() + 1 > kPositivityMaxDim)
        throw DenseCapError("positivity analysis limited to N <= " + std::to_string(kPositivityMaxDim - 1));
    return kossakowski_report(build_dense_superoperator(p, q, order), nonzero_rel);
}

} // namespace atomonly
