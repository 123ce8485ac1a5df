#include "atomonly/superoperator.hpp"
#include "atomonly/errors.hpp"
#include "atomonly/spin.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <array>
#include <cmath>

namespace atomonly {

const char* family_name(Family f) {
    static const std::array<const char*, static_cast<int>(Family::Count)> names{
        "redfield2", "qm3", "qp3", "qm_qp_qsigma", "qm2_qsigma", "qp2_qsigma", "absqm2_kappa",
        "absqp2_kappa", "qm_cqp_qdelta", "qm2_kappa", "qp2_kappa", "qm2_qdelta", "qp2_cqdelta"};
    return names.at(static_cast<int>(f));
}

namespace {

// word over {p, m}, read left to right as an operator product
struct Term {
    Family family;
    cplx coef;
    std::string left, right;
};

std::string adjoint_word(const std::string& w) {
    std::string r(w.rbegin(), w.rend());
    for (char& ch : r) ch = (ch == 'p') ? 'm' : 'p';
    return r;
}

struct Entry {
    int row, col;
    double val;
};

// nonzeros of a ladder word; each word moves M by a fixed amount so there are at most d
std::vector<Entry> word_entries(const std::string& w, const SpinOps& ops) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(ops.dim, ops.dim);
    for (char ch : w) m = m * (ch == 'p' ? ops.plus : ops.minus);
    std::vector<Entry> out;
    for (int j = 0; j < ops.dim; ++j)
        for (int i = 0; i < ops.dim; ++i)
            if (m(i, j) != 0.0) out.push_back({i, j, m(i, j)});
    return out;
}

void add_sandwich(Eigen::MatrixXcd& L, int d, cplx c, const std::vector<Entry>& A, const std::vector<Entry>& B) {
    // (A rho B)_{ij} = A_ip rho_pq B_qj
    for (const auto& a : A)
        for (const auto& b : B)
            L(a.row * d + b.col, a.col * d + b.row) += c * a.val * b.val;
}

std::vector<Term> redfield_terms(const QCoefficients& q, double g2) {
    const double pre = -2.0 * g2;
    return {
        {Family::Redfield2, pre * q.q_minus, "pm", ""},
        {Family::Redfield2, -pre * q.q_minus, "m", "p"},
        {Family::Redfield2, pre * q.q_plus, "mp", ""},
        {Family::Redfield2, -pre * q.q_plus, "p", "m"},
    };
}

std::vector<Term> fourth_order_terms(const QCoefficients& q, double g4) {
    const cplx qm = q.q_minus, qp = q.q_plus, qs = q.q_sigma, qd = q.q_delta;
    const double kap = q.kappa;
    const double pre = 4.0 * g4;
    std::vector<Term> t;
    auto fam = [&](Family f, cplx c, std::initializer_list<std::tuple<double, const char*, const char*>> lst) {
        for (const auto& [s, l, r] : lst) t.push_back({f, pre * c * s, l, r});
    };
    fam(Family::Qm3, qm * qm * qm, {{2, "mm", "pp"}, {2, "ppmm", ""}, {-4, "pmm", "p"}});
    fam(Family::Qp3, qp * qp * qp, {{2, "pp", "mm"}, {2, "mmpp", ""}, {-4, "mpp", "m"}});
    fam(Family::QmQpQs, qm * qp * qs,
        {{1, "pm", "pm"}, {1, "mp", "mp"}, {1, "pmmp", ""}, {1, "mppm", ""},
         {-1, "pmp", "m"}, {-1, "mpm", "p"}, {-1, "mmp", "p"}, {-1, "ppm", "m"}});
    fam(Family::Qm2Qs, qm * qm * qs, {{1, "pmpm", ""}, {1, "pm", "mp"}, {-1, "ppm", "m"}, {-1, "mpm", "p"}});
    fam(Family::Qp2Qs, qp * qp * qs, {{1, "mpmp", ""}, {1, "mp", "pm"}, {-1, "mmp", "p"}, {-1, "pmp", "m"}});
    fam(Family::AbsQm2, std::norm(qm) / kap, {{1, "pm", "pm"}, {1, "mm", "pp"}, {-1, "pmm", "p"}, {-1, "mpm", "p"}});
    fam(Family::AbsQp2, std::norm(qp) / kap, {{1, "mp", "mp"}, {1, "pp", "mm"}, {-1, "mpp", "m"}, {-1, "pmp", "m"}});
    fam(Family::QmCQpQd, qm * std::conj(qp) * qd, {{4, "pm", "mp"}, {-2, "ppm", "m"}, {-2, "m", "mpp"}});
    fam(Family::Qm2Kappa, qm * qm / kap, {{1, "mm", "pp"}, {1, "pm", "pm"}, {-1, "m", "pmp"}, {-1, "pmm", "p"}});
    fam(Family::Qp2Kappa, qp * qp / kap, {{1, "pp", "mm"}, {1, "mp", "mp"}, {-1, "p", "mpm"}, {-1, "mpp", "m"}});
    fam(Family::Qm2Qd, qm * qm * qd, {{2, "pm", "mp"}, {-1, "m", "mpp"}, {-1, "ppm", "m"}});
    fam(Family::Qp2CQd, qp * qp * std::conj(qd), {{2, "mp", "pm"}, {-1, "p", "pmm"}, {-1, "mmp", "p"}});
    return t;
}

} // namespace

DenseSuperoperator build_dense_superoperator(const ModelParams& p, const QCoefficients& q,
                                             TheoryOrder order, const DenseOptions& opt) {
    p.validate();
    const int d = p.two_s() + 1;
    const Eigen::Index rows = static_cast<Eigen::Index>(d) * d;
    if (rows > opt.dense_cap)
        throw DenseCapError("dense superoperator needs " + std::to_string(rows) + " rows, cap is " +
                            std::to_string(opt.dense_cap));
    const SpinOps ops = spin_ops(p.two_s());
    DenseSuperoperator out;
    out.hilbert_dim = d;
    out.spin = ops.S;
    out.matrix = Eigen::MatrixXcd::Zero(rows, rows);
    Eigen::MatrixXcd& L = out.matrix;

    // -i w0 [Sz, rho]
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            L(i * d + j, i * d + j) += cplx(0.0, -p.omega0 * (ops.m(i) - ops.m(j)));

    const double g = p.g();
    std::vector<Term> terms = redfield_terms(q, g * g);
    if (order == TheoryOrder::Fourth) {
        auto t4 = fourth_order_terms(q, g * g * g * g);
        terms.insert(terms.end(), t4.begin(), t4.end());
    }

    int last_family = -1;
    for (const Term& t0 : terms) {
        const int f = static_cast<int>(t0.family);
        if (!(opt.family_mask & (1u << f))) continue;
        Term t = t0;
        const bool first_of_family = f != last_family;
        last_family = f;
        if (first_of_family && f == opt.unbalance_family) {
            std::string& w = t.left.empty() ? t.right : t.left;
            w[0] = (w[0] == 'p') ? 'm' : 'p';
        }
        const auto A = word_entries(t.left, ops);
        const auto B = word_entries(t.right, ops);
        add_sandwich(L, d, t.coef, A, B);
        if (f == opt.drop_hc_family) continue;
        // (c A rho B)^H = c* B^H rho A^H
        add_sandwich(L, d, std::conj(t.coef), word_entries(adjoint_word(t.right), ops),
                     word_entries(adjoint_word(t.left), ops));
    }
    return out;
}

double charge_commutator_norm(const DenseSuperoperator& L) {
    const int d = L.hilbert_dim;
    auto charge = [&](Eigen::Index r) { return static_cast<double>(r / d) - static_cast<double>(r % d); };
    Eigen::MatrixXcd comm(L.rows(), L.rows());
    for (Eigen::Index c = 0; c < L.rows(); ++c)
        for (Eigen::Index r = 0; r < L.rows(); ++r)
            comm(r, c) = L.matrix(r, c) * (charge(c) - charge(r));
    return spectral_norm(comm);
}

Eigen::MatrixXcd dense_sector_block(const DenseSuperoperator& L, int k) {
    const int d = L.hilbert_dim;
    if (std::abs(k) > d - 1) throw SectorRangeError("sector k=" + std::to_string(k) + " out of range");
    const int i0 = std::max(0, -k);
    const int n = d - std::abs(k);
    std::vector<Eigen::Index> idx(n);
    for (int t = 0; t < n; ++t) idx[t] = static_cast<Eigen::Index>(i0 + t) * d + (i0 + t + k);
    Eigen::MatrixXcd b(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) b(r, c) = L.matrix(idx[r], idx[c]);
    return b;
}

Eigen::VectorXcd vec_rowmajor(const Eigen::MatrixXcd& rho) {
    const Eigen::Index d = rho.rows();
    Eigen::VectorXcd v(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = rho(i, j);
    return v;
}

Eigen::MatrixXcd unvec_rowmajor(const Eigen::VectorXcd& v, int d) {
    Eigen::MatrixXcd rho(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) rho(i, j) = v(static_cast<Eigen::Index>(i) * d + j);
    return rho;
}

Eigen::MatrixXcd apply_superoperator(const DenseSuperoperator& L, const Eigen::MatrixXcd& rho) {
    return unvec_rowmajor(L.matrix * vec_rowmajor(rho), L.hilbert_dim);
}

Eigen::MatrixXcd sandwich_superoperator(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    return Eigen::kroneckerProduct(A, B.transpose());
}

double hermiticity_defect(const DenseSuperoperator& L) {
    // L(rho^H) = (L rho)^H for all rho  <=>  L[(i,j),(p,q)] = conj(L[(j,i),(q,p)])
    const Eigen::Index d = L.hilbert_dim;
    auto swap = [d](Eigen::Index r) { return (r % d) * d + r / d; };
    double worst = 0.0;
    for (Eigen::Index c = 0; c < L.rows(); ++c)
        for (Eigen::Index r = 0; r < L.rows(); ++r)
            worst = std::max(worst, std::abs(L.matrix(r, c) - std::conj(L.matrix(swap(r), swap(c)))));
    const double n = L.matrix.norm();
    return n > 0.0 ? worst / n : worst;
}

double trace_defect(const DenseSuperoperator& L) {
    const int d = L.hilbert_dim;
    Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(L.rows());
    for (int i = 0; i < d; ++i) t += L.matrix.row(static_cast<Eigen::Index>(i) * d + i);
    const double n = L.matrix.norm();
    return n > 0.0 ? t.norm() / n : t.norm();
}

} // namespace atomonly
