#include "atomonly/z2.hpp"
#include "atomonly/dense_eigen.hpp"
#include "atomonly/errors.hpp"
#include "atomonly/spin.hpp"

#include <Eigen/LU>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <exception>

namespace atomonly {

double Z2Params::g() const { return g_sqrt_n / std::sqrt(static_cast<double>(n_spins)); }

void Z2Params::validate() const {
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (!std::isfinite(omega0) || !std::isfinite(omega)) throw ConfigError("omega0 and omega must be finite");
    if (!(g_sqrt_n >= 0.0) || !std::isfinite(g_sqrt_n)) throw ConfigError("gSqrtN must be finite and >= 0");
    if (n_spins < 1) throw ConfigError("nSpins must be >= 1");
    if (photon_cutoff < 4) throw ConfigError("photonCutoff must be >= 4");
}

const char* to_string(Z2Model m) { return m == Z2Model::Full ? "Full" : "AtomOnly"; }

Z2Model parse_z2_model(const std::string& s) {
    if (s == "Full" || s == "full") return Z2Model::Full;
    if (s == "AtomOnly" || s == "atom-only" || s == "atomonly") return Z2Model::AtomOnly;
    throw ConfigError("unknown Z2 model '" + s + "'");
}

double z2_critical_coupling(const Z2Params& p) {
    if (!(p.omega > 0.0) || !(p.omega0 > 0.0)) throw ConfigError("z2 threshold needs omega, omega0 > 0");
    return 0.5 * std::sqrt(p.omega0 * (p.omega * p.omega + 0.25 * p.kappa * p.kappa) / p.omega);
}

namespace {

Eigen::MatrixXcd annihilation(int cutoff) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Eigen::MatrixXcd commutator_super(const Eigen::MatrixXcd& h) {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(h.rows(), h.cols());
    return sandwich_superoperator(h, id) - sandwich_superoperator(id, h);
}

} // namespace

DenseSuperoperator build_z2_full_liouvillian(const Z2Params& p) {
    p.validate();
    const Eigen::Index d = (p.n_spins + 1) * static_cast<Eigen::Index>(p.photon_cutoff);
    if (d * d > kZ2DenseCap)
        throw DenseCapError("full Z2 model: Hilbert dim " + std::to_string(d) + " exceeds the dense cap");
    const SpinOps s = spin_ops(static_cast<int>(p.n_spins));
    const Eigen::MatrixXcd sz = s.z.cast<cplx>(), sx = s.x().cast<cplx>();
    const Eigen::MatrixXcd is = Eigen::MatrixXcd::Identity(s.dim, s.dim);
    const Eigen::MatrixXcd a1 = annihilation(p.photon_cutoff);
    const Eigen::MatrixXcd ip = Eigen::MatrixXcd::Identity(p.photon_cutoff, p.photon_cutoff);
    const Eigen::MatrixXcd a = Eigen::kroneckerProduct(is, a1);
    const Eigen::MatrixXcd H = p.omega0 * Eigen::MatrixXcd(Eigen::kroneckerProduct(sz, ip))
                               + p.omega * (a.adjoint() * a)
                               + 2.0 * p.g() * Eigen::MatrixXcd(Eigen::kroneckerProduct(sx, a1 + a1.adjoint()));
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd ada = a.adjoint() * a;

    DenseSuperoperator L;
    L.hilbert_dim = static_cast<int>(d);
    L.spin = p.spin();
    L.matrix = cplx(0.0, -1.0) * commutator_super(H)
               + p.kappa * (sandwich_superoperator(a, a.adjoint()) - 0.5 * sandwich_superoperator(ada, id)
                            - 0.5 * sandwich_superoperator(id, ada));
    return L;
}

DenseSuperoperator build_z2_atom_only_redfield(const Z2Params& p) {
    p.validate();
    const Eigen::Index d = p.n_spins + 1;
    if (d * d > kZ2DenseCap) throw DenseCapError("atom-only Z2 model exceeds the dense cap");
    const SpinOps s = spin_ops(static_cast<int>(p.n_spins));
    const Eigen::MatrixXcd sz = s.z.cast<cplx>(), sx = s.x().cast<cplx>();
    const Eigen::MatrixXcd sp = s.plus.cast<cplx>(), sm = s.minus.cast<cplx>();
    const double g = p.g();
    const double half = 0.5 * p.kappa;
    const cplx rp = 1.0 / cplx(half, p.omega + p.omega0);
    const cplx rm = 1.0 / cplx(half, p.omega - p.omega0);
    const Eigen::MatrixXcd lam = g * (rp * sp + rm * sm);
    const Eigen::MatrixXcd A = 2.0 * g * sx;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);

    DenseSuperoperator L;
    L.hilbert_dim = static_cast<int>(d);
    L.spin = p.spin();
    // -[A, lam rho] + [A, rho lam^H]
    L.matrix = cplx(0.0, -p.omega0) * commutator_super(sz)
               - sandwich_superoperator(A * lam, id) + sandwich_superoperator(lam, A)
               + sandwich_superoperator(A, lam.adjoint()) - sandwich_superoperator(id, lam.adjoint() * A);
    return L;
}

DenseSuperoperator build_z2(const Z2Params& p, Z2Model m) {
    return m == Z2Model::Full ? build_z2_full_liouvillian(p) : build_z2_atom_only_redfield(p);
}

double z2_parity_defect(const DenseSuperoperator& L, const Z2Params& p) {
    const Eigen::Index d = L.hilbert_dim;
    const int cutoff = d == p.n_spins + 1 ? 1 : p.photon_cutoff;
    Eigen::VectorXd u(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const long excitations = i / cutoff + i % cutoff;  // M + S + n
        u(i) = excitations % 2 == 0 ? 1.0 : -1.0;
    }
    // P is diagonal in the row-major vec basis: P[(i,j),(i,j)] = u_i u_j
    double worst = 0.0;
    for (Eigen::Index r = 0; r < d * d; ++r)
        for (Eigen::Index c = 0; c < d * d; ++c) {
            const double pr = u(r / d) * u(r % d), pc = u(c / d) * u(c % d);
            worst = std::max(worst, std::abs(L.matrix(r, c)) * std::abs(pr - pc));
        }
    return worst / std::max(L.matrix.cwiseAbs().maxCoeff(), 1e-300);
}

double z2_steady_sz(const DenseSuperoperator& L, const Z2Params& p, Z2Model m) {
    // zero mode by inverse iteration
    const int d = L.hilbert_dim;
    const Eigen::Index n = L.matrix.rows();
    const double sigma = 1e-10 * L.matrix.cwiseAbs().colwise().sum().maxCoeff();
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(L.matrix - sigma * Eigen::MatrixXcd::Identity(n, n));
    Eigen::VectorXcd v = vec_rowmajor(Eigen::MatrixXcd::Identity(d, d));
    for (int it = 0; it < 3; ++it) {
        v = lu.solve(v);
        v /= v.norm();
    }
    Eigen::MatrixXcd rho = unvec_rowmajor(v, d);
    rho /= rho.trace();
    const SpinOps s = spin_ops(static_cast<int>(p.n_spins));
    const int cutoff = m == Z2Model::Full ? p.photon_cutoff : 1;
    double sz = 0.0;
    for (int i = 0; i < d; ++i) sz += s.m(i / cutoff) * rho(i, i).real();
    return sz;
}

Z2Spectrum z2_spectrum(const DenseSuperoperator& L, const Z2Params& p, Z2Model m, double zero_rel) {
    Z2Spectrum out;
    out.matrix_norm = L.matrix.cwiseAbs().colwise().sum().maxCoeff();
    const DenseEigen de = dense_eigen(L.matrix, false);
    const Eigen::Index n = de.values.size();
    Eigen::Index iz = 0;
    de.values.cwiseAbs().minCoeff(&iz);
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(de.values(i)) <= zero_rel * out.matrix_norm) ++out.zero_modes;
    bool have = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues.push_back(de.values(i));
        if (i == iz) continue;
        const double tie = 1e-12 * out.matrix_norm;
        const bool better = !have || de.values(i).real() > out.gap.real() + tie ||
                            (de.values(i).real() >= out.gap.real() - tie && de.values(i).imag() > out.gap.imag());
        if (better) {
            out.gap = de.values(i);
            have = true;
        }
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
              [](const cplx& a, const cplx& b) { return a.real() > b.real(); });

    out.steady_sz = z2_steady_sz(L, p, m);
    return out;
}

std::vector<Z2GapPoint> z2_gap_scan(const Z2Params& templ, const std::vector<long>& n_list, Z2Model m) {
    std::vector<Z2GapPoint> out(n_list.size());
    std::vector<std::exception_ptr> errors(n_list.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        try {
            Z2Params p = templ;
            p.n_spins = n_list[i];
            const Z2Spectrum s = z2_spectrum(build_z2(p, m), p, m);
            out[i] = {p.n_spins, s.gap, s.zero_modes, s.steady_sz};
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace atomonly
