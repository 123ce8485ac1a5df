#include "atomonly/spin.hpp"
#include "atomonly/model.hpp"

#include <cmath>

namespace atomonly {

SpinOps spin_ops(int two_s) {
    SpinOps ops;
    ops.S = 0.5 * two_s;
    ops.dim = two_s + 1;
    const int d = ops.dim;
    ops.plus = Eigen::MatrixXd::Zero(d, d);
    ops.z = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        ops.z(i, i) = ops.m(i);
        if (i + 1 < d) ops.plus(i + 1, i) = f_element(ops.S, ops.m(i));
    }
    ops.minus = ops.plus.transpose();
    return ops;
}

double spectral_norm(const Eigen::MatrixXcd& a, int max_iter, double tol) {
    if (a.size() == 0) return 0.0;
    const double fro = a.norm();
    if (fro == 0.0) return 0.0;
    // deterministic, non-symmetric start so no eigen-direction is missed by construction
    Eigen::VectorXcd v(a.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = cplx(1.0 + 0.37 * std::sin(1.3 * i + 0.2), 0.11 * std::cos(0.7 * i));
    v.normalize();
    double sigma = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd w = a.adjoint() * (a * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        const double s = std::sqrt(nw);
        v = w / nw;
        if (std::abs(s - sigma) <= tol * s) { sigma = s; break; }
        sigma = s;
    }
    return sigma;
}

} // namespace atomonly
