#include "atomonly/banded_lu.hpp"
#include "atomonly/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace atomonly {

BandedLU::BandedLU(const SectorMatrix& s, cplx sigma, double pivot_ratio_tol)
    : n_(s.dim()), sigma_(sigma), ab_(static_cast<std::size_t>(ldab) * s.dim()), ipiv_(s.dim()) {
    // column-major band storage: A(i,j) -> ab[(kl + ku + i - j) + j * ldab]
    auto at = [&](Eigen::Index i, Eigen::Index j) -> cplx& {
        return ab_[static_cast<std::size_t>(kl + ku + i - j) + static_cast<std::size_t>(j) * ldab];
    };
    for (Eigen::Index i = 0; i < n_; ++i) {
        at(i, i) = s.a[i] - sigma;
        if (i + 1 < n_) at(i, i + 1) = s.b[i];
        if (i + 2 < n_) at(i, i + 2) = s.c[i];
        if (i >= 1) at(i, i - 1) = s.d[i];
        if (i >= 2) at(i, i - 2) = s.e[i];
    }
    const lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl, ku,
                                           reinterpret_cast<lapack_complex_double*>(ab_.data()), ldab,
                                           ipiv_.data());
    if (info < 0) throw NumericalError("zgbtrf: illegal argument " + std::to_string(-info));
    if (info > 0)
        throw SingularFactorizationError("zgbtrf: exact zero pivot at " + std::to_string(info) +
                                         "; retry with a perturbed shift");
    double lo = INFINITY, hi = 0.0;
    for (Eigen::Index j = 0; j < n_; ++j) {
        const double u = std::abs(ab_[static_cast<std::size_t>(kl + ku) + static_cast<std::size_t>(j) * ldab]);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    pivot_ratio_ = hi > 0.0 ? lo / hi : 0.0;
    if (pivot_ratio_tol > 0.0 && pivot_ratio_ < pivot_ratio_tol)
        throw SingularFactorizationError("shift is numerically an eigenvalue (pivot ratio " +
                                         std::to_string(pivot_ratio_) + "); retry with a perturbed shift");
}

void BandedLU::solve_in_place(Eigen::VectorXcd& x) const {
    const lapack_int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl, ku, 1,
                                           reinterpret_cast<const lapack_complex_double*>(ab_.data()), ldab,
                                           ipiv_.data(), reinterpret_cast<lapack_complex_double*>(x.data()), n_);
    if (info != 0) throw NumericalError("zgbtrs failed, info=" + std::to_string(info));
}

Eigen::VectorXcd BandedLU::solve(const Eigen::VectorXcd& b) const {
    Eigen::VectorXcd x = b;
    solve_in_place(x);
    return x;
}

} // namespace atomonly
