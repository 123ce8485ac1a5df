// banded_lu.hpp - LU of (L - sigma I) for a pentadiagonal sector matrix (LAPACK zgbtrf/zgbtrs)

#pragma once

#include "atomonly/sector.hpp"

#include <Eigen/Dense>
#include <vector>

namespace atomonly {

class BandedLU {
public:
    // throws SingularFactorizationError on an exactly zero pivot, or when
    // min|U_ii| / max|U_ii| < pivot_ratio_tol (pass 0 to disable the ratio check)
    BandedLU(const SectorMatrix& s, cplx sigma, double pivot_ratio_tol = 0.0);

    void solve_in_place(Eigen::VectorXcd& x) const;
    Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;

    Eigen::Index dim() const { return n_; }
    cplx shift() const { return sigma_; }
    double min_pivot_ratio() const { return pivot_ratio_; }

private:
    static constexpr int kl = 2;
    static constexpr int ku = 2;
    static constexpr int ldab = 2 * kl + ku + 1;
    Eigen::Index n_{0};
    cplx sigma_{};
    double pivot_ratio_{0.0};
    std::vector<cplx> ab_;
    std::vector<int> ipiv_;
};

} // namespace atomonly
