// krylov_schur.hpp - restarted Krylov-Schur for the largest-magnitude eigenvalues of a linear operator
//
// Used with op = (L - sigma)^-1, so the wanted eigenvalues are those of L closest to sigma.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace atomonly {

using LinearOp = std::function<void(const Eigen::VectorXcd& in, Eigen::VectorXcd& out)>;
using Projector = std::function<void(Eigen::VectorXcd& v)>;

struct ArnoldiOptions {
    int ncv{60};              // Krylov subspace dimension
    double tol{1e-9};         // relative Ritz residual
    int max_restarts{300};
    std::uint64_t seed{20240101};
};

struct ArnoldiResult {
    std::vector<std::complex<double>> theta;  // Ritz values of op, |theta| descending
    Eigen::MatrixXcd vectors;                 // unit Ritz vectors
    std::vector<double> ritz_residual;        // |b^T y| estimates, relative to |theta|
    int restarts{0};
    int applications{0};
    int nconv{0};
    bool converged{false};
};

// project (optional) is applied to the start vector and after every op application
ArnoldiResult krylov_schur(const LinearOp& op, Eigen::Index n, int nev, const ArnoldiOptions& opt,
                           const Projector& project = {});

} // namespace atomonly
