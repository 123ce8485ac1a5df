// spin.hpp - collective spin operators in the Sz basis |M>, index i = M + S, M ascending

#pragma once

#include <Eigen/Dense>

namespace atomonly {

struct SpinOps {
    double S{0.0};
    int dim{1};
    Eigen::MatrixXd plus;   // S+
    Eigen::MatrixXd minus;  // S-
    Eigen::MatrixXd z;      // Sz
    Eigen::MatrixXd x() const { return 0.5 * (plus + minus); }
    double m(int i) const { return static_cast<double>(i) - S; }
};

// two_s = 2S = N
SpinOps spin_ops(int two_s);

// spectral norm via power iteration on A^H A
double spectral_norm(const Eigen::MatrixXcd& a, int max_iter = 500, double tol = 1e-13);

} // namespace atomonly
