// dense_eigen.hpp - dense non-Hermitian eigensolver (LAPACK zgeev) and small helpers

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace atomonly {

struct DenseEigen {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  // right eigenvectors, columns; empty unless requested
};

DenseEigen dense_eigen(const Eigen::MatrixXcd& a, bool want_vectors = false);

// sort by (Re descending, Im ascending)
void sort_spectrum(std::vector<std::complex<double>>& v);

// greedy nearest matching of two spectra; returns max |a_i - b_pi(i)| / scale
double spectrum_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b, double scale);

} // namespace atomonly
