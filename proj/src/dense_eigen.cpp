#include "atomonly/dense_eigen.hpp"
#include "atomonly/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <limits>
#include <string>

namespace atomonly {

DenseEigen dense_eigen(const Eigen::MatrixXcd& a, bool want_vectors) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    DenseEigen out;
    out.values.resize(n);
    if (n == 0) return out;
    Eigen::MatrixXcd work = a;
    if (want_vectors) out.vectors.resize(n, n);
    lapack_complex_double dummy{};
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
        reinterpret_cast<lapack_complex_double*>(work.data()), n,
        reinterpret_cast<lapack_complex_double*>(out.values.data()), &dummy, 1,
        want_vectors ? reinterpret_cast<lapack_complex_double*>(out.vectors.data()) : &dummy,
        want_vectors ? n : 1);
    if (info != 0) throw NumericalError("zgeev failed, info=" + std::to_string(info));
    return out;
}

void sort_spectrum(std::vector<std::complex<double>>& v) {
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() < y.imag();
    });
}

double spectrum_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b, double scale) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        std::size_t best = b.size();
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double dd = std::abs(x - b[j]);
            if (dd < bd) { bd = dd; best = j; }
        }
        used[best] = true;
        worst = std::max(worst, bd);
    }
    return scale > 0.0 ? worst / scale : worst;
}

} // namespace atomonly
