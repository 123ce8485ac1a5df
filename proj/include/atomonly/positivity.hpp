// positivity.hpp - Lindblad-Kossakowski decomposition of a dense superoperator
//
// Element basis O_i = |Q><R|, i = Q*d + R, with rho' = sum_ij LO_ij O_i rho O_j^H.
// Generalized Gell-Mann basis gamma_0 = I/sqrt(d), then d-1 diagonal matrices
// diag(1,..,1,-p,0,..)/sqrt(p(p+1)), then for each I > J (lexicographic) the pair
// x = (|I><J| + |J><I|)/sqrt2, y = i(|I><J| - |J><I|)/sqrt2.

#pragma once

#include "atomonly/model.hpp"
#include "atomonly/sector.hpp"
#include "atomonly/superoperator.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

namespace atomonly {

struct GellMannBasis {
    int d{0};
    std::vector<Eigen::SparseMatrix<cplx>> mats;  // d^2 Hermitian, orthonormal under Tr(A B)

    Eigen::MatrixXcd dense(int i) const { return Eigen::MatrixXcd(mats.at(i)); }
    std::size_t size() const { return mats.size(); }
};

GellMannBasis gell_mann_basis(int d);

// X_ij = Tr(O_i gamma_j)
Eigen::SparseMatrix<cplx> element_to_ggm_matrix(const GellMannBasis& b);

Eigen::MatrixXcd superoperator_to_element_tensor(const DenseSuperoperator& L);
Eigen::MatrixXcd element_tensor_to_superoperator(const Eigen::MatrixXcd& lO, int d);

// L^gamma = X^T L^O X*
Eigen::MatrixXcd transform_to_ggm(const Eigen::MatrixXcd& lO, const GellMannBasis& b);
// superoperator of rho -> sum_ij Lg_ij gamma_i rho gamma_j
Eigen::MatrixXcd ggm_to_superoperator(const Eigen::MatrixXcd& lg, const GellMannBasis& b);

struct LindbladForm {
    Eigen::MatrixXcd hamiltonian;   // d x d
    Eigen::MatrixXcd kossakowski;   // (d^2-1) x (d^2-1)
};

LindbladForm split_lindblad(const Eigen::MatrixXcd& lg, const GellMannBasis& b);
// -i[H, rho] + sum_ij K_ij (gamma_i rho gamma_j - {rho, gamma_j gamma_i}/2)
Eigen::MatrixXcd lindblad_superoperator(const LindbladForm& f, const GellMannBasis& b);

struct KossakowskiReport {
    double hermiticity_defect{0.0};
    double trace_defect{0.0};
    std::vector<double> eigenvalues;  // descending
    int nonzero_count{0};
    double min_eigenvalue{0.0};
    double effective_hamiltonian_norm{0.0};
    double round_trip_defect{0.0};    // relative to ||L||_max
    double nonzero_threshold{1e-8};
    double max_antihermitian{0.0};    // ||K - K^H||_max / ||K||_max
};

constexpr int kPositivityMaxDim = 64;

KossakowskiReport kossakowski_report(const DenseSuperoperator& L, double nonzero_rel = 1e-8);
KossakowskiReport kossakowski_report(const ModelParams& p, const QCoefficients& q, TheoryOrder order,
                                     double nonzero_rel = 1e-8);

} // namespace atomonly
