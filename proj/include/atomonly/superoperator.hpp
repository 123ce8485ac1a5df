// superoperator.hpp - dense brute-force superoperators built from the operator-form equations
//
// vec(rho)[i*d + j] = rho(i, j) (row-major). vec(A rho B) = (A kron B^T) vec(rho).

#pragma once

#include "atomonly/model.hpp"
#include "atomonly/sector.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace atomonly {

struct DenseSuperoperator {
    int hilbert_dim{0};
    double spin{0.0};  // collective spin of the atomic part
    Eigen::MatrixXcd matrix;

    Eigen::Index rows() const { return matrix.rows(); }
};

// term families of the operator-form equations, used for masks and mutations
enum class Family : int {
    Redfield2 = 0,  // Q- and Q+ terms at order g^2
    Qm3, Qp3, QmQpQs, Qm2Qs, Qp2Qs, AbsQm2, AbsQp2, QmCQpQd, Qm2Kappa, Qp2Kappa, Qm2Qd, Qp2CQd,
    Count
};

const char* family_name(Family f);

struct DenseOptions {
    Eigen::Index dense_cap{4096};  // max superoperator rows
    std::uint32_t family_mask{0xffffffffu};
    int drop_hc_family{-1};        // omit the Hermitian-conjugate partner of this family
    int unbalance_family{-1};      // flip the first ladder operator of this family's first term
};

DenseSuperoperator build_dense_superoperator(const ModelParams& p, const QCoefficients& q,
                                             TheoryOrder order, const DenseOptions& opt = {});

// || [L, C] ||_2 with C rho = [Sz, rho]
double charge_commutator_norm(const DenseSuperoperator& L);

// block of sector k in the dense matrix, ordered like SectorMatrix rows
Eigen::MatrixXcd dense_sector_block(const DenseSuperoperator& L, int k);

// max |L vec(rho)^H - (L vec(rho))^H| over basis probes, relative to ||L||_F
double hermiticity_defect(const DenseSuperoperator& L);
// || sum_i L[(i,i), :] ||, relative to ||L||_F
double trace_defect(const DenseSuperoperator& L);

Eigen::VectorXcd vec_rowmajor(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvec_rowmajor(const Eigen::VectorXcd& v, int d);
Eigen::MatrixXcd apply_superoperator(const DenseSuperoperator& L, const Eigen::MatrixXcd& rho);

// A rho B as superoperator matrix
Eigen::MatrixXcd sandwich_superoperator(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

} // namespace atomonly
