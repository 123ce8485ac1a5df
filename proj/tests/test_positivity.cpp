#include "doctest.h"

#include "atomonly/errors.hpp"
#include "atomonly/positivity.hpp"
#include "atomonly/spin.hpp"

#include <random>

using namespace atomonly;

namespace {

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXcd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = cplx(n(rng), n(rng));
    return a;
}

ModelParams reference(long n) {
    ModelParams p;
    p.n_spins = n;
    return p;
}

} // namespace

TEST_CASE("generalized Gell-Mann basis is orthonormal and complete") {
    std::mt19937_64 rng(3);
    for (int d : {1, 2, 3, 5, 8}) {
        const auto b = gell_mann_basis(d);
        REQUIRE(b.size() == static_cast<std::size_t>(d * d));
        for (std::size_t i = 0; i < b.size(); ++i) {
            const Eigen::MatrixXcd gi = b.dense(static_cast<int>(i));
            CHECK((gi - gi.adjoint()).norm() == 0.0);
            for (std::size_t j = 0; j < b.size(); ++j) {
                const cplx t = (gi * b.dense(static_cast<int>(j))).trace();
                CHECK(std::abs(t - (i == j ? 1.0 : 0.0)) <= 1e-14);
            }
        }
        for (int r = 0; r < 10; ++r) {
            const Eigen::MatrixXcd a = random_matrix(rng, d);
            Eigen::MatrixXcd back = Eigen::MatrixXcd::Zero(d, d);
            for (std::size_t i = 0; i < b.size(); ++i) {
                const Eigen::MatrixXcd gi = b.dense(static_cast<int>(i));
                back += (gi * a).trace() * gi;
            }
            CHECK((back - a).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("element tensor and Gell-Mann transform round-trip") {
    ModelParams p = reference(4);
    const auto q = compute_q_coefficients(p);
    const auto L = build_dense_superoperator(p, q, TheoryOrder::Fourth);
    const Eigen::MatrixXcd lO = superoperator_to_element_tensor(L);
    CHECK((element_tensor_to_superoperator(lO, 5) - L.matrix).norm() == 0.0);
    const auto b = gell_mann_basis(5);
    const Eigen::MatrixXcd lg = transform_to_ggm(lO, b);
    CHECK((ggm_to_superoperator(lg, b) - L.matrix).cwiseAbs().maxCoeff() <= 1e-13 * L.matrix.cwiseAbs().maxCoeff());
}

TEST_CASE("a known Lindblad generator is recovered") {
    std::mt19937_64 rng(5);
    const int d = 4;
    Eigen::MatrixXcd H = random_matrix(rng, d);
    H = 0.5 * (H + H.adjoint());
    H -= (H.trace() / double(d)) * Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(d, d);
    DenseSuperoperator L;
    L.hilbert_dim = d;
    L.spin = 1.5;
    L.matrix = cplx(0.0, -1.0) * (sandwich_superoperator(H, Id) - sandwich_superoperator(Id, H));
    const int jumps = 3;
    for (int k = 0; k < jumps; ++k) {
        Eigen::MatrixXcd J = random_matrix(rng, d);
        J -= (J.trace() / double(d)) * Id;  // traceless, else part of J shifts H
        const Eigen::MatrixXcd JdJ = J.adjoint() * J;
        L.matrix += sandwich_superoperator(J, J.adjoint()) - 0.5 * sandwich_superoperator(JdJ, Id)
                    - 0.5 * sandwich_superoperator(Id, JdJ);
    }
    const auto rep = kossakowski_report(L);
    CHECK(rep.nonzero_count == jumps);
    CHECK(rep.min_eigenvalue >= -1e-12 * rep.eigenvalues.front());
    CHECK(rep.round_trip_defect <= 1e-12);
    CHECK(rep.max_antihermitian <= 1e-12);
    const auto b = gell_mann_basis(d);
    const auto f = split_lindblad(transform_to_ggm(superoperator_to_element_tensor(L), b), b);
    CHECK((f.hamiltonian - H).cwiseAbs().maxCoeff() <= 1e-12 * H.cwiseAbs().maxCoeff());
}

TEST_CASE("second-order theory is of Lindblad form with two channels") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (long n = 4; n <= 10; ++n) {
        ModelParams p = reference(n);
        p.g_sqrt_n = 0.1 + 1.5 * u(rng);
        p.kappa = 1.0 + 9.0 * u(rng);
        p.omega_a = -6.0 + 12.0 * u(rng);
        p.omega_b = -6.0 + 12.0 * u(rng);
        const auto q = compute_q_coefficients(p);
        const auto rep = kossakowski_report(p, q, TheoryOrder::Second);
        CHECK(rep.nonzero_count == 2);
        CHECK(rep.min_eigenvalue >= -1e-10 * rep.eigenvalues.front());
        CHECK(rep.round_trip_defect <= 1e-10);
        CHECK(rep.hermiticity_defect <= 1e-10);
        CHECK(rep.trace_defect <= 1e-10);
    }
}

TEST_CASE("fourth-order theory has eight channels, not all positive") {
    for (long n = 4; n <= 12; ++n) {
        ModelParams p = reference(n);
        const auto q = compute_q_coefficients(p);
        const auto rep = kossakowski_report(p, q, TheoryOrder::Fourth);
        INFO("N=" << n);
        CHECK(rep.nonzero_count == 8);
        CHECK(rep.min_eigenvalue < 0.0);
        CHECK(rep.round_trip_defect <= 1e-10);
        CHECK(rep.hermiticity_defect <= 1e-10);
        CHECK(rep.trace_defect <= 1e-10);
        CHECK(rep.eigenvalues.size() == static_cast<std::size_t>((n + 1) * (n + 1) - 1));
        CHECK(std::is_sorted(rep.eigenvalues.rbegin(), rep.eigenvalues.rend()));
    }
}

TEST_CASE("positivity analysis is dense-only") {
    ModelParams p = reference(64);
    const auto q = compute_q_coefficients(p);
    CHECK_THROWS_AS(kossakowski_report(p, q, TheoryOrder::Fourth), DenseCapError);
}
