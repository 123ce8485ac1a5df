#include "doctest.h"

#include "atomonly/banded_lu.hpp"
#include "atomonly/dense_eigen.hpp"
#include "atomonly/errors.hpp"
#include "atomonly/fitting.hpp"
#include "atomonly/krylov_schur.hpp"
#include "atomonly/spectral.hpp"
#include "atomonly/superoperator.hpp"

#include <algorithm>
#include <random>

using namespace atomonly;
using cvec = std::vector<std::complex<double>>;

namespace {

ModelParams reference(double gs, long n) {
    ModelParams p;
    p.g_sqrt_n = gs;
    p.n_spins = n;
    return p;
}

} // namespace

TEST_CASE("banded LU solves the shifted sector system") {
    ModelParams p = reference(0.6, 40);
    const auto q = compute_q_coefficients(p);
    for (int k : {0, 1, -2}) {
        const auto s = build_sector(p, q, k, TheoryOrder::Fourth);
        const cplx sigma(0.01, -0.003);
        const BandedLU lu(s, sigma);
        Eigen::VectorXcd b = Eigen::VectorXcd::LinSpaced(s.dim(), 1.0, 2.0);
        const Eigen::VectorXcd x = lu.solve(b);
        const Eigen::MatrixXcd A = s.to_dense() - sigma * Eigen::MatrixXcd::Identity(s.dim(), s.dim());
        CHECK((A * x - b).norm() <= 1e-10 * b.norm());
    }
}

TEST_CASE("Krylov-Schur finds the dominant eigenvalues of a known matrix") {
    const Eigen::Index n = 300;
    Eigen::VectorXcd diag(n);
    for (Eigen::Index i = 0; i < n; ++i) diag(i) = cplx(1.0 / (1.0 + i), 0.01 * std::sin(double(i)));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXcd U(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) U(i, j) = cplx(nd(rng), nd(rng));
    const Eigen::MatrixXcd Q = Eigen::HouseholderQR<Eigen::MatrixXcd>(U).householderQ();
    const Eigen::MatrixXcd A = Q * diag.asDiagonal() * Q.adjoint();
    const auto res = krylov_schur([&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { out = A * in; }, n, 5,
                                  ArnoldiOptions{});
    REQUIRE(res.converged);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(res.theta[i] - diag(i)) <= 1e-8);
}

TEST_CASE("steady state equals the dense null vector") {
    for (auto order : {TheoryOrder::Second, TheoryOrder::Fourth})
        for (double gs : {0.3, 0.6}) {
            ModelParams p = reference(gs, 60);
            const auto q = compute_q_coefficients(p);
            const auto s = build_sector(p, q, 0, order);
            const auto ss = steady_state(s);
            CHECK(ss.p.sum() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(ss.residual <= 1e-10 * ss.matrix_norm);
            const auto de = dense_eigen(s.to_dense(), true);
            Eigen::Index iz = 0;
            de.values.cwiseAbs().minCoeff(&iz);
            Eigen::VectorXd v = de.vectors.col(iz).real();
            if (de.vectors.col(iz).real().norm() < de.vectors.col(iz).imag().norm()) v = de.vectors.col(iz).imag();
            v /= v.sum();
            CHECK((v - ss.p).cwiseAbs().maxCoeff() <= 1e-9);
            CHECK(ss.min_p >= -1e-12);
            CHECK(ss.lambda2_estimate > 0.0);
        }
}

TEST_CASE("second-order steady state is independent of the coupling") {
    ModelParams a = reference(0.2, 20), b = reference(1.0, 20);
    const auto qa = compute_q_coefficients(a), qb = compute_q_coefficients(b);
    const auto pa = steady_state(build_sector(a, qa, 0, TheoryOrder::Second)).p;
    const auto pb = steady_state(build_sector(b, qb, 0, TheoryOrder::Second)).p;
    CHECK((pa - pb).cwiseAbs().maxCoeff() <= 1e-10);
    const double ratio = qa.q_minus.real() / qa.q_plus.real();
    for (Eigen::Index i = 0; i + 1 < pa.size(); ++i) CHECK(pa(i) / pa(i + 1) == doctest::Approx(ratio).epsilon(1e-10));
}

TEST_CASE("dense and Arnoldi paths agree") {
    ModelParams p = reference(0.6, 400);
    const auto q = compute_q_coefficients(p);
    SolverSettings dense, iter;
    iter.dense_cap = 10;
    for (int k : {0, 1}) {
        const auto s = build_sector(p, q, k, TheoryOrder::Fourth);
        const auto a = sector_eigenvalues(s, 6, {}, dense);
        const auto b = sector_eigenvalues(s, 6, {}, iter);
        CHECK(a.method == SpectralMethod::Dense);
        CHECK(b.method == SpectralMethod::ShiftInvertArnoldi);
        REQUIRE(b.eigenvalues.size() >= 4);
        for (std::size_t i = 0; i < 4; ++i) {
            double best = 1e300;
            for (const auto& z : a.eigenvalues) best = std::min(best, std::abs(z - b.eigenvalues[i]));
            CHECK(best <= 1e-8 * a.matrix_norm);
        }
        if (k == 0) {
            CHECK(b.zero_mode_index == 0);
            CHECK(std::abs(b.eigenvalues[0]) <= 1e-9 * b.matrix_norm);
        }
        const auto ga = liouvillian_gap(p, q, TheoryOrder::Fourth, k, dense);
        const auto gd = liouvillian_gap_detail(p, q, TheoryOrder::Fourth, k, iter);
        CHECK(std::abs(ga - gd.gap) <= 1e-8 * std::abs(ga));
        CHECK(gd.window_covered);
    }
}

TEST_CASE("gap of the populations sector is negative and nonzero") {
    ModelParams p = reference(0.6, 300);
    const auto q = compute_q_coefficients(p);
    const auto g0 = liouvillian_gap(p, q, TheoryOrder::Fourth, 0);
    CHECK(g0.real() < 0.0);
    CHECK(std::abs(g0.imag()) <= 1e-8 * std::abs(g0));
    const auto g1 = liouvillian_gap(p, q, TheoryOrder::Fourth, 1);
    const auto gm1 = liouvillian_gap(p, q, TheoryOrder::Fourth, -1);
    CHECK(std::abs(g1 - std::conj(gm1)) <= 1e-8 * std::abs(g1));
}

TEST_CASE("Gaussian diagnostic") {
    SteadyState ss;
    ss.m_first = -100.0;
    ss.p.resize(201);
    for (int i = 0; i < 201; ++i) {
        const double M = ss.m_first + i;
        ss.p(i) = std::exp(-0.5 * (M + 30.0) * (M + 30.0) / 64.0);
    }
    ss.p /= ss.p.sum();
    const auto g = gaussian_diagnostic(ss);
    CHECK(g.mean == doctest::Approx(-30.0).epsilon(1e-8));
    CHECK(g.stddev == doctest::Approx(8.0).epsilon(1e-6));
    CHECK(std::abs(g.skewness) <= 1e-6);
    CHECK(std::abs(g.excess_kurtosis) <= 1e-4);
    CHECK(g.r_squared >= 0.999999);
    CHECK(g.quasi_gaussian);
    for (int i = 0; i < 201; ++i) ss.p(i) = (i % 40 < 20) ? 1.0 : 0.0;
    ss.p /= ss.p.sum();
    CHECK_FALSE(gaussian_diagnostic(ss).quasi_gaussian);
}

TEST_CASE("gap scaling fits") {
    std::vector<std::pair<double, double>> pts;
    for (double n : {5e4, 8e4, 1.1e5, 1.4e5}) pts.push_back({n, 0.003 + 50.0 / n});
    const auto f = fit_gap_scaling(pts, GapModel::LinearInInverseN);
    CHECK(f.a == doctest::Approx(0.003).epsilon(1e-10));
    CHECK(f.b == doctest::Approx(50.0).epsilon(1e-8));
    CHECK(f.r_squared == doctest::Approx(1.0));
    pts.clear();
    for (double n : {4, 6, 8, 10, 12}) pts.push_back({n, 0.2 * std::exp(-0.3 * n)});
    const auto e = fit_gap_scaling(pts, GapModel::ExponentialInN);
    CHECK(e.a == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(e.b == doctest::Approx(0.3).epsilon(1e-10));
    pts.clear();
    for (double n : {4, 6, 8, 10, 12}) pts.push_back({n, 0.05});
    CHECK(std::abs(fit_gap_scaling(pts, GapModel::ExponentialInN).b) <= 1e-12);
    CHECK_THROWS_AS(fit_gap_scaling({{1.0, 1.0}, {2.0, 2.0}}, GapModel::LinearInInverseN), InsufficientDataError);
}
