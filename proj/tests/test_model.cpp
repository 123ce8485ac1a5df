#include "doctest.h"

#include "atomonly/errors.hpp"
#include "atomonly/model.hpp"

#include <cmath>
#include <random>

using namespace atomonly;

namespace {
ModelParams reference(double gs = 0.6, long n = 1000) {
    ModelParams p;
    p.kappa = 8.1;
    p.omega0 = 0.047;
    p.omega_a = p.omega_b = 5.0;
    p.g_sqrt_n = gs;
    p.n_spins = n;
    return p;
}
} // namespace

TEST_CASE("q coefficients at the reference parameters") {
    const auto q = compute_q_coefficients(reference());
    // independent complex arithmetic: 1/(8.1 + 9.906i) = (8.1 - 9.906i) / 163.738836
    CHECK(q.q_minus.real() == doctest::Approx(8.1 / 163.738836).epsilon(1e-13));
    CHECK(q.q_minus.imag() == doctest::Approx(-9.906 / 163.738836).epsilon(1e-13));
    CHECK(std::abs(q.q_minus - std::complex<double>(0.049470, -0.060500)) < 2e-6);
    CHECK(q.eta == doctest::Approx(0.00222095).epsilon(1e-5));
    CHECK(q.zeta == doctest::Approx(-0.0228285).epsilon(1e-5));
}

TEST_CASE("q coefficients with vanishing detunings") {
    ModelParams p;
    p.kappa = 1.0;
    p.omega0 = 0.0;
    p.omega_a = p.omega_b = 0.0;
    const auto q = compute_q_coefficients(p);
    CHECK(q.q_minus == std::complex<double>(1.0, 0.0));
    CHECK(q.q_plus == std::complex<double>(1.0, 0.0));
    CHECK(q.q_sigma == std::complex<double>(1.0, 0.0));
    CHECK(q.q_delta == std::complex<double>(1.0, 0.0));
    CHECK(q.eta == 0.0);
}

TEST_CASE("omega0 = 0 with equal mode frequencies gives eta = 0 exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 20.0);
    for (int t = 0; t < 20; ++t) {
        ModelParams p;
        p.kappa = u(rng);
        p.omega0 = 0.0;
        p.omega_a = p.omega_b = u(rng);
        const auto q = compute_q_coefficients(p);
        CHECK(q.q_minus == q.q_plus);
        CHECK(q.eta == 0.0);
    }
}

TEST_CASE("eta identity and determinism") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int t = 0; t < 50; ++t) {
        ModelParams p;
        p.kappa = std::abs(u(rng)) + 0.01;
        p.omega0 = u(rng);
        p.omega_a = u(rng);
        p.omega_b = u(rng);
        const auto q1 = compute_q_coefficients(p);
        const auto q2 = compute_q_coefficients(p);
        CHECK(q1.eta == doctest::Approx(2.0 * (q1.q_minus.real() - q1.q_plus.real())).epsilon(1e-15));
        CHECK(q1.q_minus == q2.q_minus);
        CHECK(q1.zeta == q2.zeta);
        CHECK(q1.gamma4x == q2.gamma4x);
        CHECK(q1.alpha2a == doctest::Approx(2.0 * q1.q_minus.real()));
        CHECK(q1.alpha2b == doctest::Approx(2.0 * q1.q_plus.real()));
    }
}

TEST_CASE("f element values and reflection symmetry") {
    CHECK(f_element(1.0, 0.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(f_element(5.0, 5.0) == 0.0);
    CHECK(f_element(0.5, -0.5) == doctest::Approx(1.0));
    CHECK(f_element(2.0, -3.0) == 0.0);   // M = -S-1
    CHECK(f_element(2.0, -4.0) == 0.0);   // outside
    CHECK(f_element(2.0, 3.0) == 0.0);
    for (int two_s = 1; two_s <= 12; ++two_s) {
        const double S = 0.5 * two_s;
        for (double M = -S - 1.0; M <= S + 1e-9; M += 1.0)
            CHECK(f_element(S, -M - 1.0) == doctest::Approx(f_element(S, M)).epsilon(1e-15));
    }
}

TEST_CASE("critical coupling") {
    CHECK(critical_coupling(reference()) == doctest::Approx(0.44).epsilon(0.005 / 0.44));
    CHECK(critical_coupling(reference()) == doctest::Approx(0.4411255490220443).epsilon(1e-14));
    ModelParams p;
    p.kappa = 1e-300;  // kappa-free limit; validate() would reject 0 in a run
    p.omega0 = 2.0;
    p.omega_a = p.omega_b = 1.0;
    CHECK(critical_coupling(p) == doctest::Approx(1.0));
    p.omega0 = 0.3;
    p.omega_a = p.omega_b = 1.7;
    CHECK(critical_coupling(p) == doctest::Approx(std::sqrt(0.3 * 1.7 / 2.0)));
    p.omega_b = 1.8;
    CHECK_THROWS_AS(critical_coupling(p), AsymmetricFrequenciesError);
    CHECK_THROWS_AS(meanfield_sz_ss(p), AsymmetricFrequenciesError);
}

TEST_CASE("mean-field steady state from H_sc") {
    ModelParams p = reference();
    const double gc = critical_coupling(p);
    p.g_sqrt_n = gc;
    CHECK(meanfield_sz_ss(p) == -0.5);
    p.g_sqrt_n = gc * (1.0 + 1e-13);
    CHECK(std::abs(meanfield_sz_ss(p) + 0.5) < 1e-12);
    p.g_sqrt_n = 0.44;
    CHECK(meanfield_sz_ss(p) == -0.5);
    p.g_sqrt_n = 1e6;
    CHECK(meanfield_sz_ss(p) < 0.0);
    CHECK(meanfield_sz_ss(p) > -1e-12);

    // brute-force minimization of w0 s + 2 g^2 N w/(w^2 + k^2/4) s^2 over s = Sz/N in [-1/2, 1/2]
    p.g_sqrt_n = 0.6;
    const double chi = 2.0 * 0.36 * 5.0 / (25.0 + 8.1 * 8.1 / 4.0);
    double best_s = 0.0, best_e = INFINITY;
    for (int i = 0; i <= 2000000; ++i) {
        const double s = -0.5 + i * 5e-7;
        const double e = 0.047 * s + chi * s * s;
        if (e < best_e) { best_e = e; best_s = s; }
    }
    CHECK(meanfield_sz_ss(p) == doctest::Approx(best_s).epsilon(1e-5));
    CHECK(meanfield_sz_ss(p) == doctest::Approx(-0.27026631944444446).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
    ModelParams p = reference();
    p.kappa = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = reference();
    p.n_spins = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = reference();
    p.g_sqrt_n = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = reference(0.6, 7);
    CHECK(p.spin() == 3.5);
    CHECK(p.g() == doctest::Approx(0.6 / std::sqrt(7.0)));
}
