// model.hpp - physical parameters and derived bath coefficients of the two-mode U(1) Dicke model
//
// Units: MHz for rates and frequencies, us for times. No factors of 2*pi anywhere.

#pragma once

#include <complex>

namespace atomonly {

using cplx = std::complex<double>;

struct ModelParams {
    double kappa{8.1};      // cavity loss rate
    double omega0{0.047};   // atomic splitting
    double omega_a{5.0};    // detuning of mode A
    double omega_b{5.0};    // detuning of mode B
    double g_sqrt_n{0.6};   // collective coupling g*sqrt(N)
    long n_spins{1000};

    double g() const;
    double spin() const { return 0.5 * static_cast<double>(n_spins); }
    int two_s() const { return static_cast<int>(n_spins); }
    void validate() const;  // throws ConfigError
};

struct QCoefficients {
    cplx q_minus{};
    cplx q_plus{};
    cplx q_sigma{};
    cplx q_delta{};
    double kappa{};
    double eta{};
    double zeta{};
    // cumulant-equation coefficients, order g^2
    double alpha2a{}, alpha2b{};
    // order g^4
    double alpha4a{}, alpha4b{};
    double beta4a{}, beta4b{};
    double gamma4a{}, gamma4b{}, gamma4x{};
    double delta4a{}, delta4b{};
};

QCoefficients compute_q_coefficients(const ModelParams& p);

// sqrt((S-M)(S+M+1)) on [-S-1, S], zero elsewhere
double f_element(double S, double M);

// g_c*sqrt(N); requires omegaA == omegaB
double critical_coupling(const ModelParams& p);

// minimizer of H_sc over |Sz| <= N/2, returned as <Sz>/N
double meanfield_sz_ss(const ModelParams& p);

} // namespace atomonly
