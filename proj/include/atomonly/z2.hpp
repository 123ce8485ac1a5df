// z2.hpp - single-mode Dicke model with Z2 symmetry: full spin+cavity Lindblad model with a
// photon cutoff, and the atom-only second-order Redfield equation obtained by eliminating the cavity
//
// H = w0 Sz + w a^H a + 2g (a + a^H) Sx,   rho' = -i[H, rho] + kappa D[a] rho
// Hilbert index of the full model: i = (M + S) * cutoff + n.

#pragma once

#include "atomonly/superoperator.hpp"

#include <complex>
#include <vector>

namespace atomonly {

struct Z2Params {
    double kappa{8.1};
    double omega0{0.01};
    double omega{5.0};
    double g_sqrt_n{0.3};
    long n_spins{4};
    int photon_cutoff{8};

    double g() const;
    double spin() const { return 0.5 * static_cast<double>(n_spins); }
    void validate() const;  // throws ConfigError
};

enum class Z2Model { Full, AtomOnly };
const char* to_string(Z2Model m);
Z2Model parse_z2_model(const std::string& s);

// mean-field threshold of the full model, field amplitude decaying at kappa/2
double z2_critical_coupling(const Z2Params& p);

constexpr Eigen::Index kZ2DenseCap = 4096;  // superoperator rows

DenseSuperoperator build_z2_full_liouvillian(const Z2Params& p);

// -i w0 [Sz, rho] - [2g Sx, Lambda rho - rho Lambda^H],
// Lambda = g (S+ / (kappa/2 + i(w + w0)) + S- / (kappa/2 + i(w - w0)))
DenseSuperoperator build_z2_atom_only_redfield(const Z2Params& p);

DenseSuperoperator build_z2(const Z2Params& p, Z2Model m);

// || [L, P] ||_max / ||L||_max with P rho = U rho U^H, U = exp(i pi (a^H a + Sz + S))
double z2_parity_defect(const DenseSuperoperator& L, const Z2Params& p);

struct Z2Spectrum {
    std::vector<std::complex<double>> eigenvalues;  // Re descending
    std::complex<double> gap{};                     // max Re after removing one zero mode, Im >= 0 on ties
    int zero_modes{0};                              // |lambda| <= zero_rel * ||L||_1
    double matrix_norm{0.0};
    double steady_sz{0.0};                          // <Sz> of the zero mode
};

// <Sz> of the zero mode, inverse iteration on a dense LU
double z2_steady_sz(const DenseSuperoperator& L, const Z2Params& p, Z2Model m);

Z2Spectrum z2_spectrum(const DenseSuperoperator& L, const Z2Params& p, Z2Model m, double zero_rel = 1e-9);

struct Z2GapPoint {
    long n_spins{0};
    std::complex<double> gap{};
    int zero_modes{0};
    double steady_sz{0.0};
};

// one point per N, parallel over N, returned in input order
std::vector<Z2GapPoint> z2_gap_scan(const Z2Params& templ, const std::vector<long>& n_list, Z2Model m);

} // namespace atomonly
