// spectral.hpp - steady states, sector spectra and Liouvillian gaps

#pragma once

#include "atomonly/krylov_schur.hpp"
#include "atomonly/model.hpp"
#include "atomonly/sector.hpp"

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace atomonly {

enum class SpectralMethod { Dense, ShiftInvertArnoldi };
const char* to_string(SpectralMethod m);

struct SolverSettings {
    Eigen::Index dense_cap{2000};     // sector dim at or below which zgeev is used
    ArnoldiOptions arnoldi{};
    double nonzero_rel{1e-9};         // |lambda| > nonzero_rel * norm counts as nonzero (dense path)
    double residual_rel{1e-8};        // converged iff residual <= residual_rel * norm
    int steady_max_iter{200};
    double steady_shift_rel{1e-10};   // sigma = steady_shift_rel * max band entry
    double degeneracy_rel{1e-10};
    int shift_retries{3};
    // |k| >= 1 gap search on the Arnoldi path: shifts i*y, y in [gap_im_min, gap_im_max]
    double gap_im_min{-0.2};
    double gap_im_max{0.2};
    int gap_nev{8};
    int gap_nev_max{32};
    int gap_max_shifts{200};
};

struct SteadyState {
    double m_first{0.0};
    Eigen::VectorXd p;       // P_M, M = m_first + i
    double mean_sz{0.0};
    double mean_szsz{0.0};
    double min_p{0.0};
    double residual{0.0};    // ||L p||_1 with sum(p) = 1
    double matrix_norm{0.0}; // ||L||_1
    double lambda2_estimate{0.0};
    int iterations{0};
};

struct SpectralResult {
    int sector_k{0};
    std::vector<std::complex<double>> eigenvalues;  // Re descending, Im ascending
    SpectralMethod method{SpectralMethod::Dense};
    std::vector<double> residuals;                  // ||L v - lambda v|| / ||v||
    std::vector<bool> converged;
    double matrix_norm{0.0};
    std::complex<double> target{};
    int zero_mode_index{-1};                        // k = 0 only
    int restarts{0};
    int applications{0};
};

SteadyState steady_state(const SectorMatrix& sector0, const SolverSettings& st = {});

SpectralResult sector_eigenvalues(const SectorMatrix& s, int count, std::complex<double> target = {},
                                  const SolverSettings& st = {});

struct GapResult {
    std::complex<double> gap{};
    SpectralResult spectrum;                  // merged candidates
    std::vector<std::complex<double>> shifts; // shifts used (Arnoldi path)
    bool window_covered{true};                // shift discs certify the strip Re in [Re gap, 0] over the window
};

GapResult liouvillian_gap_detail(const ModelParams& p, const QCoefficients& q, TheoryOrder order, int k,
                                 const SolverSettings& st = {});
std::complex<double> liouvillian_gap(const ModelParams& p, const QCoefficients& q, TheoryOrder order, int k,
                                     const SolverSettings& st = {});

struct GaussianDiagnostic {
    double mean{0.0};
    double stddev{0.0};
    double skewness{0.0};
    double excess_kurtosis{0.0};
    double r_squared{0.0};
    double fit_amplitude{0.0};
    double fit_center{0.0};
    double fit_width{0.0};
    bool quasi_gaussian{false};  // r_squared >= 0.99
};

GaussianDiagnostic gaussian_diagnostic(const SteadyState& ss);

} // namespace atomonly
