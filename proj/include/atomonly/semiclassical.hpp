// semiclassical.hpp - cumulant equations for (<Sz>, <SzSz>), the N -> infinity mean-field
// equation, their fixed points and relaxation rates

#pragma once

#include "atomonly/model.hpp"

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace atomonly {

struct CumulantState {
    double m1{0.0};    // <Sz>
    double m2{0.0};    // <Sz Sz>
    double time{0.0};  // us
};

enum class OdeMethod { RK4Fixed, RK45Adaptive };
const char* to_string(OdeMethod m);
OdeMethod parse_ode_method(const std::string& s);

struct OdeSettings {
    OdeMethod method{OdeMethod::RK45Adaptive};
    double step_or_tolerance{1e-12};  // RK4 step in us, or RK45 relative tolerance
    double t_max{1e7};                // us
    double steady_criterion{1e-10};   // ||rhs|| <= steady_criterion * g^2 N S
    bool polish{true};                // Newton refinement of the integrated fixed point
    double record_every{0.0};         // trajectory sampling interval, 0 = endpoints only
};

std::array<double, 2> cumulant_rhs(const CumulantState& s, const ModelParams& p, const QCoefficients& q);
double meanfield_rhs(double sz, const ModelParams& p, const QCoefficients& q);

struct MeanFieldFixedPoint {
    double sz{0.0};
    double rate{0.0};      // lambda_MF
    bool interior{false};  // root of the first bracket, as opposed to a boundary +-S
};

MeanFieldFixedPoint meanfield_fixed_point(const ModelParams& p, const QCoefficients& q);
double meanfield_relaxation_rate(const ModelParams& p, const QCoefficients& q);
double meanfield_rate_at(double sz, const ModelParams& p, const QCoefficients& q);

struct Trajectory {
    std::vector<CumulantState> states;
    bool reached_steady{false};
    bool left_physical_region{false};
    double final_rhs_norm{0.0};
};

Trajectory integrate_cumulants(const CumulantState& init, const ModelParams& p, const QCoefficients& q,
                               const OdeSettings& ode = {});

struct CumulantFixedPoint {
    double m1{0.0};
    double m2{0.0};
    double rhs_norm{0.0};
    std::string start;                   // which initial condition produced it
    std::vector<std::string> converged;  // every start that reached a steady state
    bool multistable{false};
    double t_reached{0.0};
};

// starts: spin-down (-S, S^2), (0, S^2/2), then the mean-field fixed point with variance S/2
CumulantFixedPoint cumulant_steady_state(const ModelParams& p, const QCoefficients& q, const OdeSettings& ode = {});

// Jacobian of cumulant_rhs at the fixed point, centered differences with step 1e-6 S; slowest first
std::array<std::complex<double>, 2> linearized_cumulant_eigenvalues(const ModelParams& p, const QCoefficients& q,
                                                                    const OdeSettings& ode = {});
std::array<std::complex<double>, 2> cumulant_jacobian_eigenvalues(double m1, double m2, const ModelParams& p,
                                                                  const QCoefficients& q);

struct ClosureCheck {
    std::string name;
    double operator_defect{0.0};     // max |lhs - rhs| entry of the matrix identity
    double coefficient_defect{0.0};  // max coefficient mismatch after the Gaussian rule
};

struct GaussianClosureReport {
    double spin{0.0};
    std::vector<ClosureCheck> checks;
    bool passed{false};
};

GaussianClosureReport gaussian_closure_identities(double S, double tol = 1e-12);

} // namespace atomonly
