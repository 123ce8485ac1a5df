#include "atomonly/model.hpp"
#include "atomonly/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace atomonly {

double ModelParams::g() const {
    return g_sqrt_n / std::sqrt(static_cast<double>(n_spins));
}

void ModelParams::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw ConfigError("kappa must be positive, got " + std::to_string(kappa));
    if (n_spins < 1)
        throw ConfigError("nSpins must be >= 1, got " + std::to_string(n_spins));
    if (!(g_sqrt_n >= 0.0) || !std::isfinite(g_sqrt_n))
        throw ConfigError("gSqrtN must be >= 0, got " + std::to_string(g_sqrt_n));
    if (!std::isfinite(omega0) || !std::isfinite(omega_a) || !std::isfinite(omega_b))
        throw ConfigError("frequencies must be finite");
}

QCoefficients compute_q_coefficients(const ModelParams& p) {
    const cplx I{0.0, 1.0};
    const double k = p.kappa;
    QCoefficients c;
    c.kappa = k;
    c.q_minus = 1.0 / (k + 2.0 * I * (p.omega_a - p.omega0));
    c.q_plus = 1.0 / (k + 2.0 * I * (p.omega_b + p.omega0));
    c.q_sigma = 1.0 / (k + I * (p.omega_a + p.omega_b));
    c.q_delta = 1.0 / (k + I * (p.omega_a - p.omega_b - 2.0 * p.omega0));

    const cplx qm = c.q_minus, qp = c.q_plus, qs = c.q_sigma, qd = c.q_delta;
    const double rm = qm.real(), rp = qp.real();
    c.eta = 2.0 * (rm - rp);
    c.zeta = 8.0 * ((qm + qp) * (qm + qp) * qs).real() - (16.0 / k) * (rm * rm + rp * rp);

    c.alpha2a = 2.0 * rm;
    c.alpha2b = 2.0 * rp;
    // (Q + Q*)^2 / kappa is real: (2 Re Q)^2 / kappa
    const double sm = 4.0 * rm * rm / k, sp = 4.0 * rp * rp / k;
    c.alpha4a = 4.0 * 2.0 * (qm * qm * qm).real() + sm;
    c.alpha4b = 4.0 * 2.0 * (qp * qp * qp).real() + sp;
    const double xa = ((qm * qm + qm * qp) * qs).real();
    const double xb = ((qp * qp + qm * qp) * qs).real();
    c.beta4a = sm - 2.0 * xa;
    c.beta4b = sp - 2.0 * xb;
    c.gamma4a = 8.0 * xa;
    c.gamma4b = 8.0 * xb;
    c.gamma4x = 2.0 * ((qm + qp) * (qm + qp) * qs + 2.0 * (qm + std::conj(qp)) * (qm + std::conj(qp)) * qd).real();
    c.delta4a = 4.0 * sm;
    c.delta4b = 4.0 * sp;
    return c;
}

double f_element(double S, double M) {
    constexpr double tol = 1e-9;
    if (M < -S - 1.0 - tol || M > S + tol) return 0.0;
    const double v = (S - M) * (S + M + 1.0);
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

double critical_coupling(const ModelParams& p) {
    if (p.omega_a != p.omega_b) throw AsymmetricFrequenciesError();
    const double w = p.omega_a;
    if (!(w > 0.0) || !(p.omega0 > 0.0))
        throw ConfigError("critical coupling needs omega > 0 and omega0 > 0");
    return std::sqrt(p.omega0 * (w * w + 0.25 * p.kappa * p.kappa) / (2.0 * w));
}

double meanfield_sz_ss(const ModelParams& p) {
    const double gc = critical_coupling(p);
    if (p.g_sqrt_n <= gc) return -0.5;
    const double r = gc / p.g_sqrt_n;
    return -0.5 * r * r;
}

} // namespace atomonly
