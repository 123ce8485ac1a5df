#include "atomonly/semiclassical.hpp"
#include "atomonly/errors.hpp"
#include "atomonly/spin.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <map>

namespace atomonly {

namespace odeint = boost::numeric::odeint;
using state_t = std::array<double, 2>;

const char* to_string(OdeMethod m) { return m == OdeMethod::RK4Fixed ? "RK4Fixed" : "RK45Adaptive"; }

OdeMethod parse_ode_method(const std::string& s) {
    if (s == "RK4Fixed" || s == "rk4") return OdeMethod::RK4Fixed;
    if (s == "RK45Adaptive" || s == "rk45" || s == "dopri5") return OdeMethod::RK45Adaptive;
    throw ConfigError("unknown ODE method '" + s + "'");
}

std::array<double, 2> cumulant_rhs(const CumulantState& st, const ModelParams& p, const QCoefficients& c) {
    const double S = p.spin();
    const double s = S * (S + 1.0);
    const double g2 = p.g() * p.g();
    const double g4 = g2 * g2;
    const double m1 = st.m1, m2 = st.m2;
    const double m1_2 = m1 * m1, m1_3 = m1_2 * m1, m1_4 = m1_2 * m1_2;

    double d1 = 2.0 * g2 * (c.alpha2b * (s - m2 - m1) - c.alpha2a * (s - m2 + m1));
    const double cub = s * m1 - 3.0 * m1 * m2 + 2.0 * m1_3;
    d1 += 2.0 * g4 * (c.gamma4a * (cub + m2) + c.gamma4b * (cub - m2)
                      - c.delta4a * (cub + 2.0 * m2 - s - m1)
                      - c.delta4b * (cub - 2.0 * m2 + s - m1));

    const double lin = 2.0 * s * m1 - 6.0 * m1 * m2 + 4.0 * m1_3;
    double d2 = 2.0 * g2 * (c.alpha2b * (lin - 3.0 * m2 + s - m1) - c.alpha2a * (lin + 3.0 * m2 - s - m1));
    const double qq = s * s + 3.0 * m2 * m2 - 2.0 * m1_4;
    const double w = s * m2 - 3.0 * m2 * m2 + 2.0 * m1_4;
    d2 += 4.0 * g4 * (
          c.alpha4a * (qq + 5.0 * m2 - 2.0 * s * m2 - 12.0 * m1 * m2 + 8.0 * m1_3 + 4.0 * s * m1 - 2.0 * s - 2.0 * m1)
        + c.alpha4b * (qq + 5.0 * m2 - 2.0 * s * m2 + 12.0 * m1 * m2 - 8.0 * m1_3 - 4.0 * s * m1 - 2.0 * s + 2.0 * m1)
        + c.beta4a * (qq + m2 - 2.0 * s * m2 - 6.0 * m1 * m2 + 4.0 * m1_3 + 2.0 * s * m1)
        + c.beta4b * (qq + m2 - 2.0 * s * m2 + 6.0 * m1 * m2 - 4.0 * m1_3 - 2.0 * s * m1)
        - c.gamma4x * (qq - m2 - 2.0 * s * m2)
        + c.gamma4a * (w + 3.0 * m1 * m2 - 2.0 * m1_3)
        + c.gamma4b * (w - 3.0 * m1 * m2 + 2.0 * m1_3)
        - c.delta4a * (w + 9.0 * m1 * m2 - 6.0 * m1_3 - 2.0 * s * m1 - 3.0 * m2 + s + m1)
        - c.delta4b * (w - 9.0 * m1 * m2 + 6.0 * m1_3 + 2.0 * s * m1 - 3.0 * m2 + s - m1));
    return {d1, d2};
}

double meanfield_rhs(double sz, const ModelParams& p, const QCoefficients& q) {
    const double S = p.spin();
    const double g2 = p.g() * p.g();
    return (-2.0 * g2 * q.eta + 2.0 * g2 * g2 * q.zeta * sz) * (S * S - sz * sz);
}

double meanfield_rate_at(double sz, const ModelParams& p, const QCoefficients& q) {
    const double S = p.spin();
    const double g2 = p.g() * p.g();
    return 4.0 * g2 * q.eta * sz + 2.0 * g2 * g2 * q.zeta * (S * S - 3.0 * sz * sz);
}

MeanFieldFixedPoint meanfield_fixed_point(const ModelParams& p, const QCoefficients& q) {
    const double S = p.spin();
    const double g2 = p.g() * p.g();
    MeanFieldFixedPoint fp;
    if (g2 > 0.0 && q.zeta != 0.0) {
        const double root = q.eta / (g2 * q.zeta);
        if (root > -S && root < S && meanfield_rate_at(root, p, q) < 0.0) {
            fp.sz = root;
            fp.rate = meanfield_rate_at(root, p, q);
            fp.interior = true;
            return fp;
        }
    }
    for (double edge : {-S, S}) {
        const double r = meanfield_rate_at(edge, p, q);
        if (r < 0.0) {
            fp.sz = edge;
            fp.rate = r;
            return fp;
        }
    }
    throw FixedPointNotFoundError("mean-field equation has no stable fixed point");
}

double meanfield_relaxation_rate(const ModelParams& p, const QCoefficients& q) {
    return meanfield_fixed_point(p, q).rate;
}

namespace {

double rhs_norm(const state_t& x, const ModelParams& p, const QCoefficients& q) {
    const auto r = cumulant_rhs({x[0], x[1], 0.0}, p, q);
    return std::hypot(r[0], r[1]);
}

bool physical(const state_t& x, double S) {
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) return false;
    if (std::abs(x[0]) > S * (1.0 + 1e-9)) return false;
    return x[1] >= x[0] * x[0] - 1e-9 * S * S;
}

Eigen::Matrix2d jacobian(double m1, double m2, const ModelParams& p, const QCoefficients& q) {
    const double h = 1e-6 * std::max(p.spin(), 0.5);
    Eigen::Matrix2d J;
    for (int j = 0; j < 2; ++j) {
        CumulantState a{m1, m2, 0.0}, b{m1, m2, 0.0};
        (j == 0 ? a.m1 : a.m2) += h;
        (j == 0 ? b.m1 : b.m2) -= h;
        const auto fa = cumulant_rhs(a, p, q), fb = cumulant_rhs(b, p, q);
        J(0, j) = (fa[0] - fb[0]) / (2.0 * h);
        J(1, j) = (fa[1] - fb[1]) / (2.0 * h);
    }
    return J;
}

void newton_polish(state_t& x, const ModelParams& p, const QCoefficients& q) {
    double fn = rhs_norm(x, p, q);
    for (int it = 0; it < 30 && fn > 0.0; ++it) {
        const auto f = cumulant_rhs({x[0], x[1], 0.0}, p, q);
        const Eigen::Matrix2d J = jacobian(x[0], x[1], p, q);
        const Eigen::Vector2d dx = J.fullPivLu().solve(Eigen::Vector2d(-f[0], -f[1]));
        state_t y{x[0] + dx[0], x[1] + dx[1]};
        const double yn = rhs_norm(y, p, q);
        if (!(yn < fn)) break;
        x = y;
        fn = yn;
    }
}

} // namespace

Trajectory integrate_cumulants(const CumulantState& init, const ModelParams& p, const QCoefficients& q,
                               const OdeSettings& ode) {
    p.validate();
    if (!(ode.step_or_tolerance > 0.0) || !(ode.t_max > 0.0) || !(ode.steady_criterion > 0.0))
        throw ConfigError("ODE settings must be positive");
    const double S = p.spin();
    const double scale = p.g_sqrt_n * p.g_sqrt_n * S;  // g^2 N S
    const double target = ode.steady_criterion * std::max(scale, 1e-300);
    auto sys = [&](const state_t& x, state_t& dx, double) {
        const auto r = cumulant_rhs({x[0], x[1], 0.0}, p, q);
        dx = r;
    };

    Trajectory tr;
    state_t x{init.m1, init.m2};
    double t = init.time;
    tr.states.push_back({x[0], x[1], t});
    double next_record = t + ode.record_every;

    auto after_step = [&]() -> bool {
        if (!physical(x, S)) {
            tr.left_physical_region = true;
            tr.states.push_back({x[0], x[1], t});
            return true;
        }
        if (ode.record_every > 0.0 && t >= next_record) {
            tr.states.push_back({x[0], x[1], t});
            next_record += ode.record_every;
        }
        if (rhs_norm(x, p, q) <= target) {
            tr.reached_steady = true;
            return true;
        }
        return false;
    };

    if (rhs_norm(x, p, q) <= target) {
        tr.reached_steady = true;
    } else if (ode.method == OdeMethod::RK4Fixed) {
        odeint::runge_kutta4<state_t> stepper;
        const double dt = ode.step_or_tolerance;
        const double t_end = init.time + ode.t_max;
        while (t < t_end) {
            stepper.do_step(sys, x, t, dt);
            t += dt;
            if (after_step()) break;
        }
    } else {
        const double rtol = ode.step_or_tolerance;
        const double atol = rtol * std::max(S * S, 1.0);
        auto stepper = odeint::make_controlled(atol, rtol, odeint::runge_kutta_dopri5<state_t>());
        double dt = 1e-3;
        const double t_end = init.time + ode.t_max;
        int rejects = 0;
        while (t < t_end) {
            dt = std::min(dt, t_end - t);
            if (stepper.try_step(sys, x, t, dt) == odeint::fail) {
                if (++rejects > 1000) throw ConvergenceError("RK45 step size underflow");
                continue;
            }
            rejects = 0;
            if (after_step()) break;
        }
    }
    tr.final_rhs_norm = rhs_norm(x, p, q);
    if (tr.states.back().time != t || tr.states.size() == 1) tr.states.push_back({x[0], x[1], t});
    return tr;
}

CumulantFixedPoint cumulant_steady_state(const ModelParams& p, const QCoefficients& q, const OdeSettings& ode) {
    const double S = p.spin();
    std::vector<std::pair<std::string, CumulantState>> starts{
        {"spin_down", {-S, S * S, 0.0}},
        {"midpoint", {0.0, 0.5 * S * S, 0.0}},
    };
    try {
        const double sz = meanfield_fixed_point(p, q).sz;
        starts.push_back({"meanfield_seeded", {sz, sz * sz + 0.5 * S, 0.0}});
    } catch (const FixedPointNotFoundError&) {
    }

    CumulantFixedPoint out;
    bool have = false;
    for (const auto& [name, init] : starts) {
        OdeSettings o = ode;
        o.record_every = 0.0;
        const Trajectory tr = integrate_cumulants(init, p, q, o);
        if (!tr.reached_steady) continue;
        state_t x{tr.states.back().m1, tr.states.back().m2};
        if (ode.polish) newton_polish(x, p, q);
        out.converged.push_back(name);
        if (!have) {
            out.m1 = x[0];
            out.m2 = x[1];
            out.rhs_norm = rhs_norm(x, p, q);
            out.start = name;
            out.t_reached = tr.states.back().time;
            have = true;
        } else if (std::abs(x[0] - out.m1) > 1e-6 * std::max(S, 1.0)) {
            out.multistable = true;
        }
    }
    if (!have)
        throw FixedPointNotFoundError("cumulant equations: no start reached a steady state within tMax");
    return out;
}

std::array<std::complex<double>, 2> cumulant_jacobian_eigenvalues(double m1, double m2, const ModelParams& p,
                                                                  const QCoefficients& q) {
    const Eigen::Matrix2d J = jacobian(m1, m2, p, q);
    const double tr = J.trace(), det = J.determinant();
    const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr / 4.0 - det, 0.0));
    std::array<std::complex<double>, 2> ev{tr / 2.0 + disc, tr / 2.0 - disc};
    if (ev[1].real() > ev[0].real()) std::swap(ev[0], ev[1]);
    return ev;
}

std::array<std::complex<double>, 2> linearized_cumulant_eigenvalues(const ModelParams& p, const QCoefficients& q,
                                                                    const OdeSettings& ode) {
    const CumulantFixedPoint fp = cumulant_steady_state(p, q, ode);
    return cumulant_jacobian_eigenvalues(fp.m1, fp.m2, p, q);
}

// ---------------------------------------------------------------------------------------------
// Gaussian closure identities

namespace {

using Poly = std::vector<double>;  // coefficients in Sz, lowest power first

Poly mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// s - (z + shift)^2 + sign (z + shift)
Poly ladder_poly(double s, double shift, double sign) {
    return {s - shift * shift + sign * shift, -2.0 * shift + sign, -1.0};
}

Eigen::MatrixXd eval_poly(const Poly& a, const Eigen::MatrixXd& z) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(z.rows(), z.cols());
    Eigen::MatrixXd pw = Eigen::MatrixXd::Identity(z.rows(), z.cols());
    for (double c : a) {
        r += c * pw;
        pw = pw * z;
    }
    return r;
}

using Bi = std::map<std::pair<int, int>, double>;  // (power of m1, power of m2) -> coefficient

// <Sz^n> under the Gaussian rule
Bi gaussian_moment(int n) {
    switch (n) {
        case 0: return {{{0, 0}, 1.0}};
        case 1: return {{{1, 0}, 1.0}};
        case 2: return {{{0, 1}, 1.0}};
        case 3: return {{{1, 1}, 3.0}, {{3, 0}, -2.0}};
        case 4: return {{{0, 2}, 3.0}, {{4, 0}, -2.0}};
        default: throw NumericalError("Gaussian rule defined up to fourth moment");
    }
}

Bi close(const Poly& a) {
    Bi out;
    for (std::size_t n = 0; n < a.size(); ++n)
        for (const auto& [k, v] : gaussian_moment(static_cast<int>(n))) out[k] += a[n] * v;
    return out;
}

double bi_distance(const Bi& a, const Bi& b) {
    double worst = 0.0;
    Bi all = a;
    for (const auto& [k, v] : b) all[k] += 0.0;
    for (const auto& [k, v] : all) {
        const double x = a.count(k) ? a.at(k) : 0.0;
        const double y = b.count(k) ? b.at(k) : 0.0;
        worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(y)));
    }
    return worst;
}

} // namespace

GaussianClosureReport gaussian_closure_identities(double S, double tol) {
    const int two_s = static_cast<int>(std::lround(2.0 * S));
    if (std::abs(two_s - 2.0 * S) > 1e-12 || two_s < 1 || two_s > 12)
        throw ConfigError("gaussian_closure_identities needs S in {1/2, 1, ..., 6}");
    const SpinOps ops = spin_ops(two_s);
    const Eigen::MatrixXd& P = ops.plus;
    const Eigen::MatrixXd& Mi = ops.minus;
    const Eigen::MatrixXd& Z = ops.z;
    const double s = S * (S + 1.0);

    const Poly pm = ladder_poly(s, 0.0, 1.0);    // S+S- = s - Sz^2 + Sz
    const Poly mp = ladder_poly(s, 0.0, -1.0);   // S-S+ = s - Sz^2 - Sz
    const Poly pm_down = ladder_poly(s, -1.0, 1.0);  // s - (Sz-1)^2 + (Sz-1)
    const Poly mp_up = ladder_poly(s, 1.0, -1.0);    // s - (Sz+1)^2 - (Sz+1)

    struct Item {
        std::string name;
        Eigen::MatrixXd lhs;
        Poly poly;
        bool displayed;
        Bi expected;
    };
    std::vector<Item> items;
    items.push_back({"S+S- = s - SzSz + Sz", P * Mi, pm, false, {}});
    items.push_back({"S-S+ = s - SzSz - Sz", Mi * P, mp, false, {}});
    items.push_back({"S+SzS-", P * Z * Mi, mul(pm, Poly{-1.0, 1.0}), true,
                     {{{1, 1}, -3.0}, {{0, 1}, 2.0}, {{3, 0}, 2.0}, {{1, 0}, s - 1.0}, {{0, 0}, -s}}});
    items.push_back({"S-SzS+", Mi * Z * P, mul(mp, Poly{1.0, 1.0}), false, {}});
    items.push_back({"S+S+S-S-", P * P * Mi * Mi, mul(pm_down, pm), true,
                     {{{0, 2}, 3.0}, {{1, 1}, -12.0}, {{0, 1}, 5.0 - 2.0 * s}, {{4, 0}, -2.0},
                      {{3, 0}, 8.0}, {{1, 0}, 4.0 * s - 2.0}, {{0, 0}, s * s - 2.0 * s}}});
    items.push_back({"S+S-S+S-", P * Mi * P * Mi, mul(pm, pm), true,
                     {{{0, 2}, 3.0}, {{1, 1}, -6.0}, {{0, 1}, 1.0 - 2.0 * s}, {{4, 0}, -2.0},
                      {{3, 0}, 4.0}, {{1, 0}, 2.0 * s}, {{0, 0}, s * s}}});
    items.push_back({"S-S-S+S+", Mi * Mi * P * P, mul(mp_up, mp), false, {}});
    items.push_back({"S-S+S-S+", Mi * P * Mi * P, mul(mp, mp), false, {}});
    items.push_back({"S+S-S-S+", P * Mi * Mi * P, mul(pm, mp), false, {}});
    items.push_back({"S-S+S+S-", Mi * P * P * Mi, mul(mp, pm), false, {}});

    GaussianClosureReport rep;
    rep.spin = S;
    rep.passed = true;
    for (const auto& it : items) {
        ClosureCheck c;
        c.name = it.name;
        c.operator_defect = (it.lhs - eval_poly(it.poly, Z)).cwiseAbs().maxCoeff();
        if (it.displayed) c.coefficient_defect = bi_distance(close(it.poly), it.expected);
        if (c.operator_defect > tol * std::max(1.0, s * s) || c.coefficient_defect > tol) rep.passed = false;
        rep.checks.push_back(c);
    }
    return rep;
}

} // namespace atomonly
