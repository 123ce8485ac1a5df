// acceptance.cpp - end-to-end checks of the headline physics claims, one PASS/FAIL line each
//
// Usage: acceptance [criterion ...]   (no arguments runs all eleven)

#include "atomonly/dense_eigen.hpp"
#include "atomonly/fitting.hpp"
#include "atomonly/positivity.hpp"
#include "atomonly/sector.hpp"
#include "atomonly/semiclassical.hpp"
#include "atomonly/spectral.hpp"
#include "atomonly/superoperator.hpp"
#include "atomonly/z2.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace atomonly;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

ModelParams reference(double gs, long n) {
    ModelParams p;
    p.g_sqrt_n = gs;
    p.n_spins = n;
    return p;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

Outcome c1_critical_coupling() {
    const double gc = critical_coupling(ModelParams{});
    return {std::abs(gc - 0.44) <= 0.005, "gc*sqrt(N) = " + fmt("%.6f", gc) + " MHz, target 0.44 +- 0.005"};
}

Outcome c2_second_order_steady_state() {
    const ModelParams a = reference(0.2, 20), b = reference(1.0, 20);
    const auto qa = compute_q_coefficients(a), qb = compute_q_coefficients(b);
    const Eigen::VectorXd pa = steady_state(build_sector(a, qa, 0, TheoryOrder::Second)).p;
    const Eigen::VectorXd pb = steady_state(build_sector(b, qb, 0, TheoryOrder::Second)).p;
    const double diff = (pa - pb).cwiseAbs().maxCoeff();
    const double ratio = qa.q_minus.real() / qa.q_plus.real();
    double ratio_err = 0.0;
    for (Eigen::Index i = 0; i + 1 < pa.size(); ++i)
        for (const Eigen::VectorXd* p : {&pa, &pb})
            ratio_err = std::max(ratio_err, std::abs((*p)(i) / (*p)(i + 1) - ratio) / std::abs(ratio));
    return {diff <= 1e-10 && ratio_err <= 1e-10,
            "max |P(0.2) - P(1.0)| = " + fmt("%.3e", diff) + ", max rel ratio error = " + fmt("%.3e", ratio_err)};
}

Outcome c3_oracle_equivalence() {
    std::mt19937_64 rng(20240501);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_spec = 0.0, worst_charge = 0.0;
    int cases = 0;
    for (long n : {2L, 4L, 6L})
        for (auto order : {TheoryOrder::Second, TheoryOrder::Fourth})
            for (int draw = 0; draw < 5; ++draw) {
                ModelParams p;
                p.kappa = 0.5 + 10.0 * u(rng);
                p.omega0 = 0.5 * u(rng);
                p.omega_a = -6.0 + 12.0 * u(rng);
                p.omega_b = -6.0 + 12.0 * u(rng);
                p.g_sqrt_n = 0.1 + 2.0 * u(rng);
                p.n_spins = n;
                const auto q = compute_q_coefficients(p);
                const auto L = build_dense_superoperator(p, q, order);
                const auto dv = dense_eigen(L.matrix).values;
                std::vector<std::complex<double>> dense(dv.data(), dv.data() + dv.size()), secs;
                for (int k = -static_cast<int>(n); k <= n; ++k) {
                    const auto e = dense_eigen(build_sector(p, q, k, order).to_dense()).values;
                    secs.insert(secs.end(), e.data(), e.data() + e.size());
                }
                const double norm = Eigen::JacobiSVD<Eigen::MatrixXcd>(L.matrix).singularValues()(0);
                worst_spec = std::max(worst_spec, spectrum_distance(dense, secs, norm));
                worst_charge = std::max(worst_charge, charge_commutator_norm(L) / norm);
                ++cases;
            }
    return {worst_spec <= 1e-10 && worst_charge <= 1e-12,
            std::to_string(cases) + " cases, max spectrum distance / ||L|| = " + fmt("%.3e", worst_spec) +
                ", max ||[L,C]|| / ||L|| = " + fmt("%.3e", worst_charge)};
}

double meanfield_target(double gs) {
    const double r = critical_coupling(ModelParams{}) / gs;
    return -0.5 * std::min(1.0, r * r);
}

// deviations of <Sz>/N from the mean-field value; pass iff the last one is within tol and |dev| decreases
Outcome steady_state_convergence(const std::vector<double>& gs_list, double tol, bool check_last) {
    const std::vector<long> ns{1000, 10000, 100000};
    bool ok = true;
    std::ostringstream os;
    for (double gs : gs_list) {
        std::vector<double> dev;
        for (long n : ns) {
            const ModelParams p = reference(gs, n);
            const auto ss = steady_state(build_sector(p, compute_q_coefficients(p), 0, TheoryOrder::Fourth));
            dev.push_back(ss.mean_sz / static_cast<double>(n) - meanfield_target(gs));
        }
        bool mono = true;
        for (std::size_t i = 0; i + 1 < dev.size(); ++i) mono = mono && std::abs(dev[i + 1]) < std::abs(dev[i]);
        const bool last_ok = !check_last || std::abs(dev.back()) <= tol;
        ok = ok && mono && last_ok;
        os << " g=" << gs << ": dev(1e3,1e4,1e5) = " << fmt("%+.5f", dev[0]) << fmt(" %+.5f", dev[1])
           << fmt(" %+.5f", dev[2]) << (mono ? "" : " [not monotone]") << (last_ok ? "" : " [last > tol]") << ";";
    }
    return {ok, os.str()};
}

Outcome c4_magnetization_above() { return steady_state_convergence({0.5, 0.6, 0.8}, 0.01, true); }

Outcome c5_relaxation_rates() {
    bool ok = true;
    std::ostringstream os;
    for (double gs : {0.55, 0.7}) {
        const ModelParams p = reference(gs, 100000);
        const auto q = compute_q_coefficients(p);
        const auto spec = sector_eigenvalues(build_sector(p, q, 0, TheoryOrder::Fourth), 2);
        double sector_rate = 0.0;
        bool found = false;
        for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
            if (static_cast<int>(i) == spec.zero_mode_index) continue;
            if (!found || spec.eigenvalues[i].real() > sector_rate) sector_rate = spec.eigenvalues[i].real();
            found = true;
        }
        const double cumulant_rate = linearized_cumulant_eigenvalues(p, q)[0].real();
        const double mf_rate = meanfield_relaxation_rate(p, q);
        const double worst = std::max({rel_diff(sector_rate, cumulant_rate), rel_diff(sector_rate, mf_rate),
                                       rel_diff(cumulant_rate, mf_rate)});
        ok = ok && found && worst <= 0.05;
        os << " g=" << gs << ": sector " << fmt("%.6g", sector_rate) << ", cumulant " << fmt("%.6g", cumulant_rate)
           << ", mean-field " << fmt("%.6g", mf_rate) << " MHz, worst pairwise " << fmt("%.2f%%", 100.0 * worst)
           << ";";
    }
    return {ok, os.str()};
}

Outcome c6_gap_scaling() {
    bool ok = true;
    std::ostringstream os;
    for (double gs : {0.5, 0.55, 0.6}) {
        std::vector<std::pair<double, double>> pts;
        bool covered = true;
        for (long n : {50000L, 80000L, 110000L, 140000L, 170000L, 200000L}) {
            const ModelParams p = reference(gs, n);
            const auto g = liouvillian_gap_detail(p, compute_q_coefficients(p), TheoryOrder::Fourth, 1);
            covered = covered && g.window_covered;
            pts.emplace_back(static_cast<double>(n), -g.gap.real());
            std::printf("  [6] g=%.2f N=%ld gap=%.10f%+.10fi shifts=%zu\n", gs, n, g.gap.real(), g.gap.imag(),
                        g.shifts.size());
            std::fflush(stdout);
        }
        const GapFit f = fit_gap_scaling(pts, GapModel::LinearInInverseN);
        const bool pass = f.r_squared >= 0.99 && f.a > 3.0 * f.a_stderr && f.a_stderr > 0.0;
        ok = ok && pass && covered;
        os << " g=" << gs << ": A = " << fmt("%.4e", f.a) << " +- " << fmt("%.1e", f.a_stderr)
           << ", R2 = " << fmt("%.5f", f.r_squared) << (covered ? "" : " [window not covered]") << ";";
    }
    return {ok, os.str()};
}

Outcome c7_kossakowski() {
    bool ok = true;
    std::ostringstream os;
    for (long n : {4L, 6L, 8L, 10L}) {
        const ModelParams p = reference(0.6, n);
        const auto q = compute_q_coefficients(p);
        const auto r4 = kossakowski_report(p, q, TheoryOrder::Fourth);
        const auto r2 = kossakowski_report(p, q, TheoryOrder::Second);
        const double scale2 = std::abs(r2.eigenvalues.front());
        const bool ok4 = r4.nonzero_count == 8 && r4.min_eigenvalue < 0.0 && r4.round_trip_defect <= 1e-10;
        const bool ok2 = r2.nonzero_count == 2 && r2.min_eigenvalue >= -r2.nonzero_threshold * scale2 &&
                         r2.round_trip_defect <= 1e-10;
        ok = ok && ok4 && ok2;
        os << " N=" << n << ": 4KRE " << r4.nonzero_count << " nonzero, min " << fmt("%.3e", r4.min_eigenvalue)
           << "; 2RE " << r2.nonzero_count << " nonzero, min " << fmt("%.1e", r2.min_eigenvalue)
           << "; round trip " << fmt("%.1e", std::max(r4.round_trip_defect, r2.round_trip_defect)) << ";";
    }
    return {ok, os.str()};
}

Outcome c8_magnetization_below() { return steady_state_convergence({0.2, 0.3, 0.4}, 0.0, false); }

Outcome c9_distribution_shape() {
    const std::vector<long> ns{1000, 10000, 100000};
    std::vector<double> rel_width;
    double r2_mid = 0.0;
    std::ostringstream os;
    for (long n : ns) {
        const ModelParams p = reference(0.6, n);
        const auto ss = steady_state(build_sector(p, compute_q_coefficients(p), 0, TheoryOrder::Fourth));
        const auto d = gaussian_diagnostic(ss);
        rel_width.push_back(d.stddev / static_cast<double>(n));
        if (n == 10000) r2_mid = d.r_squared;
        os << " N=" << n << ": stddev/N " << fmt("%.4e", rel_width.back()) << ", R2 " << fmt("%.5f", d.r_squared)
           << ", skew " << fmt("%.3f", d.skewness) << ";";
    }
    const bool shrink = rel_width[1] < rel_width[0] && rel_width[2] < rel_width[1];
    return {r2_mid >= 0.99 && shrink, os.str()};
}

Outcome c10_z2_gap() {
    std::vector<long> ns;
    for (long n = 4; n <= 14; ++n) ns.push_back(n);
    Z2Params above, below;
    above.g_sqrt_n = 0.3;
    below.g_sqrt_n = 0.05;
    const double gc = z2_critical_coupling(above);
    std::ostringstream os;
    os << " gc*sqrt(N) = " << fmt("%.4f", gc) << ";";

    std::vector<std::pair<double, double>> pts;
    for (const auto& pt : z2_gap_scan(above, ns, Z2Model::AtomOnly))
        pts.emplace_back(static_cast<double>(pt.n_spins), -pt.gap.real());
    const GapFit f = fit_gap_scaling(pts, GapModel::ExponentialInN);
    const bool above_ok = f.b > 0.0 && f.r_squared >= 0.95;
    os << " above (g=" << above.g_sqrt_n << "): C = " << fmt("%.4f", f.b) << ", R2 = " << fmt("%.4f", f.r_squared)
       << ";";

    double lo = 1e300, hi = 0.0;
    for (const auto& pt : z2_gap_scan(below, ns, Z2Model::AtomOnly)) {
        lo = std::min(lo, -pt.gap.real());
        hi = std::max(hi, -pt.gap.real());
    }
    const double variation = (hi - lo) / lo;
    const bool below_ok = variation < 0.2;
    os << " below (g=" << below.g_sqrt_n << "): gap range [" << fmt("%.4e", lo) << ", " << fmt("%.4e", hi)
       << "], variation " << fmt("%.1f%%", 100.0 * variation) << ";";
    return {above_ok && below_ok, os.str()};
}

Outcome c11_identities() {
    bool closure_ok = true;
    for (int two_s = 1; two_s <= 12; ++two_s) closure_ok = closure_ok && gaussian_closure_identities(0.5 * two_s).passed;

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        ModelParams p;
        p.kappa = 1.0 + 10.0 * u(rng);
        p.omega0 = 0.01 + 0.2 * u(rng);
        p.omega_a = p.omega_b = 1.0 + 8.0 * u(rng);
        p.g_sqrt_n = 0.1 + 1.5 * u(rng);
        p.n_spins = 100 + static_cast<long>(1e5 * u(rng));
        const auto q = compute_q_coefficients(p);
        const auto fp = meanfield_fixed_point(p, q);
        const double h = 1e-6 * p.spin();
        const double fd = (meanfield_rhs(fp.sz + h, p, q) - meanfield_rhs(fp.sz - h, p, q)) / (2.0 * h);
        worst = std::max(worst, std::abs(fp.rate - fd) / std::abs(fp.rate));
    }
    return {closure_ok && worst <= 1e-6, std::string("closure identities S = 1/2..6 ") +
                                             (closure_ok ? "hold" : "FAIL") +
                                             ", max rel |rate - FD| = " + fmt("%.2e", worst)};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"critical coupling", c1_critical_coupling},
        {"second-order steady state independent of g", c2_second_order_steady_state},
        {"sector spectra equal the dense oracle", c3_oracle_equivalence},
        {"above-threshold magnetization approaches mean field", c4_magnetization_above},
        {"sector, cumulant and mean-field relaxation rates agree", c5_relaxation_rates},
        {"k=1 gap stays open as N grows", c6_gap_scaling},
        {"Kossakowski eigenvalue counts and signs", c7_kossakowski},
        {"below-threshold magnetization approaches -1/2", c8_magnetization_below},
        {"quasi-Gaussian steady distribution", c9_distribution_shape},
        {"Z2 atom-only gap closes above threshold only", c10_z2_gap},
        {"closure identities and mean-field Jacobian", c11_identities},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::stoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!wanted.empty() && !wanted.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        if (!o.detail.empty() && o.detail.front() == ' ') o.detail.erase(0, 1);
        std::printf("%s criterion %d: %s (%.1f s) | %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
