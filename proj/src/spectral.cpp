#include "atomonly/spectral.hpp"
#include "atomonly/banded_lu.hpp"
#include "atomonly/dense_eigen.hpp"
#include "atomonly/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

namespace atomonly {

const char* to_string(SpectralMethod m) {
    return m == SpectralMethod::Dense ? "Dense" : "ShiftInvertArnoldi";
}

namespace {

std::string sci(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

double residual_of(const SectorMatrix& s, const Eigen::VectorXcd& v, cplx lam) {
    const double nv = v.norm();
    return nv > 0.0 ? (s.apply(v) - lam * v).norm() / nv : INFINITY;
}

std::unique_ptr<BandedLU> factor_with_retry(const SectorMatrix& s, cplx& sigma, const SolverSettings& st,
                                            double ratio_tol) {
    const double scale = std::max(s.max_abs(), 1e-300);
    for (int attempt = 0;; ++attempt) {
        try {
            return std::make_unique<BandedLU>(s, sigma, ratio_tol);
        } catch (const SingularFactorizationError&) {
            if (attempt >= st.shift_retries) throw;
            sigma += cplx(1e-8, 1e-8) * scale * static_cast<double>(attempt + 1);
        }
    }
}

void sort_result(SpectralResult& r) {
    std::vector<std::size_t> idx(r.eigenvalues.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        const cplx x = r.eigenvalues[i], y = r.eigenvalues[j];
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() < y.imag();
    });
    SpectralResult out = r;
    out.eigenvalues.clear(); out.residuals.clear(); out.converged.clear();
    out.zero_mode_index = -1;
    for (std::size_t t = 0; t < idx.size(); ++t) {
        out.eigenvalues.push_back(r.eigenvalues[idx[t]]);
        out.residuals.push_back(r.residuals[idx[t]]);
        out.converged.push_back(r.converged[idx[t]]);
        if (static_cast<int>(idx[t]) == r.zero_mode_index) out.zero_mode_index = static_cast<int>(t);
    }
    r = std::move(out);
}

} // namespace

SteadyState steady_state(const SectorMatrix& s, const SolverSettings& st) {
    if (s.k != 0) throw SectorRangeError("steady_state needs the k = 0 sector");
    const Eigen::Index n = s.dim();
    SteadyState out;
    out.m_first = s.m_first;
    out.matrix_norm = s.norm1();
    const double norm = out.matrix_norm;

    if (n == 1) {
        out.p = Eigen::VectorXd::Ones(1);
    } else {
        cplx sigma = st.steady_shift_rel * s.max_abs();
        auto lu = factor_with_retry(s, sigma, st, 0.0);
        Eigen::VectorXcd v = Eigen::VectorXcd::Constant(n, 1.0 / static_cast<double>(n));
        double prev = INFINITY, res = INFINITY;
        int stagnant = 0;
        int it = 0;
        for (it = 1; it <= st.steady_max_iter; ++it) {
            lu->solve_in_place(v);
            v /= v.sum();
            res = s.apply(v).lpNorm<1>();
            if (res <= 1e-15 * norm) break;
            if (res > 0.5 * prev) {
                if (++stagnant >= 3) break;
            } else {
                stagnant = 0;
            }
            prev = std::min(prev, res);
        }
        out.iterations = std::min(it, st.steady_max_iter);
        if (!(res <= st.residual_rel * norm))
            throw ConvergenceError("steady state: residual " + sci(res) + " above " + sci(st.residual_rel * norm));

        // second-smallest eigenvalue estimate: inverse iteration on the complement of the null vector
        const cplx vs = v.sum();
        auto deflate = [&](Eigen::VectorXcd& y) { y -= v * (y.sum() / vs); };
        std::mt19937_64 rng(st.arnoldi.seed);
        std::normal_distribution<double> nd;
        Eigen::VectorXcd y(n);
        for (Eigen::Index i = 0; i < n; ++i) y[i] = cplx(nd(rng), nd(rng));
        deflate(y);
        y /= y.norm();
        double growth = 0.0;
        for (int t = 0; t < 4; ++t) {
            lu->solve_in_place(y);
            deflate(y);
            growth = y.norm();
            y /= growth;
        }
        out.lambda2_estimate = 1.0 / growth;
        if (out.lambda2_estimate < st.degeneracy_rel * norm)
            throw DegenerateNullSpaceError("second eigenvalue estimate " + sci(out.lambda2_estimate) + " within " +
                                           sci(st.degeneracy_rel) + " * norm (" + sci(norm) + ") of zero");
        out.p = v.real();
    }

    const double total = out.p.sum();
    out.p /= total;
    out.residual = s.apply(out.p.cast<cplx>()).lpNorm<1>();
    out.min_p = out.p.minCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double M = s.m_at(i);
        out.mean_sz += M * out.p[i];
        out.mean_szsz += M * M * out.p[i];
    }
    return out;
}

SpectralResult sector_eigenvalues(const SectorMatrix& s, int count, cplx target, const SolverSettings& st) {
    if (count < 1) throw ConfigError("sector_eigenvalues: count must be >= 1");
    const Eigen::Index n = s.dim();
    count = static_cast<int>(std::min<Eigen::Index>(count, n));
    SpectralResult r;
    r.sector_k = s.k;
    r.matrix_norm = s.norm1();
    r.target = target;
    const double norm = r.matrix_norm;

    if (n <= st.dense_cap) {
        r.method = SpectralMethod::Dense;
        const DenseEigen de = dense_eigen(s.to_dense(), true);
        std::vector<Eigen::Index> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index i, Eigen::Index j) {
            return std::abs(de.values[i] - target) < std::abs(de.values[j] - target);
        });
        Eigen::Index zero_idx = -1;
        if (s.k == 0) {
            zero_idx = 0;
            for (Eigen::Index i = 1; i < n; ++i)
                if (std::abs(de.values[i]) < std::abs(de.values[zero_idx])) zero_idx = i;
        }
        for (int t = 0; t < count; ++t) {
            const Eigen::Index i = idx[t];
            r.eigenvalues.push_back(de.values[i]);
            const double res = residual_of(s, de.vectors.col(i), de.values[i]);
            r.residuals.push_back(res);
            r.converged.push_back(res <= st.residual_rel * std::max(norm, 1e-300));
            if (i == zero_idx) r.zero_mode_index = t;
        }
        sort_result(r);
        return r;
    }

    r.method = SpectralMethod::ShiftInvertArnoldi;
    Projector project;
    Eigen::VectorXcd u;
    int nev = count;
    if (s.k == 0) {
        const SteadyState ss = steady_state(s, st);
        u = ss.p.cast<cplx>();
        const cplx us = u.sum();
        // oblique projector onto the complement of the null vector along the all-ones left null vector
        project = [u, us](Eigen::VectorXcd& v) { v -= u * (v.sum() / us); };
        nev = std::max(1, count - 1);
        r.eigenvalues.push_back(0.0);
        r.residuals.push_back(residual_of(s, u, 0.0));
        r.converged.push_back(r.residuals.back() <= st.residual_rel * norm);
        r.zero_mode_index = 0;
    }
    cplx sigma = target;
    auto lu = factor_with_retry(s, sigma, st, 1e-15);
    r.target = sigma;
    LinearOp op = [&lu](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
        out = in;
        lu->solve_in_place(out);
    };
    const ArnoldiResult ar = krylov_schur(op, n, nev, st.arnoldi, project);
    r.restarts = ar.restarts;
    r.applications = ar.applications;
    for (int i = 0; i < nev; ++i) {
        const cplx lam = sigma + 1.0 / ar.theta[i];
        r.eigenvalues.push_back(lam);
        const double res = residual_of(s, ar.vectors.col(i), lam);
        r.residuals.push_back(res);
        r.converged.push_back(res <= st.residual_rel * norm);
    }
    if (!ar.converged)
        throw ConvergenceError("shift-invert Arnoldi: " + std::to_string(ar.nconv) + " of " + std::to_string(nev) +
                               " converged after " + std::to_string(ar.restarts) + " restarts");
    sort_result(r);
    return r;
}

GapResult liouvillian_gap_detail(const ModelParams& p, const QCoefficients& q, TheoryOrder order, int k,
                                 const SolverSettings& st) {
    const SectorMatrix s = build_sector(p, q, k, order);
    GapResult g;
    const double norm = s.norm1();

    auto pick = [&](const SpectralResult& r, bool skip_zero) {
        bool found = false;
        cplx best{};
        for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
            if (skip_zero && static_cast<int>(i) == r.zero_mode_index) continue;
            if (!r.converged[i]) continue;
            if (!skip_zero && std::abs(r.eigenvalues[i]) <= st.nonzero_rel * norm && k == 0) continue;
            if (!found || r.eigenvalues[i].real() > best.real()) { best = r.eigenvalues[i]; found = true; }
        }
        if (!found) throw ConvergenceError("no converged nonzero eigenvalue in sector " + std::to_string(k));
        return best;
    };

    if (s.dim() <= st.dense_cap) {
        g.spectrum = sector_eigenvalues(s, static_cast<int>(s.dim()), 0.0, st);
        g.gap = pick(g.spectrum, k == 0);
        return g;
    }
    if (k == 0) {
        g.spectrum = sector_eigenvalues(s, std::max(2, st.gap_nev), 0.0, st);
        g.shifts = {g.spectrum.target};
        g.gap = pick(g.spectrum, true);
        return g;
    }

    // |k| >= 1: walk shifts i*y up the imaginary window. A shift whose nev nearest eigenvalues lie
    // within radius r certifies that no eigenvalue with Re > -a exists for |Im - y| <= sqrt(r^2 - a^2),
    // where -a is the best real part found so far; the next shift starts where that certificate ends.
    SpectralResult merged;
    merged.sector_k = k;
    merged.method = SpectralMethod::ShiftInvertArnoldi;
    merged.matrix_norm = norm;
    bool have_best = false;
    cplx best{};
    double y = st.gap_im_min;
    const double width = st.gap_im_max - st.gap_im_min;
    const double min_step = width / std::max(1, st.gap_max_shifts);
    g.window_covered = true;
    int nev = st.gap_nev;
    while (true) {
        if (static_cast<int>(g.shifts.size()) >= st.gap_max_shifts) {
            g.window_covered = false;
            break;
        }
        const SpectralResult r = sector_eigenvalues(s, nev, cplx(0.0, y), st);
        g.shifts.push_back(r.target);
        double radius = 0.0;
        for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
            radius = std::max(radius, std::abs(r.eigenvalues[i] - r.target));
            merged.eigenvalues.push_back(r.eigenvalues[i]);
            merged.residuals.push_back(r.residuals[i]);
            merged.converged.push_back(r.converged[i]);
            if (r.converged[i] && (!have_best || r.eigenvalues[i].real() > best.real())) {
                best = r.eigenvalues[i];
                have_best = true;
            }
        }
        merged.restarts += r.restarts;
        merged.applications += r.applications;
        const double a = have_best ? std::max(0.0, -best.real()) : 0.0;
        double half = radius > a ? std::sqrt(radius * radius - a * a) : 0.0;
        if (half < min_step) {
            if (nev < st.gap_nev_max) {
                nev = std::min(st.gap_nev_max, 2 * nev);
                continue;  // same y, more eigenvalues
            }
            g.window_covered = false;
            half = min_step;
        }
        if (y >= st.gap_im_max) break;
        y = std::min(st.gap_im_max, y + half);
        nev = st.gap_nev;
    }
    // drop duplicates found from neighbouring shifts
    SpectralResult uniq = merged;
    uniq.eigenvalues.clear(); uniq.residuals.clear(); uniq.converged.clear();
    for (std::size_t i = 0; i < merged.eigenvalues.size(); ++i) {
        bool dup = false;
        for (const cplx& e : uniq.eigenvalues)
            if (std::abs(e - merged.eigenvalues[i]) <= 1e-9 * std::max(1.0, std::abs(e))) dup = true;
        if (dup) continue;
        uniq.eigenvalues.push_back(merged.eigenvalues[i]);
        uniq.residuals.push_back(merged.residuals[i]);
        uniq.converged.push_back(merged.converged[i]);
    }
    sort_result(uniq);
    g.spectrum = uniq;
    g.gap = pick(uniq, false);
    return g;
}

cplx liouvillian_gap(const ModelParams& p, const QCoefficients& q, TheoryOrder order, int k,
                     const SolverSettings& st) {
    return liouvillian_gap_detail(p, q, order, k, st).gap;
}

GaussianDiagnostic gaussian_diagnostic(const SteadyState& ss) {
    GaussianDiagnostic d;
    const Eigen::Index n = ss.p.size();
    auto M = [&](Eigen::Index i) { return ss.m_first + static_cast<double>(i); };
    double mu = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mu += M(i) * ss.p[i];
    double m2 = 0, m3 = 0, m4 = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = M(i) - mu;
        m2 += x * x * ss.p[i];
        m3 += x * x * x * ss.p[i];
        m4 += x * x * x * x * ss.p[i];
    }
    d.mean = mu;
    d.stddev = std::sqrt(std::max(m2, 0.0));
    d.skewness = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
    d.excess_kurtosis = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0.0;

    // Gauss-Newton fit of A exp(-(M - c)^2 / (2 w^2)) on the window mean +- 6 sd
    const double sd = std::max(d.stddev, 0.5);
    const Eigen::Index lo = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(mu - 6 * sd - ss.m_first)), 0, n - 1);
    const Eigen::Index hi = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::ceil(mu + 6 * sd - ss.m_first)), 0, n - 1);
    const Eigen::Index w = hi - lo + 1;
    Eigen::VectorXd xs(w), ys(w);
    for (Eigen::Index i = 0; i < w; ++i) { xs[i] = M(lo + i); ys[i] = ss.p[lo + i]; }
    Eigen::Vector3d th(ys.maxCoeff(), mu, sd);
    auto resid = [&](const Eigen::Vector3d& t) {
        Eigen::VectorXd r(w);
        for (Eigen::Index i = 0; i < w; ++i) {
            const double z = (xs[i] - t[1]) / t[2];
            r[i] = ys[i] - t[0] * std::exp(-0.5 * z * z);
        }
        return r;
    };
    double sse = resid(th).squaredNorm();
    for (int it = 0; it < 100; ++it) {
        Eigen::MatrixXd J(w, 3);
        for (Eigen::Index i = 0; i < w; ++i) {
            const double z = (xs[i] - th[1]) / th[2];
            const double e = std::exp(-0.5 * z * z);
            J(i, 0) = e;
            J(i, 1) = th[0] * e * z / th[2];
            J(i, 2) = th[0] * e * z * z / th[2];
        }
        const Eigen::Vector3d step = J.colPivHouseholderQr().solve(resid(th));
        double lam = 1.0;
        bool improved = false;
        for (int h = 0; h < 30; ++h, lam *= 0.5) {
            Eigen::Vector3d t2 = th + lam * step;
            if (t2[2] <= 0) continue;
            const double s2 = resid(t2).squaredNorm();
            if (s2 < sse) { th = t2; improved = (sse - s2) > 1e-14 * sse; sse = s2; break; }
        }
        if (!improved) break;
    }
    const double ybar = ys.mean();
    const double sst = (ys.array() - ybar).square().sum();
    d.r_squared = sst > 0 ? 1.0 - sse / sst : 0.0;
    d.fit_amplitude = th[0];
    d.fit_center = th[1];
    d.fit_width = std::abs(th[2]);
    d.quasi_gaussian = d.r_squared >= 0.99;
    return d;
}

} // namespace atomonly
