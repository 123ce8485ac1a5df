#include "atomonly/runner.hpp"
#include "atomonly/errors.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

namespace atomonly {

nlohmann::json to_json(const KossakowskiReport& r) {
    return {
        {"hermiticityDefect", r.hermiticity_defect},
        {"traceDefect", r.trace_defect},
        {"eigenvalues", r.eigenvalues},
        {"nonzeroCount", r.nonzero_count},
        {"minEigenvalue", r.min_eigenvalue},
        {"effectiveHamiltonianNorm", r.effective_hamiltonian_norm},
        {"roundTripDefect", r.round_trip_defect},
        {"nonzeroThreshold", r.nonzero_threshold},
        {"maxAntihermitian", r.max_antihermitian},
    };
}

std::string format_real(double x) {
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fr(double x) { return format_real(x); }
std::string fi(long x) { return std::to_string(x); }

// what a point computes: rows for the main table, a JSON summary, extra tables
struct PointOutput {
    std::vector<std::vector<std::string>> rows;
    nlohmann::json summary = nlohmann::json::object();
    nlohmann::json report;
    std::vector<std::pair<std::string, Table>> extra;
    double fit_value{std::nan("")};  // quantity fed to the gap-scaling fit
};

struct TaskSpec {
    std::vector<std::string> columns;  // without the leading axis columns and the status column
    std::function<PointOutput(const RunConfig&, const SweepPoint&, std::size_t)> compute;
};

ModelParams u1_params(const RunConfig& cfg, const SweepPoint& pt) {
    ModelParams p = cfg.params;
    p.g_sqrt_n = pt.g_sqrt_n;
    p.n_spins = pt.n_spins;
    p.validate();
    return p;
}

Z2Params z2_params(const RunConfig& cfg, const SweepPoint& pt) {
    Z2Params p = cfg.z2;
    p.g_sqrt_n = pt.g_sqrt_n;
    p.n_spins = pt.n_spins;
    p.validate();
    return p;
}

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

TaskSpec steady_state_task() {
    return {{"mean_sz_over_n", "mean_szsz_over_n2", "min_p", "residual", "stddev_m", "skewness", "excess_kurtosis",
             "gaussian_r2", "meanfield_sz_over_n"},
            [](const RunConfig& cfg, const SweepPoint& pt, std::size_t idx) {
                const ModelParams p = u1_params(cfg, pt);
                const auto q = compute_q_coefficients(p);
                const SteadyState ss = steady_state(build_sector(p, q, 0, cfg.order), cfg.solver);
                const GaussianDiagnostic g = gaussian_diagnostic(ss);
                const double n = static_cast<double>(p.n_spins);
                double mf = std::nan("");
                try {
                    mf = meanfield_sz_ss(p);
                } catch (const ConfigError&) {
                }
                PointOutput o;
                o.rows.push_back({fr(ss.mean_sz / n), fr(ss.mean_szsz / (n * n)), fr(ss.min_p), fr(ss.residual),
                                  fr(g.stddev), fr(g.skewness), fr(g.excess_kurtosis), fr(g.r_squared), fr(mf)});
                o.summary = {{"residual", ss.residual}, {"matrixNorm", ss.matrix_norm}, {"iterations", ss.iterations},
                             {"lambda2Estimate", ss.lambda2_estimate}, {"quasiGaussian", g.quasi_gaussian}};
                if (cfg.write_distributions) {
                    Table t{{"m", "p_m"}, {}};
                    for (Eigen::Index i = 0; i < ss.p.size(); ++i)
                        t.rows.push_back({fr(ss.m_first + static_cast<double>(i)), fr(ss.p(i))});
                    o.extra.emplace_back("distribution_" + std::to_string(idx) + ".csv", std::move(t));
                }
                return o;
            }};
}

TaskSpec spectrum_task() {
    return {{"sector_k", "index", "re_mhz", "im_mhz", "residual", "converged"},
            [](const RunConfig& cfg, const SweepPoint& pt, std::size_t) {
                PointOutput o;
                if (cfg.model == ModelKind::Z2) {
                    const Z2Params p = z2_params(cfg, pt);
                    const Z2Spectrum s = z2_spectrum(build_z2(p, cfg.z2_model), p, cfg.z2_model);
                    const int count = std::min<int>(cfg.eigenvalue_count, static_cast<int>(s.eigenvalues.size()));
                    for (int i = 0; i < count; ++i)
                        o.rows.push_back({"", fi(i), fr(s.eigenvalues[i].real()), fr(s.eigenvalues[i].imag()), "", "true"});
                    o.summary = {{"zeroModes", s.zero_modes}, {"matrixNorm", s.matrix_norm}};
                    return o;
                }
                const ModelParams p = u1_params(cfg, pt);
                const auto q = compute_q_coefficients(p);
                const SectorMatrix s = build_sector(p, q, cfg.sector_k, cfg.order);
                const SpectralResult r = sector_eigenvalues(s, cfg.eigenvalue_count, {}, cfg.solver);
                const int count = std::min<int>(cfg.eigenvalue_count, static_cast<int>(r.eigenvalues.size()));
                for (int i = 0; i < count; ++i)
                    o.rows.push_back({fi(cfg.sector_k), fi(i), fr(r.eigenvalues[i].real()), fr(r.eigenvalues[i].imag()),
                                      fr(r.residuals[i]), r.converged[i] ? "true" : "false"});
                o.summary = {{"method", to_string(r.method)}, {"matrixNorm", r.matrix_norm},
                             {"maxResidual", max_of(r.residuals)}, {"restarts", r.restarts},
                             {"applications", r.applications}};
                return o;
            }};
}

TaskSpec gap_scan_task() {
    return {{"sector_k", "gap_re_mhz", "gap_im_mhz", "shifts", "window_covered"},
            [](const RunConfig& cfg, const SweepPoint& pt, std::size_t) {
                PointOutput o;
                const ModelParams p = u1_params(cfg, pt);
                const auto q = compute_q_coefficients(p);
                const GapResult g = liouvillian_gap_detail(p, q, cfg.order, cfg.sector_k, cfg.solver);
                o.rows.push_back({fi(cfg.sector_k), fr(g.gap.real()), fr(g.gap.imag()), fi(static_cast<long>(g.shifts.size())),
                                  g.window_covered ? "true" : "false"});
                o.summary = {{"method", to_string(g.spectrum.method)}, {"matrixNorm", g.spectrum.matrix_norm},
                             {"maxResidual", max_of(g.spectrum.residuals)}, {"shifts", g.shifts.size()},
                             {"windowCovered", g.window_covered}};
                o.fit_value = -g.gap.real();
                return o;
            }};
}

TaskSpec z2_gap_task() {
    return {{"photon_cutoff", "z2_model", "gap_re_mhz", "gap_im_mhz", "zero_modes", "steady_sz_over_n"},
            [](const RunConfig& cfg, const SweepPoint& pt, std::size_t) {
                PointOutput o;
                const Z2Params p = z2_params(cfg, pt);
                const Z2Spectrum s = z2_spectrum(build_z2(p, cfg.z2_model), p, cfg.z2_model);
                const std::string cutoff = cfg.z2_model == Z2Model::Full ? fi(p.photon_cutoff) : "";
                o.rows.push_back({cutoff, to_string(cfg.z2_model), fr(s.gap.real()), fr(s.gap.imag()), fi(s.zero_modes),
                                  fr(s.steady_sz / static_cast<double>(p.n_spins))});
                o.summary = {{"zeroModes", s.zero_modes}, {"matrixNorm", s.matrix_norm}};
                o.fit_value = -s.gap.real();
                return o;
            }};
}

TaskSpec cumulant_task() {
    return {{"m1_over_n", "m2_over_n2", "variance_over_n", "slow_re_mhz", "slow_im_mhz", "fast_re_mhz", "fast_im_mhz",
             "start", "multistable"},
            [](const RunConfig& cfg, const SweepPoint& pt, std::size_t idx) {
                PointOutput o;
                const ModelParams p = u1_params(cfg, pt);
                const auto q = compute_q_coefficients(p);
                const CumulantFixedPoint fp = cumulant_steady_state(p, q, cfg.ode);
                const auto ev = cumulant_jacobian_eigenvalues(fp.m1, fp.m2, p, q);
                const double n = static_cast<double>(p.n_spins);
                o.rows.push_back({fr(fp.m1 / n), fr(fp.m2 / (n * n)), fr((fp.m2 - fp.m1 * fp.m1) / n), fr(ev[0].real()),
                                  fr(ev[0].imag()), fr(ev[1].real()), fr(ev[1].imag()), fp.start,
                                  fp.multistable ? "true" : "false"});
                o.summary = {{"rhsNorm", fp.rhs_norm}, {"tReached", fp.t_reached}, {"convergedStarts", fp.converged}};
                if (cfg.ode.record_every > 0.0) {
                    const double S = p.spin();
                    CumulantState init{-S, S * S, 0.0};
                    if (fp.start == "midpoint") init = {0.0, 0.5 * S * S, 0.0};
                    if (fp.start == "meanfield_seeded") {
                        const double sz = meanfield_fixed_point(p, q).sz;
                        init = {sz, sz * sz + 0.5 * S, 0.0};
                    }
                    const Trajectory tr = integrate_cumulants(init, p, q, cfg.ode);
                    Table t{{"time_us", "m1", "m2"}, {}};
                    for (const auto& s : tr.states) t.rows.push_back({fr(s.time), fr(s.m1), fr(s.m2)});
                    o.extra.emplace_back("trajectory_" + std::to_string(idx) + ".csv", std::move(t));
                }
                return o;
            }};
}

TaskSpec mean_field_task() {
    return {{"sz_over_n", "lambda_mf_mhz", "interior"},
            [](const RunConfig& cfg, const SweepPoint& pt, std::size_t) {
                PointOutput o;
                const ModelParams p = u1_params(cfg, pt);
                const auto q = compute_q_coefficients(p);
                const MeanFieldFixedPoint fp = meanfield_fixed_point(p, q);
                o.rows.push_back({fr(fp.sz / static_cast<double>(p.n_spins)), fr(fp.rate), fp.interior ? "true" : "false"});
                return o;
            }};
}

TaskSpec positivity_task() {
    return {{"order", "index", "eigenvalue"},
            [](const RunConfig& cfg, const SweepPoint& pt, std::size_t) {
                PointOutput o;
                const ModelParams p = u1_params(cfg, pt);
                const auto q = compute_q_coefficients(p);
                const KossakowskiReport r = kossakowski_report(p, q, cfg.order, cfg.nonzero_threshold);
                for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
                    o.rows.push_back({to_string(cfg.order), fi(static_cast<long>(i)), fr(r.eigenvalues[i])});
                o.report = to_json(r);
                o.summary = {{"nonzeroCount", r.nonzero_count}, {"roundTripDefect", r.round_trip_defect}};
                return o;
            }};
}

TaskSpec task_spec(const RunConfig& cfg) {
    switch (*cfg.task) {
        case Task::SteadyState: return steady_state_task();
        case Task::Spectrum: return spectrum_task();
        case Task::GapScan: return cfg.model == ModelKind::Z2 ? z2_gap_task() : gap_scan_task();
        case Task::Cumulant: return cumulant_task();
        case Task::MeanField: return mean_field_task();
        case Task::Positivity: return positivity_task();
    }
    throw ConfigError("unhandled task");
}

std::string error_status(const std::exception& e) {
    std::string kind = "error";
    if (dynamic_cast<const ConfigError*>(&e)) kind = "config_error";
    else if (dynamic_cast<const NumericalError*>(&e)) kind = "numerical_error";
    std::string msg = e.what();
    for (char& c : msg)
        if (c == '\n') c = ' ';
    return kind + ": " + msg;
}

std::string iso_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

std::string to_csv(const Table& t) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cells[i]);
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

std::string task_slug(Task t) {
    switch (t) {
        case Task::SteadyState: return "steady-state";
        case Task::Spectrum: return "spectrum";
        case Task::GapScan: return "gap-scan";
        case Task::Cumulant: return "cumulant";
        case Task::MeanField: return "mean-field";
        case Task::Positivity: return "positivity";
    }
    return "run";
}

RunResult execute(const RunConfig& cfg, int workers) {
    if (!cfg.task) throw ConfigError("task: no task given");
    const TaskSpec spec = task_spec(cfg);
    const std::vector<SweepPoint> pts = expand_sweep(cfg);
    const std::size_t n = pts.size();
    std::vector<PointOutput> outs(n);
    std::vector<std::string> status(n, "ok");
    std::vector<double> seconds(n, 0.0);

    const int threads = workers > 0 ? workers : omp_get_max_threads();
    if (threads > 1) omp_set_max_active_levels(1);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::size_t i = 0; i < n; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            outs[i] = spec.compute(cfg, pts[i], i);
        } catch (const std::exception& e) {
            status[i] = error_status(e);
        }
        seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    RunResult res;
    res.table.header = {"g_sqrt_n_mhz", "n_spins"};
    res.table.header.insert(res.table.header.end(), spec.columns.begin(), spec.columns.end());
    res.table.header.push_back("status");
    for (std::size_t i = 0; i < n; ++i) {
        const bool ok = status[i] == "ok";
        (ok ? res.ok_points : res.failed_points)++;
        std::vector<std::vector<std::string>> rows = outs[i].rows;
        if (!ok || rows.empty()) rows = {std::vector<std::string>(spec.columns.size(), "")};
        for (auto& r : rows) {
            std::vector<std::string> line{fr(pts[i].g_sqrt_n), fi(pts[i].n_spins)};
            line.insert(line.end(), r.begin(), r.end());
            line.push_back(status[i]);
            res.table.rows.push_back(std::move(line));
        }
        nlohmann::json pj = {{"gSqrtN", pts[i].g_sqrt_n}, {"nSpins", pts[i].n_spins}, {"status", status[i]},
                             {"seconds", seconds[i]}};
        if (ok) pj["solver"] = outs[i].summary;
        if (pts[i].n_spins % 2 != 0 && (*cfg.task == Task::Cumulant || *cfg.task == Task::MeanField))
            pj["note"] = "odd N: closure equations are untested for half-integer S";
        res.points.push_back(pj);
        if (ok && !outs[i].report.is_null())
            res.reports.push_back({{"gSqrtN", pts[i].g_sqrt_n}, {"nSpins", pts[i].n_spins}, {"report", outs[i].report}});
        for (auto& e : outs[i].extra) res.extra_tables.push_back(std::move(e));
    }

    // gap-vs-N fits, one per coupling
    if (*cfg.task == Task::GapScan && cfg.sweep.axis == SweepAxis::NSpins) {
        std::map<double, std::vector<std::pair<double, double>>> groups;
        std::vector<double> order;
        for (std::size_t i = 0; i < n; ++i) {
            if (!groups.count(pts[i].g_sqrt_n)) order.push_back(pts[i].g_sqrt_n);
            auto& grp = groups[pts[i].g_sqrt_n];
            if (status[i] == "ok" && std::isfinite(outs[i].fit_value))
                grp.emplace_back(static_cast<double>(pts[i].n_spins), outs[i].fit_value);
        }
        for (double g : order) {
            nlohmann::json fj = {{"gSqrtN", g}, {"model", to_string(cfg.fit_model)}, {"quantity", "-Re(gap)"}};
            try {
                const GapFit f = fit_gap_scaling(groups[g], cfg.fit_model);
                fj.update({{"A", f.a}, {"B", f.b}, {"AStderr", f.a_stderr}, {"BStderr", f.b_stderr},
                           {"rSquared", f.r_squared}, {"points", f.points}});
            } catch (const std::exception& e) {
                fj["error"] = e.what();
            }
            res.fits.push_back(fj);
        }
    }
    return res;
}

RunOutcome run(const RunConfig& cfg, int workers) {
    namespace fs = std::filesystem;
    const std::string started = iso_now();
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out;
    out.result = execute(cfg, workers);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    fs::create_directories(cfg.output_path);
    const std::string slug = task_slug(*cfg.task);
    out.csv_path = (fs::path(cfg.output_path) / (slug + ".csv")).string();
    out.sidecar_path = (fs::path(cfg.output_path) / (slug + ".json")).string();
    auto write = [](const std::string& path, const std::string& body) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + path);
        f << body;
    };
    write(out.csv_path, to_csv(out.result.table));
    for (const auto& [name, t] : out.result.extra_tables) write((fs::path(cfg.output_path) / name).string(), to_csv(t));

    nlohmann::json config = nlohmann::json::array();
    for (const auto& [k, v] : cfg.echo) config.push_back({k, v});
    nlohmann::json side = {
        {"task", to_string(*cfg.task)},
        {"model", to_string(cfg.model)},
        {"order", to_string(cfg.order)},
        {"config", config},
        {"versions",
         {{"atomonly", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION},
          {"compiler", __VERSION__}}},
        {"started", started},
        {"elapsedSeconds", elapsed},
        {"workers", workers > 0 ? workers : omp_get_max_threads()},
        {"arnoldiSeed", cfg.solver.arnoldi.seed},
        {"okPoints", out.result.ok_points},
        {"failedPoints", out.result.failed_points},
        {"points", out.result.points},
        {"fits", out.result.fits},
    };
    write(out.sidecar_path, side.dump(2) + "\n");
    if (*cfg.task == Task::Positivity) {
        write((fs::path(cfg.output_path) / "positivity-report.json").string(), out.result.reports.dump(2) + "\n");
    }
    out.exit_code = out.result.ok_points == 0 ? 2 : 0;
    return out;
}

} // namespace atomonly
