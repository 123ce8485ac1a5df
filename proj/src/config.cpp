#include "atomonly/config.hpp"
#include "atomonly/errors.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

namespace atomonly {

const char* to_string(ModelKind m) { return m == ModelKind::U1 ? "U1" : "Z2"; }

const char* to_string(Task t) {
    switch (t) {
        case Task::SteadyState: return "SteadyState";
        case Task::Spectrum: return "Spectrum";
        case Task::GapScan: return "GapScan";
        case Task::Cumulant: return "Cumulant";
        case Task::MeanField: return "MeanField";
        case Task::Positivity: return "Positivity";
    }
    return "?";
}

const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::None: return "none";
        case SweepAxis::GSqrtN: return "gSqrtN";
        case SweepAxis::NSpins: return "nSpins";
    }
    return "?";
}

const char* to_string(Spacing s) { return s == Spacing::Linear ? "linear" : "log"; }

Task parse_task(const std::string& s) {
    for (Task t : {Task::SteadyState, Task::Spectrum, Task::GapScan, Task::Cumulant, Task::MeanField, Task::Positivity})
        if (s == to_string(t)) return t;
    throw ConfigError("unknown task '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_real(const std::string& v) {
    const std::string t = trim(v);
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x))
        throw ConfigError("expected a finite real, got '" + v + "'");
    return x;
}

long to_integer(const std::string& v) {
    const double x = to_real(v);
    if (x != std::floor(x) || std::abs(x) > 9e15) throw ConfigError("expected an integer, got '" + v + "'");
    return static_cast<long>(x);
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_real(item));
    if (out.empty()) throw ConfigError("expected a comma-separated list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"model", [](RunConfig& c, const std::string& v) {
             if (v == "U1") c.model = ModelKind::U1;
             else if (v == "Z2") c.model = ModelKind::Z2;
             else throw ConfigError("model must be U1 or Z2, got '" + v + "'");
         }},
        {"order", [](RunConfig& c, const std::string& v) { c.order = parse_order(v); }},
        {"task", [](RunConfig& c, const std::string& v) { c.task = parse_task(v); }},

        {"params.kappa", [](RunConfig& c, const std::string& v) { c.params.kappa = c.z2.kappa = to_real(v); }},
        {"params.omega0", [](RunConfig& c, const std::string& v) { c.params.omega0 = c.z2.omega0 = to_real(v); }},
        {"params.omegaA", [](RunConfig& c, const std::string& v) { c.params.omega_a = to_real(v); }},
        {"params.omegaB", [](RunConfig& c, const std::string& v) { c.params.omega_b = to_real(v); }},
        {"params.omega", [](RunConfig& c, const std::string& v) { c.z2.omega = to_real(v); }},
        {"params.gSqrtN", [](RunConfig& c, const std::string& v) { c.params.g_sqrt_n = c.z2.g_sqrt_n = to_real(v); }},
        {"params.nSpins", [](RunConfig& c, const std::string& v) { c.params.n_spins = c.z2.n_spins = to_integer(v); }},
        {"params.photonCutoff", [](RunConfig& c, const std::string& v) {
             c.z2.photon_cutoff = static_cast<int>(to_integer(v));
         }},
        {"z2.model", [](RunConfig& c, const std::string& v) { c.z2_model = parse_z2_model(v); }},

        {"sweep.axis", [](RunConfig& c, const std::string& v) {
             if (v == "gSqrtN") c.sweep.axis = SweepAxis::GSqrtN;
             else if (v == "nSpins") c.sweep.axis = SweepAxis::NSpins;
             else throw ConfigError("sweep.axis must be gSqrtN or nSpins, got '" + v + "'");
         }},
        {"sweep.values", [](RunConfig& c, const std::string& v) { c.sweep.values = to_list(v); }},
        {"sweep.min", [](RunConfig& c, const std::string& v) { c.sweep.min = to_real(v); }},
        {"sweep.max", [](RunConfig& c, const std::string& v) { c.sweep.max = to_real(v); }},
        {"sweep.count", [](RunConfig& c, const std::string& v) { c.sweep.count = static_cast<int>(to_integer(v)); }},
        {"sweep.spacing", [](RunConfig& c, const std::string& v) {
             if (v == "linear") c.sweep.spacing = Spacing::Linear;
             else if (v == "log") c.sweep.spacing = Spacing::Log;
             else throw ConfigError("sweep.spacing must be linear or log, got '" + v + "'");
         }},
        {"sweep.outerValues", [](RunConfig& c, const std::string& v) { c.sweep.outer_values = to_list(v); }},

        {"solver.sector", [](RunConfig& c, const std::string& v) { c.sector_k = static_cast<int>(to_integer(v)); }},
        {"solver.eigenvalueCount", [](RunConfig& c, const std::string& v) {
             c.eigenvalue_count = static_cast<int>(to_integer(v));
         }},
        {"solver.denseCap", [](RunConfig& c, const std::string& v) { c.solver.dense_cap = to_integer(v); }},
        {"solver.ncv", [](RunConfig& c, const std::string& v) { c.solver.arnoldi.ncv = static_cast<int>(to_integer(v)); }},
        {"solver.tolerance", [](RunConfig& c, const std::string& v) { c.solver.arnoldi.tol = to_real(v); }},
        {"solver.maxRestarts", [](RunConfig& c, const std::string& v) {
             c.solver.arnoldi.max_restarts = static_cast<int>(to_integer(v));
         }},
        {"solver.seed", [](RunConfig& c, const std::string& v) {
             c.solver.arnoldi.seed = static_cast<std::uint64_t>(to_integer(v));
         }},
        {"solver.residualRel", [](RunConfig& c, const std::string& v) { c.solver.residual_rel = to_real(v); }},
        {"solver.gapImMin", [](RunConfig& c, const std::string& v) { c.solver.gap_im_min = to_real(v); }},
        {"solver.gapImMax", [](RunConfig& c, const std::string& v) { c.solver.gap_im_max = to_real(v); }},
        {"solver.steadyMaxIter", [](RunConfig& c, const std::string& v) {
             c.solver.steady_max_iter = static_cast<int>(to_integer(v));
         }},

        {"ode.method", [](RunConfig& c, const std::string& v) { c.ode.method = parse_ode_method(v); }},
        {"ode.stepOrTolerance", [](RunConfig& c, const std::string& v) { c.ode.step_or_tolerance = to_real(v); }},
        {"ode.tMax", [](RunConfig& c, const std::string& v) { c.ode.t_max = to_real(v); }},
        {"ode.steadyStateCriterion", [](RunConfig& c, const std::string& v) { c.ode.steady_criterion = to_real(v); }},
        {"ode.recordEvery", [](RunConfig& c, const std::string& v) { c.ode.record_every = to_real(v); }},
        {"ode.polish", [](RunConfig& c, const std::string& v) { c.ode.polish = to_bool(v); }},

        {"positivity.nonzeroThreshold", [](RunConfig& c, const std::string& v) { c.nonzero_threshold = to_real(v); }},
        {"fit.model", [](RunConfig& c, const std::string& v) {
             if (v == "LinearInInverseN") c.fit_model = GapModel::LinearInInverseN;
             else if (v == "ExponentialInN") c.fit_model = GapModel::ExponentialInN;
             else throw ConfigError("fit.model must be LinearInInverseN or ExponentialInN, got '" + v + "'");
             c.fit_model_set = true;
         }},
        {"output.path", [](RunConfig& c, const std::string& v) { c.output_path = v; }},
        {"output.distributions", [](RunConfig& c, const std::string& v) { c.write_distributions = to_bool(v); }},
    };
    return table;
}

} // namespace

std::vector<std::string> known_config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, _] : setters()) keys.push_back(k);
    return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + ": unknown key '" + key + "'");
    try {
        it->second(cfg, value);
    } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + key + ": " + e.what());
    }
    cfg.echo.emplace_back(key, value);
}

void apply_override(RunConfig& cfg, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)), "--set");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const std::string where = "line " + std::to_string(line);
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
        apply_setting(cfg, key, value, where);
    }
    return cfg;
}

void validate_config(RunConfig& cfg) {
    if (!cfg.task) throw ConfigError("task: no task given");
    const Task task = *cfg.task;
    SweepSpec& sw = cfg.sweep;
    const bool range = sw.min || sw.max || sw.count;
    if (range) {
        if (!sw.values.empty()) throw ConfigError("sweep: give either sweep.values or sweep.min/max/count");
        if (!sw.min || !sw.max || !sw.count) throw ConfigError("sweep: range form needs sweep.min, sweep.max and sweep.count");
        if (*sw.count < 1) throw ConfigError("sweep.count must be >= 1");
        if (!(*sw.min > 0.0) || !(*sw.max >= *sw.min)) throw ConfigError("sweep: need 0 < sweep.min <= sweep.max");
        sw.values.clear();
        for (int i = 0; i < *sw.count; ++i) {
            const double t = *sw.count == 1 ? 0.0 : static_cast<double>(i) / (*sw.count - 1);
            sw.values.push_back(sw.spacing == Spacing::Linear
                                    ? *sw.min + t * (*sw.max - *sw.min)
                                    : *sw.min * std::pow(*sw.max / *sw.min, t));
        }
    }
    if (sw.axis == SweepAxis::None && (!sw.values.empty() || !sw.outer_values.empty()))
        throw ConfigError("sweep.axis: sweep values given without an axis");
    if (sw.axis != SweepAxis::None && sw.values.empty()) throw ConfigError("sweep.values: axis given without values");
    auto check_axis = [](SweepAxis a, double v, const char* field) {
        if (!std::isfinite(v)) throw ConfigError(std::string(field) + ": values must be finite");
        if (a == SweepAxis::NSpins && !(v >= 1.0)) throw ConfigError(std::string(field) + ": nSpins values must be >= 1");
        if (a == SweepAxis::GSqrtN && !(v >= 0.0)) throw ConfigError(std::string(field) + ": gSqrtN values must be >= 0");
        if (a == SweepAxis::NSpins && v != std::floor(v))
            throw ConfigError(std::string(field) + ": nSpins values must be integers");
    };
    for (double v : sw.values) check_axis(sw.axis, v, "sweep.values");
    const SweepAxis other = sw.axis == SweepAxis::GSqrtN ? SweepAxis::NSpins : SweepAxis::GSqrtN;
    for (double v : sw.outer_values) check_axis(other, v, "sweep.outerValues");

    if (cfg.model == ModelKind::Z2) {
        if (task != Task::GapScan && task != Task::Spectrum)
            throw ConfigError("task: the Z2 model supports GapScan and Spectrum only");
        if (!cfg.fit_model_set) cfg.fit_model = GapModel::ExponentialInN;
        cfg.z2.validate();
    } else {
        cfg.params.validate();
    }
    if (cfg.eigenvalue_count < 1) throw ConfigError("solver.eigenvalueCount must be >= 1");
    if (cfg.solver.arnoldi.ncv < 4) throw ConfigError("solver.ncv must be >= 4");
    if (!(cfg.solver.arnoldi.tol > 0.0)) throw ConfigError("solver.tolerance must be positive");
    if (!(cfg.ode.step_or_tolerance > 0.0) || !(cfg.ode.t_max > 0.0) || !(cfg.ode.steady_criterion > 0.0) ||
        cfg.ode.record_every < 0.0)
        throw ConfigError("ode: settings must be positive");
    if (!(cfg.nonzero_threshold > 0.0)) throw ConfigError("positivity.nonzeroThreshold must be positive");
    if (cfg.output_path.empty()) throw ConfigError("output.path must not be empty");
}

std::vector<SweepPoint> expand_sweep(const RunConfig& cfg) {
    const double g0 = cfg.model == ModelKind::Z2 ? cfg.z2.g_sqrt_n : cfg.params.g_sqrt_n;
    const long n0 = cfg.model == ModelKind::Z2 ? cfg.z2.n_spins : cfg.params.n_spins;
    std::vector<SweepPoint> out;
    const auto& sw = cfg.sweep;
    if (sw.axis == SweepAxis::None) return {{g0, n0}};
    const std::vector<double> outer = sw.outer_values.empty() ? std::vector<double>{-1.0} : sw.outer_values;
    for (double o : outer)
        for (double v : sw.values) {
            SweepPoint p{g0, n0};
            if (sw.axis == SweepAxis::GSqrtN) {
                p.g_sqrt_n = v;
                if (o >= 0.0) p.n_spins = static_cast<long>(o);
            } else {
                p.n_spins = static_cast<long>(v);
                if (o >= 0.0) p.g_sqrt_n = o;
            }
            out.push_back(p);
        }
    return out;
}

} // namespace atomonly
