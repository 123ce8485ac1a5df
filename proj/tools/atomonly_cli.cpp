// atomonly_cli.cpp - command-line front end: one subcommand per task
#include "atomonly/errors.hpp"
#include "atomonly/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace atomonly;

namespace {

struct Args {
    std::string config;
    std::string out;
    int workers{0};
    std::vector<std::string> sets;
};

RunConfig load(const Args& a, const std::string& sub) {
    RunConfig cfg;
    if (!a.config.empty()) {
        std::ifstream f(a.config);
        if (!f) throw ConfigError("cannot read config file " + a.config);
        std::stringstream ss;
        ss << f.rdbuf();
        cfg = parse_config(ss.str());
    }
    for (const auto& s : a.sets) apply_override(cfg, s);
    if (!a.out.empty()) cfg.output_path = a.out;

    if (sub == "z2") {
        if (cfg.model == ModelKind::U1 && !a.config.empty()) {
            for (const auto& [k, v] : cfg.echo)
                if (k == "model") throw ConfigError("model: config says U1 but the z2 subcommand was used");
        }
        cfg.model = ModelKind::Z2;
        if (!cfg.task) cfg.task = Task::GapScan;
    } else {
        static const std::map<std::string, Task> tasks = {
            {"steady-state", Task::SteadyState}, {"spectrum", Task::Spectrum}, {"gap-scan", Task::GapScan},
            {"cumulant", Task::Cumulant},        {"mean-field", Task::MeanField}, {"positivity", Task::Positivity}};
        const Task t = tasks.at(sub);
        if (cfg.task && *cfg.task != t)
            throw ConfigError(std::string("task: config says ") + to_string(*cfg.task) + " but the " + sub +
                              " subcommand was used");
        cfg.task = t;
    }
    validate_config(cfg);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"atom-only cavity QED master equations: steady states, spectra, gaps, cumulant equations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Args args;
    const std::vector<std::pair<std::string, std::string>> subs = {
        {"steady-state", "steady-state distribution of the populations sector over a sweep"},
        {"spectrum", "low-lying eigenvalues of one charge sector"},
        {"gap-scan", "Liouvillian gap of one sector over a sweep, with gap-vs-N fits"},
        {"cumulant", "fixed points and linearized rates of the cumulant equations"},
        {"mean-field", "mean-field fixed point and relaxation rate"},
        {"positivity", "Kossakowski matrix analysis (dense, N <= 63)"},
        {"z2", "single-mode Dicke reference model, full or atom-only"},
    };
    for (const auto& [name, help] : subs) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--config", args.config, "key = value configuration file");
        s->add_option("--out", args.out, "output directory (overrides output.path)");
        s->add_option("--workers", args.workers, "parallel sweep points, default all cores")->check(CLI::NonNegativeNumber);
        s->add_option("--set", args.sets, "override one key, e.g. --set params.gSqrtN=0.6")->allow_extra_args(false);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    std::string sub;
    for (const auto* s : app.get_subcommands()) sub = s->get_name();

    try {
        const RunConfig cfg = load(args, sub);
        const RunOutcome out = run(cfg, args.workers);
        std::cerr << out.result.ok_points << " ok, " << out.result.failed_points << " failed -> " << out.csv_path
                  << "\n";
        return out.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
