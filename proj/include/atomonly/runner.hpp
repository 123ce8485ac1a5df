// runner.hpp - sweep orchestration and result files
//
// Each run writes <out>/<task>.csv (fixed columns, %.17g, status last) and a JSON sidecar
// <out>/<task>.json with the config echo, versions, timings and per-point solver summaries.
// CSV bodies depend on the config only; anything time-dependent goes to the sidecar.

#pragma once

#include "atomonly/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace atomonly {

inline constexpr const char* kVersion = "0.1.0";

nlohmann::json to_json(const KossakowskiReport& r);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string format_real(double x);  // %.17g
std::string to_csv(const Table& t);

struct RunResult {
    Table table;
    nlohmann::json points = nlohmann::json::array();  // per-point summaries, sweep order
    nlohmann::json fits = nlohmann::json::array();
    nlohmann::json reports = nlohmann::json::array();  // Positivity only
    // extra files relative to the output directory (trajectories, distributions)
    std::vector<std::pair<std::string, Table>> extra_tables;
    int ok_points{0};
    int failed_points{0};
};

// computes every sweep point; workers <= 0 means all available cores
RunResult execute(const RunConfig& cfg, int workers);

struct RunOutcome {
    int exit_code{0};  // 0 success, 2 every point failed
    std::string csv_path;
    std::string sidecar_path;
    RunResult result;
};

// validated config in, files out
RunOutcome run(const RunConfig& cfg, int workers);

std::string task_slug(Task t);

} // namespace atomonly
