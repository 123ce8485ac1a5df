// config.hpp - flat key = value run configuration
//
//   # comment
//   task = GapScan
//   params.gSqrtN = 0.6
//   sweep.axis = nSpins
//   sweep.values = 50000, 80000, 110000
//
// Unknown keys, duplicates and malformed values are errors carrying the line number.

#pragma once

#include "atomonly/fitting.hpp"
#include "atomonly/model.hpp"
#include "atomonly/positivity.hpp"
#include "atomonly/sector.hpp"
#include "atomonly/semiclassical.hpp"
#include "atomonly/spectral.hpp"
#include "atomonly/z2.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace atomonly {

enum class ModelKind { U1, Z2 };
enum class Task { SteadyState, Spectrum, GapScan, Cumulant, MeanField, Positivity };
enum class SweepAxis { None, GSqrtN, NSpins };
enum class Spacing { Linear, Log };

const char* to_string(ModelKind m);
const char* to_string(Task t);
const char* to_string(SweepAxis a);
const char* to_string(Spacing s);
Task parse_task(const std::string& s);

struct SweepSpec {
    SweepAxis axis{SweepAxis::None};
    std::vector<double> values;  // explicit list, or filled from the range form
    std::optional<double> min, max;
    std::optional<int> count;
    Spacing spacing{Spacing::Linear};
    std::vector<double> outer_values;  // optional grid over the other axis
};

struct RunConfig {
    ModelKind model{ModelKind::U1};
    TheoryOrder order{TheoryOrder::Fourth};
    std::optional<Task> task;
    ModelParams params{};
    Z2Params z2{};
    Z2Model z2_model{Z2Model::AtomOnly};
    SweepSpec sweep{};
    SolverSettings solver{};
    int sector_k{0};
    int eigenvalue_count{10};
    OdeSettings ode{};
    double nonzero_threshold{1e-8};
    GapModel fit_model{GapModel::LinearInInverseN};
    bool fit_model_set{false};
    bool write_distributions{false};
    std::string output_path{"out"};
    // every key = value pair as given, in order, for the provenance sidecar
    std::vector<std::pair<std::string, std::string>> echo;
};

// throws ConfigError; the message names the line (or "--set") and the key
RunConfig parse_config(const std::string& text);
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where);
void apply_override(RunConfig& cfg, const std::string& key_eq_value);  // "key=value"
// fills sweep.values from the range form and checks cross-field invariants
void validate_config(RunConfig& cfg);

std::vector<std::string> known_config_keys();

// one sweep point: the two axis values (g sqrt N, N)
struct SweepPoint {
    double g_sqrt_n{0.0};
    long n_spins{0};
};
std::vector<SweepPoint> expand_sweep(const RunConfig& cfg);

} // namespace atomonly
