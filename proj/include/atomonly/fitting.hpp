// fitting.hpp - unweighted least-squares fits of gap scaling

#pragma once

#include <utility>
#include <vector>

namespace atomonly {

enum class GapModel { LinearInInverseN, ExponentialInN };
const char* to_string(GapModel m);

struct GapFit {
    GapModel model{GapModel::LinearInInverseN};
    // LinearInInverseN: gap = a + b / N.  ExponentialInN: gap = a * exp(-b N), so a = lambda0, b = C.
    double a{0.0}, b{0.0};
    double a_stderr{0.0}, b_stderr{0.0};
    double r_squared{0.0};
    int points{0};
};

// points are (N, gapReal); throws InsufficientDataError / ConfigError
GapFit fit_gap_scaling(const std::vector<std::pair<double, double>>& points, GapModel model);

} // namespace atomonly
