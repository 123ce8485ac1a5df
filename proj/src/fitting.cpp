#include "atomonly/fitting.hpp"
#include "atomonly/errors.hpp"

#include <algorithm>
#include <cmath>

namespace atomonly {

const char* to_string(GapModel m) {
    return m == GapModel::LinearInInverseN ? "LinearInInverseN" : "ExponentialInN";
}

namespace {

struct Line {
    double intercept, slope, se_intercept, se_slope, r2;
};

// y = intercept + slope * x
Line ols(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw InsufficientDataError("fit needs at least two distinct abscissae");
    Line l{};
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - l.intercept - l.slope * x[i];
        sse += r * r;
    }
    const double s2 = x.size() > 2 ? sse / (n - 2.0) : 0.0;
    l.se_slope = std::sqrt(s2 / sxx);
    double sx2 = 0;
    for (double xi : x) sx2 += xi * xi;
    l.se_intercept = std::sqrt(s2 * sx2 / (n * sxx));
    l.r2 = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    return l;
}

} // namespace

GapFit fit_gap_scaling(const std::vector<std::pair<double, double>>& points, GapModel model) {
    if (points.size() < 3)
        throw InsufficientDataError("gap fit needs >= 3 points, got " + std::to_string(points.size()));
    std::vector<double> x, y;
    x.reserve(points.size());
    y.reserve(points.size());
    GapFit fit;
    fit.model = model;
    fit.points = static_cast<int>(points.size());
    if (model == GapModel::LinearInInverseN) {
        for (const auto& [n, g] : points) {
            if (!(n > 0.0)) throw ConfigError("gap fit: N must be positive");
            x.push_back(1.0 / n);
            y.push_back(g);
        }
        const Line l = ols(x, y);
        fit.a = l.intercept;
        fit.b = l.slope;
        fit.a_stderr = l.se_intercept;
        fit.b_stderr = l.se_slope;
        fit.r_squared = l.r2;
        return fit;
    }
    const double sign = points.front().second >= 0.0 ? 1.0 : -1.0;
    for (const auto& [n, g] : points) {
        if (g == 0.0 || (g > 0.0) != (sign > 0.0))
            throw ConfigError("exponential gap fit needs nonzero gaps of one sign");
        x.push_back(n);
        y.push_back(std::log(std::abs(g)));
    }
    const Line l = ols(x, y);
    fit.a = sign * std::exp(l.intercept);
    fit.b = -l.slope;
    fit.a_stderr = std::abs(fit.a) * l.se_intercept;  // delta method
    fit.b_stderr = l.se_slope;
    fit.r_squared = l.r2;
    return fit;
}

} // namespace atomonly
