#pragma once

#include <optional>
#include <span>
#include <vector>

#include "texfrac/volume_curve.hpp"

namespace texfrac {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    int n_points = 0;
};

/// Piecewise-slope texture signature: OLS slopes of consecutive disjoint
/// m-point sections of the log-log curve. k == floor(P / m); the trailing
/// P mod m points are discarded.
struct Signature {
    int m = 0;
    std::vector<double> alphas;

    std::size_t k() const { return alphas.size(); }
};

/// Ordinary least squares over (x, y) pairs. Throws std::invalid_argument
/// on fewer than 2 points or when all x coincide.
FitResult ols_slope(std::span<const double> x, std::span<const double> y);

/// Fractal dimension: OLS slope over the whole curve, optionally restricted
/// to radii in [r_min, r_max] (bounds in radius units, not logs).
double fractal_dimension(const LogLogCurve& curve,
                         std::optional<double> r_min = std::nullopt,
                         std::optional<double> r_max = std::nullopt);

Signature make_signature(const LogLogCurve& curve, int m);

}  // namespace texfrac
