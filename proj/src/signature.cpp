#include "texfrac/signature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace texfrac {

FitResult ols_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("ols_slope: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("ols_slope: need at least 2 points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_slope: degenerate fit, all x equal");

    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.n_points = static_cast<int>(n);
    return fit;
}

double fractal_dimension(const LogLogCurve& curve, std::optional<double> r_min,
                         std::optional<double> r_max) {
    if (!r_min && !r_max) return ols_slope(curve.lr, curve.lv).slope;

    const double lo = r_min ? std::log(*r_min) : -std::numeric_limits<double>::infinity();
    const double hi = r_max ? std::log(*r_max) : std::numeric_limits<double>::infinity();
    std::vector<double> x, y;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (curve.lr[i] >= lo && curve.lr[i] <= hi) {
            x.push_back(curve.lr[i]);
            y.push_back(curve.lv[i]);
        }
    }
    return ols_slope(x, y).slope;
}

Signature make_signature(const LogLogCurve& curve, int m) {
    if (m < 2) throw std::invalid_argument("make_signature: m must be >= 2");
    const std::size_t p = curve.size();
    if (static_cast<std::size_t>(m) > p)
        throw std::invalid_argument("make_signature: m exceeds curve length");

    Signature sig;
    sig.m = m;
    const std::size_t k = p / static_cast<std::size_t>(m);
    sig.alphas.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t off = j * static_cast<std::size_t>(m);
        sig.alphas.push_back(ols_slope({curve.lr.data() + off, static_cast<std::size_t>(m)},
                                       {curve.lv.data() + off, static_cast<std::size_t>(m)})
                                 .slope);
    }
    return sig;
}

}  // namespace texfrac
