#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "phyn/errors.hpp"

namespace phyn {

inline double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Standard normal CDF, Φ(x) = ½ erfc(−x/√2).
inline double norm_cdf(double x) {
    if (!std::isfinite(x))
        throw domain_error("norm_cdf: argument must be finite, got " + std::to_string(x));
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Upper tail Φ̃(x) = 1 − Φ(x), accurate for large x.
inline double norm_sf(double x) {
    if (!std::isfinite(x))
        throw domain_error("norm_sf: argument must be finite, got " + std::to_string(x));
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// E[e^X] for X ~ N(0, v).
inline double lognormal_mean(double v) {
    if (!(v >= 0.0))
        throw domain_error("lognormal_mean: variance must be nonnegative, got " + std::to_string(v));
    return std::exp(0.5 * v);
}

} // namespace phyn
