#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "phyn/errors.hpp"
#include "phyn/mathcore/quadrature.hpp"

namespace phyn {

struct PdeGrid {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n_x = 3; ///< spatial points, boundaries included
    std::size_t n_t = 1; ///< time steps

    double dx() const { return (x_max - x_min) / static_cast<double>(n_x - 1); }
    double x(std::size_t j) const { return j + 1 == n_x ? x_max : x_min + static_cast<double>(j) * dx(); }
    void validate() const {
        if (!(x_min < x_max)) throw parameter_error("PdeGrid: spatial grid must be increasing (x_min < x_max)");
        if (n_x < 3) throw parameter_error("PdeGrid: need at least 3 spatial points");
        if (n_t < 1) throw parameter_error("PdeGrid: need at least 1 time step");
    }
};

/// Terminal-value problem ½D(y,t)∂²Y/∂y² + ∂Y/∂t = 0 on [t0, T] with Y(y,T) = payoff(y).
/// `growth(t)` = exp(∫_t^T r) maps prices to the transformed variable, y = growth·z, and
/// V(z,t) = Y(growth·z, t)/growth. Boundaries default to the payoff at the grid edges.
struct DiffusionProblem {
    std::function<double(double, double)> diffusion;
    std::function<double(double)> payoff;
    std::function<double(double)> growth = [](double) { return 1.0; };
    double t0 = 0.0;
    double T = 1.0;
    std::function<double(double)> lower_boundary; ///< Y(x_min, t), optional
    std::function<double(double)> upper_boundary; ///< Y(x_max, t), optional
};

/// Black-Scholes problem in the transformed variable y = e^{∫_t^T r}z:
/// D(y,t) = y²σ²(e^{−∫_t^T r}y, t).
inline DiffusionProblem transform_bs_to_diffusion(std::function<double(double, double)> sigma,
                                                  std::function<double(double)> rate,
                                                  std::function<double(double)> payoff, double t0, double T) {
    if (!(T > t0)) throw parameter_error("transform_bs_to_diffusion: T must exceed t0");
    DiffusionProblem p;
    p.t0 = t0;
    p.T = T;
    p.payoff = std::move(payoff);
    p.growth = [rate, T](double t) { return t >= T ? 1.0 : std::exp(integrate(rate, t, T, 1e-12)); };
    auto growth = p.growth;
    p.diffusion = [sigma = std::move(sigma), growth](double y, double t) {
        const double s = sigma(y / growth(t), t);
        return y * y * s * s;
    };
    return p;
}

/// Constant σ and r.
inline DiffusionProblem transform_bs_to_diffusion(double sigma, double r, std::function<double(double)> payoff,
                                                  double t0, double T) {
    auto p = transform_bs_to_diffusion([sigma](double, double) { return sigma; }, [r](double) { return r; },
                                       std::move(payoff), t0, T);
    p.growth = [r, T](double t) { return std::exp(r * (T - t)); };
    const double s2 = sigma * sigma;
    p.diffusion = [s2](double y, double) { return y * y * s2; };
    return p;
}

/// Largest stable explicit step for u_t = D u_xx: (Δx)²/(2D).
inline double ftcs_stability_limit(double d_max, double dx) {
    if (!(d_max > 0.0) || !(dx > 0.0)) throw domain_error("ftcs_stability_limit: D_max and dx must be positive");
    return dx * dx / (2.0 * d_max);
}

} // namespace phyn
