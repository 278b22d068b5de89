#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "phyn/errors.hpp"
#include "phyn/mathcore/rng.hpp"

namespace phyn {

struct TimeGrid {
    double t0 = 0.0;
    double t_end = 1.0;
    std::size_t n_steps = 1;

    double dt() const { return (t_end - t0) / static_cast<double>(n_steps); }
    double time(std::size_t k) const {
        return k == n_steps ? t_end : t0 + static_cast<double>(k) * dt();
    }
    void validate() const {
        if (n_steps < 1) throw parameter_error("TimeGrid: n_steps must be at least 1");
        if (!(t_end > t0) || !std::isfinite(t_end) || !std::isfinite(t0))
            throw parameter_error("TimeGrid: t_end must exceed t0");
    }
};

/// One simulated path. `brownian` is always the real-world Brownian motion W;
/// `rn_weight` is the Radon-Nikodym weight ζ accumulated along the path.
struct SamplePath {
    TimeGrid grid;
    std::vector<double> brownian;
    std::vector<double> state;
    std::vector<double> rn_weight;
};

struct GbmParams {
    double s0 = 1.0;
    double sigma = 0.0;
    double mu = 0.0; ///< log-drift: S_t = s0·exp(σW_t + μt)

    void validate() const {
        if (!(s0 > 0.0)) throw parameter_error("GbmParams: s0 must be positive");
        if (!(sigma >= 0.0)) throw parameter_error("GbmParams: sigma must be nonnegative");
    }
};

struct OuParams {
    double r0 = 0.0;
    double rho = 0.0;
    double nu = 0.0;
    double alpha = 1.0;
};

struct CirParams {
    double r0 = 0.0;
    double rho = 0.0;
    double nu = 0.0;
    double alpha = 1.0;

    bool feller_satisfied() const { return 2.0 * nu >= rho * rho; }
};

enum class Measure { P, Q };

/// Cameron-Martin-Girsanov shift: W̃ = W + ∫γ dt. `gamma` holds one value per step
/// (a single value is applied to all steps). Draws are taken under `sample_under`.
struct DriftShift {
    std::vector<double> gamma;
    Measure sample_under = Measure::Q;

    double at(std::size_t k) const { return gamma.size() == 1 ? gamma[0] : gamma.at(k); }
};

/// γ that turns S = s0·exp(σW + μt) into a discounted martingale at rate r.
inline double risk_neutral_shift(const GbmParams& p, double r) {
    if (!(p.sigma > 0.0)) throw domain_error("risk_neutral_shift: sigma must be positive");
    return (p.mu - r + 0.5 * p.sigma * p.sigma) / p.sigma;
}

inline SamplePath make_path(const TimeGrid& grid) {
    grid.validate();
    SamplePath p{grid, {}, {}, {}};
    p.brownian.assign(grid.n_steps + 1, 0.0);
    p.state.assign(grid.n_steps + 1, 0.0);
    p.rn_weight.assign(grid.n_steps + 1, 1.0);
    return p;
}

inline SamplePath simulate_brownian(const TimeGrid& grid, Rng& rng) {
    SamplePath p = make_path(grid);
    const double sq = std::sqrt(grid.dt());
    for (std::size_t k = 0; k < grid.n_steps; ++k) p.brownian[k + 1] = p.brownian[k] + sq * rng.normal();
    p.state = p.brownian;
    return p;
}

inline SamplePath simulate_brownian(const TimeGrid& grid, RngSeed seed, std::size_t path_index = 0) {
    Rng rng = Rng::stream(seed, path_index);
    return simulate_brownian(grid, rng);
}

/// Exact GBM path. With a shift, increments are drawn under the requested measure and
/// ζ_t = exp(−Σγ ΔW − ½Σγ²δt) accumulates with the left-point rule.
inline SamplePath simulate_gbm(const GbmParams& params, const TimeGrid& grid, Rng& rng,
                               const DriftShift* shift = nullptr) {
    params.validate();
    SamplePath p = make_path(grid);
    const double dt = grid.dt(), sq = std::sqrt(dt);
    p.state[0] = params.s0;
    double log_zeta = 0.0;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        double dw = sq * rng.normal();
        if (shift) {
            const double g = shift->at(k);
            if (shift->sample_under == Measure::Q) dw -= g * dt;
            log_zeta += -g * dw - 0.5 * g * g * dt;
            p.rn_weight[k + 1] = std::exp(log_zeta);
        }
        p.brownian[k + 1] = p.brownian[k] + dw;
        p.state[k + 1] = params.s0 * std::exp(params.sigma * p.brownian[k + 1] + params.mu * (grid.time(k + 1) - grid.t0));
    }
    return p;
}

inline SamplePath simulate_gbm(const GbmParams& params, const TimeGrid& grid, RngSeed seed,
                               const DriftShift* shift = nullptr, std::size_t path_index = 0) {
    Rng rng = Rng::stream(seed, path_index);
    return simulate_gbm(params, grid, rng, shift);
}

struct OuStep {
    double decay;    ///< e^{−αδ}
    double mean_gap; ///< (ν/α)(1 − e^{−αδ})
    double sd;       ///< conditional standard deviation
};

/// Conditional Gaussian transition of dr = ρdW + (ν − αr)dt over δ; α = 0 is the Brownian limit.
inline OuStep ou_step(const OuParams& p, double delta) {
    if (std::abs(p.alpha * delta) < 1e-12)
        return {1.0, p.nu * delta, p.rho * std::sqrt(delta)};
    const double e = std::exp(-p.alpha * delta);
    const double var = p.rho * p.rho * (-std::expm1(-2.0 * p.alpha * delta)) / (2.0 * p.alpha);
    return {e, p.nu / p.alpha * (-std::expm1(-p.alpha * delta)), std::sqrt(var)};
}

struct GaussianMoments {
    double mean;
    double variance;
};

inline GaussianMoments ou_moments(const OuParams& p, double t) {
    if (!(p.alpha > 0.0)) throw parameter_error("ou_moments: alpha must be positive");
    if (!(t >= 0.0)) throw domain_error("ou_moments: t must be nonnegative");
    const double e = std::exp(-p.alpha * t);
    return {e * p.r0 + p.nu / p.alpha * (1.0 - e),
            p.rho * p.rho * (-std::expm1(-2.0 * p.alpha * t)) / (2.0 * p.alpha)};
}

/// Exact-transition OU path. `brownian` holds the cumulated scaled draws √δt·ε.
inline SamplePath simulate_ou(const OuParams& params, const TimeGrid& grid, Rng& rng) {
    if (!(params.rho >= 0.0)) throw parameter_error("simulate_ou: rho must be nonnegative");
    SamplePath p = make_path(grid);
    const OuStep st = ou_step(params, grid.dt());
    const double sq = std::sqrt(grid.dt());
    p.state[0] = params.r0;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double z = rng.normal();
        p.brownian[k + 1] = p.brownian[k] + sq * z;
        p.state[k + 1] = p.state[k] * st.decay + st.mean_gap + st.sd * z;
    }
    return p;
}

inline SamplePath simulate_ou(const OuParams& params, const TimeGrid& grid, RngSeed seed, std::size_t path_index = 0) {
    Rng rng = Rng::stream(seed, path_index);
    return simulate_ou(params, grid, rng);
}

/// Full-truncation Euler for dr = √r ρ dW + (ν − αr)dt. The reported state is max(x, 0)
/// of the internal Euler variable x.
inline SamplePath simulate_cir(const CirParams& params, const TimeGrid& grid, Rng& rng) {
    if (!(params.r0 >= 0.0)) throw parameter_error("simulate_cir: r0 must be nonnegative");
    if (!(params.rho >= 0.0)) throw parameter_error("simulate_cir: rho must be nonnegative");
    SamplePath p = make_path(grid);
    const double dt = grid.dt(), sq = std::sqrt(dt);
    double x = params.r0;
    p.state[0] = x;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double dw = sq * rng.normal();
        const double xp = std::max(x, 0.0);
        x += (params.nu - params.alpha * xp) * dt + params.rho * std::sqrt(xp) * dw;
        p.brownian[k + 1] = p.brownian[k] + dw;
        p.state[k + 1] = std::max(x, 0.0);
    }
    return p;
}

inline SamplePath simulate_cir(const CirParams& params, const TimeGrid& grid, RngSeed seed, std::size_t path_index = 0) {
    Rng rng = Rng::stream(seed, path_index);
    return simulate_cir(params, grid, rng);
}

} // namespace phyn
