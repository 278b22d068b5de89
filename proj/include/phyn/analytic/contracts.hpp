#pragma once

#include <algorithm>
#include <cmath>

#include "phyn/analytic/black_scholes.hpp"
#include "phyn/errors.hpp"

namespace phyn {

/// Index-linked note paying min{max{1.3, 0.9·S_T/S_0}, 1.8}.
inline double ftse_payoff(double ratio) { return std::min(std::max(1.3, 0.9 * ratio), 1.8); }

/// Lower strike of the call spread, 1.3/0.9 = 1.444…
inline constexpr double ftse_lower_strike = 1.3 / 0.9;

/// The same claim as cash plus a call spread: 1.3 + 0.9[(R − 1.3/0.9)⁺ − (R − 2)⁺].
inline double ftse_payoff_decomposed(double ratio) {
    return 1.3 + 0.9 * (std::max(ratio - ftse_lower_strike, 0.0) - std::max(ratio - 2.0, 0.0));
}

/// Price of the note: e^{−rT}·1.3 + 0.9[C(1.3/0.9) − C(2)] with calls on the ratio S_T/s0,
/// dividend yield rho, so the ratio forward is e^{(r−ρ)T}.
inline double ftse_contract_price(double s0, double r, double rho, double sigma, double T) {
    if (!(s0 > 0.0)) throw parameter_error("ftse_contract_price: s0 must be positive");
    if (!(T > 0.0)) throw parameter_error("ftse_contract_price: T must be positive");
    const double fwd = std::exp((r - rho) * T), disc = std::exp(-r * T), sd = sigma * std::sqrt(T);
    return disc * 1.3 +
           0.9 * (black_price(OptionKind::Call, fwd, ftse_lower_strike, disc, sd) - black_price(OptionKind::Call, fwd, 2.0, disc, sd));
}

/// Dollar forward for one unit of foreign currency: C·e^{(r−u)(T−t)}.
inline double fx_forward(double c0, double r, double u, double t, double T) {
    if (!(T >= t)) throw parameter_error("fx_forward: T must not precede t");
    return c0 * std::exp((r - u) * (T - t));
}

struct QuantoParams {
    double sigma1 = 0.2; ///< stock log-vol (foreign currency)
    double sigma2 = 0.1; ///< exchange-rate log-vol
    double rho = 0.0;    ///< correlation between the two
    double r = 0.0;      ///< domestic rate
    double u = 0.0;      ///< foreign rate

    void validate() const {
        if (!(std::abs(rho) <= 1.0)) throw parameter_error("QuantoParams: |rho| must not exceed 1");
        if (!(sigma1 >= 0.0 && sigma2 >= 0.0)) throw parameter_error("QuantoParams: volatilities must be nonnegative");
    }
};

/// F_Q = S_0·e^{uT}·e^{−σ1σ2ρT}.
inline double quanto_forward(double s0, const QuantoParams& p, double T) {
    p.validate();
    return s0 * std::exp(p.u * T) * std::exp(-p.sigma1 * p.sigma2 * p.rho * T);
}

/// Quanto option: Black-Scholes on the quanto forward with the stock volatility, domestic discounting.
inline double quanto_option_price(OptionKind kind, double s0, double k, const QuantoParams& p, double T) {
    return black_price(kind, quanto_forward(s0, p, T), k, std::exp(-p.r * T), p.sigma1 * std::sqrt(T));
}

/// Futures hedge ratio minimising Var(ΔS − hΔF).
inline double optimal_hedge_ratio(double sigma_s, double sigma_f, double rho) {
    if (!(sigma_f > 0.0)) throw degeneracy_error("optimal_hedge_ratio: futures volatility must be positive");
    return rho * sigma_s / sigma_f;
}

/// Weight in asset 1 of the minimum-variance two-asset portfolio. Works with exact
/// rational types as well as double.
template <class Real>
Real min_variance_weights(const Real& sigma1, const Real& sigma2, const Real& rho) {
    const Real den = sigma1 * sigma1 + sigma2 * sigma2 - 2 * rho * sigma1 * sigma2;
    if (!(den > 0)) throw degeneracy_error("min_variance_weights: the two assets are perfectly correlated with equal volatility");
    return (sigma2 * sigma2 - rho * sigma1 * sigma2) / den;
}

} // namespace phyn
