#pragma once

#include <cmath>
#include <sstream>

#include "phyn/analytic/black_scholes.hpp"
#include "phyn/errors.hpp"
#include "phyn/mathcore/quadrature.hpp"
#include "phyn/rates/curve.hpp"
#include "phyn/rates/short_rate.hpp"

namespace phyn {

namespace detail {
inline void check_option_times(double t, double tau, double T) {
    std::ostringstream os;
    if (tau > T) os << "bond option: exercise date τ = " << tau << " is after bond maturity T = " << T;
    else if (t > tau) os << "bond option: valuation time t = " << t << " is after exercise date τ = " << tau;
    if (!os.str().empty()) throw domain_error(os.str());
}
inline void check_call_put(OptionKind kind) {
    if (kind == OptionKind::Binary) throw unsupported_error("bond options are calls or puts");
}
} // namespace detail

/// P(t,τ)·Black(F = P(t,T)/P(t,τ), k, √v): the option on a log-normal forward bond price.
inline double lognormal_bond_option(OptionKind kind, double p_tau, double p_T, double k, double v) {
    detail::check_call_put(kind);
    if (!(v >= 0.0)) throw domain_error("bond option: log-variance must be nonnegative");
    return black_price(kind, p_T / p_tau, k, p_tau, std::sqrt(v));
}

/// Ho-Lee: term volatility ρ(T−τ), v = (T−τ)²∫_t^τ ρ².
inline double ho_lee_option_variance(const TimeFn& rho, double t, double tau, double T) {
    detail::check_option_times(t, tau, T);
    const double w = (T - tau) * (T - tau);
    if (rho.constant()) return rho(0) * rho(0) * w * (tau - t);
    if (tau == t) return 0.0;
    return w * integrate([&](double s) { return rho(s) * rho(s); }, t, tau);
}

/// Vasicek: v = ∫_t^τ ρ²(s)[η(s,T) − η(s,τ)]² ds.
inline double vasicek_option_variance(const Vasicek& m, double t, double tau, double T) {
    detail::check_option_times(t, tau, T);
    if (tau == t) return 0.0;
    return integrate([&](double s) {
        const double d = vasicek_eta(m.alpha, s, T) - vasicek_eta(m.alpha, s, tau);
        return std::pow(m.rho(s) * d, 2);
    }, t, tau, 1e-13);
}

/// Constant ρ, α: v = (ρ²/2α³)[1 − e^{−α(T−τ)}]²[1 − e^{−2α(τ−t)}].
inline double vasicek_option_variance_closed(double rho, double alpha, double t, double tau, double T) {
    detail::check_option_times(t, tau, T);
    if (alpha == 0.0) return rho * rho * (T - tau) * (T - tau) * (tau - t);
    const double a = std::expm1(-alpha * (T - tau)), b = std::expm1(-2 * alpha * (tau - t));
    return rho * rho / (2 * alpha * alpha * alpha) * a * a * -b;
}

inline double bond_option_variance(const ShortRateModel& model, double t, double tau, double T) {
    if (auto* h = std::get_if<HoLee>(&model)) return ho_lee_option_variance(h->rho, t, tau, T);
    if (auto* v = std::get_if<Vasicek>(&model)) {
        if (v->rho.constant() && v->alpha.constant())
            return vasicek_option_variance_closed(v->rho(0), v->alpha(0), t, tau, T);
        return vasicek_option_variance(*v, t, tau, T);
    }
    throw unsupported_error("bond_option: closed form only for Ho-Lee and Vasicek (" + model_name(model) + " given)");
}

/// Option at t, exercised at τ, on the T-bond, with r_t = x.
inline double bond_option(const ShortRateModel& model, OptionKind kind, double x, double t, double tau, double T,
                          double k) {
    detail::check_option_times(t, tau, T);
    const double v = bond_option_variance(model, t, tau, T);
    return lognormal_bond_option(kind, short_rate_bond_price(model, x, t, tau), short_rate_bond_price(model, x, t, T), k, v);
}

/// Option at time 0 with the model's ν fitted to `curve` (only P(0,τ), P(0,T) and v enter).
inline double bond_option(const DiscountCurve& curve, const ShortRateModel& model, OptionKind kind, double tau,
                          double T, double k) {
    detail::check_option_times(0.0, tau, T);
    const double v = bond_option_variance(model, 0.0, tau, T);
    return lognormal_bond_option(kind, curve.discount(tau), curve.discount(T), k, v);
}

} // namespace phyn
