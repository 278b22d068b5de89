#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "phyn/analytic/black_scholes.hpp"
#include "phyn/errors.hpp"
#include "phyn/mathcore/roots.hpp"
#include "phyn/rates/bond_option.hpp"
#include "phyn/rates/curve.hpp"
#include "phyn/rates/short_rate.hpp"

namespace phyn {

/// Payment dates T_i = T0 + iδ, i = 1..n.
struct Schedule {
    double T0 = 0.0;
    double delta = 0.5;
    std::size_t n = 1;

    double payment(std::size_t i) const { return T0 + static_cast<double>(i) * delta; }
    double last() const { return payment(n); }
    void validate() const {
        if (!(delta > 0.0)) throw parameter_error("Schedule: period δ must be positive");
        if (n < 1) throw parameter_error("Schedule: need at least one payment");
        if (!(T0 >= 0.0)) throw parameter_error("Schedule: start T0 must be nonnegative");
    }
};

namespace detail {
inline void check_schedule(const DiscountCurve& c, const Schedule& s, double T) {
    s.validate();
    std::ostringstream os;
    if (T < s.last() - 1e-12) os << "maturity T = " << T << " precedes the last payment T_n = " << s.last();
    else if (T > c.horizon() * (1 + 1e-12) || s.last() > c.horizon() * (1 + 1e-12))
        os << "schedule reaches " << std::max(T, s.last()) << " beyond curve domain " << c.horizon();
    if (!os.str().empty()) throw domain_error(os.str());
}
/// δ Σ P(t, T_i)
inline double annuity(const DiscountCurve& c, const Schedule& s, double t) {
    double a = 0.0;
    for (std::size_t i = 1; i <= s.n; ++i) a += c.discount(t, s.payment(i));
    return s.delta * a;
}
} // namespace detail

/// P_c(T0,T) = P(T0,T) + kδ Σ P(T0,T_i), valued at T0 from the curve's forward discounts.
inline double coupon_bond_price(const DiscountCurve& c, const Schedule& s, double k, double T) {
    detail::check_schedule(c, s, T);
    return c.discount(s.T0, T) + k * detail::annuity(c, s, s.T0);
}

/// Coupon rate giving P_c(T0,T) = 1.
inline double par_coupon_rate(const DiscountCurve& c, const Schedule& s, double T) {
    detail::check_schedule(c, s, T);
    return (1.0 - c.discount(s.T0, T)) / detail::annuity(c, s, s.T0);
}

/// Value at T0 of the i-th LIBOR coupon δL(T_{i−1}) paid at T_i: P(T0,T_{i−1}) − P(T0,T_i).
inline double floating_coupon_value(const DiscountCurve& c, const Schedule& s, std::size_t i) {
    if (i < 1 || i > s.n) throw domain_error("floating_coupon_value: coupon index out of range");
    detail::check_schedule(c, s, s.last());
    return c.discount(s.T0, s.payment(i - 1)) - c.discount(s.T0, s.payment(i));
}

/// Floating-rate bond at T0: 1 + P(T0,T) − P(T0,T_n).
inline double floating_bond_value(const DiscountCurve& c, const Schedule& s, double T) {
    detail::check_schedule(c, s, T);
    return 1.0 + c.discount(s.T0, T) - c.discount(s.T0, s.last());
}

/// Fixed rate giving a zero-value swap at T0.
inline double swap_rate(const DiscountCurve& c, const Schedule& s) {
    detail::check_schedule(c, s, s.last());
    return (1.0 - c.discount(s.T0, s.last())) / detail::annuity(c, s, s.T0);
}

/// Forward swap rate at t ≤ T0: (P(t,T0) − P(t,T_n))/(δ Σ P(t,T_i)).
inline double forward_swap_rate(const DiscountCurve& c, double t, const Schedule& s) {
    detail::check_schedule(c, s, s.last());
    if (t > s.T0) throw domain_error("forward_swap_rate: t must not exceed T0");
    return (c.discount(t, s.T0) - c.discount(t, s.last())) / detail::annuity(c, s, t);
}

/// Receive-fixed swap at t ≤ T0: P(t,T_n) + kδ Σ P(t,T_i) − P(t,T0).
inline double swap_value(const DiscountCurve& c, double t, const Schedule& s, double k) {
    detail::check_schedule(c, s, s.last());
    if (t > s.T0) throw domain_error("swap_value: t must not exceed T0");
    return c.discount(t, s.last()) + k * detail::annuity(c, s, t) - c.discount(t, s.T0);
}

/// Floorlet minus caplet on [T_{i−1}, T_i]: (1 + δk)P(t,T_i) − P(t,T_{i−1}).
inline double floor_cap_parity(const DiscountCurve& c, double t, double t_prev, double t_i, double k) {
    if (!(t_i > t_prev)) throw domain_error("caplet: T_i must exceed T_{i-1}");
    const double delta = t_i - t_prev;
    return (1 + delta * k) * c.discount(t, t_i) - c.discount(t, t_prev);
}

/// Caplet (Call) or floorlet (Put) as (1 + δk) bond options on the T_i-bond struck at 1/(1 + δk),
/// exercised at T_{i−1}: a caplet is puts, a floorlet calls. Valued at 0 with the model fitted to the curve.
inline double caplet_bond_route(const DiscountCurve& c, const ShortRateModel& model, double t_prev, double t_i, double k,
                                OptionKind kind = OptionKind::Call) {
    if (!(t_i > t_prev)) throw domain_error("caplet: T_i must exceed T_{i-1}");
    detail::check_call_put(kind);
    const double delta = t_i - t_prev, K = 1.0 / (1.0 + delta * k);
    const OptionKind bond_kind = kind == OptionKind::Call ? OptionKind::Put : OptionKind::Call;
    return (1.0 + delta * k) * bond_option(c, model, bond_kind, t_prev, t_i, K);
}

/// Piecewise-constant γ^j(s, T) for one LIBOR fixing T: values[j][m] on [times[m], times[m+1]).
struct BgmVolatility {
    std::vector<double> times;
    std::vector<std::vector<double>> values;

    /// ζ(t,T) = Σ_j ∫_t^T γ^j(s,T)² ds by exact segment sums.
    double zeta(double t, double T) const {
        if (times.size() < 2) throw parameter_error("BGM volatility: need at least one segment");
        if (t < times.front() - 1e-12 || T > times.back() + 1e-12) {
            std::ostringstream os;
            os << "BGM volatility grid [" << times.front() << ", " << times.back() << "] does not cover [" << t << ", " << T << "]";
            throw domain_error(os.str());
        }
        double z = 0.0;
        for (const auto& g : values) {
            if (g.size() + 1 != times.size()) throw parameter_error("BGM volatility: one value per segment per factor");
            for (std::size_t m = 0; m + 1 < times.size(); ++m) {
                const double lo = std::max(t, times[m]), hi = std::min(T, times[m + 1]);
                if (hi > lo) z += g[m] * g[m] * (hi - lo);
            }
        }
        return z;
    }
};

/// BGM caplet (Call) or floorlet (Put): δP(t,T_i)·Black(L(t,T_{i−1}), k, √ζ(t,T_{i−1})).
inline double caplet_bgm(const DiscountCurve& c, double t, double t_prev, double t_i, double k,
                         const std::optional<BgmVolatility>& gamma, OptionKind kind = OptionKind::Call) {
    if (!gamma) throw parameter_error("caplet_bgm: BGM route needs γ volatility data");
    if (!(t_i > t_prev)) throw domain_error("caplet: T_i must exceed T_{i-1}");
    if (t > t_prev) throw domain_error("caplet: valuation time after the fixing date");
    detail::check_call_put(kind);
    const double delta = t_i - t_prev;
    const double libor = (c.discount(t, t_prev) / c.discount(t, t_i) - 1.0) / delta;
    if (!(libor > 0.0)) throw domain_error("caplet_bgm: forward LIBOR must be positive for the log-normal model");
    return delta * black_price(kind, libor, k, c.discount(t, t_i), std::sqrt(gamma->zeta(t, t_prev)));
}

/// Cash flows of a coupon bond remaining after τ: κδ at each T_i > τ, plus 1 at T.
struct CashFlows {
    std::vector<double> times;
    std::vector<double> amounts;
};

inline CashFlows coupon_cash_flows(const Schedule& s, double kappa, double T, double after) {
    s.validate();
    CashFlows cf;
    for (std::size_t i = 1; i <= s.n; ++i)
        if (s.payment(i) > after + 1e-12) {
            cf.times.push_back(s.payment(i));
            cf.amounts.push_back(kappa * s.delta);
        }
    if (!cf.times.empty() && std::abs(cf.times.back() - T) < 1e-12) cf.amounts.back() += 1.0;
    else {
        cf.times.push_back(T);
        cf.amounts.push_back(1.0);
    }
    return cf;
}

struct JamshidianResult {
    double r_star;
    CashFlows flows;
    std::vector<double> strikes; ///< k_j = V(r*, τ, T_j)
};

/// Critical short rate r* with P_c(τ)|_{r=r*} = k and per-bond strikes. Scans r ∈ [−0.5, 1.5] in 100 cells.
inline JamshidianResult jamshidian_strikes(const ShortRateModel& model, const Schedule& s, double kappa, double T,
                                           double k, double tau) {
    if (!std::holds_alternative<HoLee>(model) && !std::holds_alternative<Vasicek>(model))
        throw unsupported_error("jamshidian_strikes: needs Ho-Lee or Vasicek (" + model_name(model) + " given)");
    JamshidianResult out{0.0, coupon_cash_flows(s, kappa, T, tau), {}};
    auto pc = [&](double r) {
        double v = 0.0;
        for (std::size_t j = 0; j < out.flows.times.size(); ++j)
            v += out.flows.amounts[j] * short_rate_bond_price(model, r, tau, out.flows.times[j]);
        return v - k;
    };
    const double lo = -0.5, hi = 1.5;
    const int cells = 100;
    double a = lo, fa = pc(a);
    std::optional<double> root;
    if (fa == 0.0) root = a;
    for (int c = 1; c <= cells && !root; ++c) {
        const double b = lo + (hi - lo) * c / cells, fb = pc(b);
        if (fa * fb <= 0.0) root = fb == 0.0 ? b : find_root(pc, a, b, 1e-14);
        a = b;
        fa = fb;
    }
    if (!root) {
        std::ostringstream os;
        os << "jamshidian_strikes: no r* with P_c = k in [" << lo << ", " << hi << "] (P_c - k = " << pc(lo)
           << " at r = " << lo << ", " << pc(hi) << " at r = " << hi << ")";
        throw bracket_error(os.str());
    }
    out.r_star = *root;
    for (double Tj : out.flows.times) out.strikes.push_back(short_rate_bond_price(model, out.r_star, tau, Tj));
    return out;
}

/// Option at t (r_t = x) exercised at τ on the coupon bond, as the sum of zero-bond options.
inline double coupon_bond_option(const ShortRateModel& model, OptionKind kind, double x, double t, double tau,
                                 const Schedule& s, double kappa, double T, double k) {
    const auto j = jamshidian_strikes(model, s, kappa, T, k, tau);
    double v = 0.0;
    for (std::size_t i = 0; i < j.flows.times.size(); ++i)
        v += j.flows.amounts[i] * bond_option(model, kind, x, t, tau, j.flows.times[i], j.strikes[i]);
    return v;
}

/// Receiver swaption at fixed rate k exercised at T0: a call struck at 1 on the T_n coupon bond.
inline double swaption_price(const ShortRateModel& model, double x, double t, const Schedule& s, double k) {
    return coupon_bond_option(model, OptionKind::Call, x, t, s.T0, s, k, s.last(), 1.0);
}

} // namespace phyn
