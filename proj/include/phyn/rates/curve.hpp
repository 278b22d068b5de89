#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "phyn/errors.hpp"

namespace phyn {

struct CurveOptions {
    bool nonnegative_forwards = false; ///< reject increasing discount factors
};

/// P(0,T) on a maturity grid with log-linear interpolation (piecewise-flat forwards).
/// The node T = 0 with P = 1 is always present.
class DiscountCurve {
public:
    using Options = CurveOptions;

    DiscountCurve() : DiscountCurve(std::vector<double>{1.0}, std::vector<double>{1.0}) {}

    DiscountCurve(std::vector<double> maturities, std::vector<double> discounts, Options opt = {}) {
        if (maturities.size() != discounts.size() || maturities.empty())
            throw parameter_error("DiscountCurve: need matching, nonempty maturity and discount-factor lists");
        if (maturities.front() == 0.0) {
            if (std::abs(discounts.front() - 1.0) > 1e-14)
                throw arbitrage_error("DiscountCurve: P(0,0) must equal 1");
        } else {
            maturities.insert(maturities.begin(), 0.0);
            discounts.insert(discounts.begin(), 1.0);
        }
        for (std::size_t i = 1; i < maturities.size(); ++i) {
            std::ostringstream os;
            if (!(maturities[i] > maturities[i - 1]))
                os << "DiscountCurve: maturities must be strictly increasing (entry " << i << ": " << maturities[i] << ")";
            else if (!(discounts[i] > 0.0) || !std::isfinite(discounts[i]))
                os << "DiscountCurve: discount factor must be positive (entry " << i << ": " << discounts[i] << ")";
            else if (opt.nonnegative_forwards && discounts[i] > discounts[i - 1])
                os << "DiscountCurve: negative forward rate between T = " << maturities[i - 1] << " and " << maturities[i];
            if (!os.str().empty()) throw arbitrage_error(os.str());
        }
        t_ = std::move(maturities);
        log_p_.resize(discounts.size());
        std::transform(discounts.begin(), discounts.end(), log_p_.begin(), [](double p) { return std::log(p); });
    }

    static DiscountCurve from_zero_yields(const std::vector<double>& maturities, const std::vector<double>& yields,
                                          Options opt = {}) {
        if (maturities.size() != yields.size()) throw parameter_error("DiscountCurve: maturity/yield size mismatch");
        std::vector<double> p(yields.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(-yields[i] * maturities[i]);
        return DiscountCurve(maturities, p, opt);
    }

    static DiscountCurve flat(double rate, double horizon) {
        return DiscountCurve({horizon}, {std::exp(-rate * horizon)});
    }

    double horizon() const { return t_.back(); }
    const std::vector<double>& maturities() const { return t_; }
    std::vector<double> discount_factors() const {
        std::vector<double> out(log_p_.size());
        std::transform(log_p_.begin(), log_p_.end(), out.begin(), [](double l) { return std::exp(l); });
        return out;
    }

    double log_discount(double T) const {
        check(T);
        const std::size_t i = segment(T);
        const double w = (T - t_[i]) / (t_[i + 1] - t_[i]);
        return log_p_[i] + w * (log_p_[i + 1] - log_p_[i]);
    }

    /// P(0,T)
    double discount(double T) const { return std::exp(log_discount(T)); }
    /// Forward discount P(0,T)/P(0,t), the deterministic value of P(t,T) seen from 0.
    double discount(double t, double T) const { return std::exp(log_discount(T) - log_discount(t)); }

    /// R(0,T) = −ln P/T; the short rate at T = 0.
    double zero_yield(double T) const { return T == 0.0 ? forward(0.0) : -log_discount(T) / T; }

    /// f(0,T) = −∂_T ln P, right-continuous at nodes except the last.
    double forward(double T) const {
        check(T);
        const std::size_t i = segment(T);
        return -(log_p_[i + 1] - log_p_[i]) / (t_[i + 1] - t_[i]);
    }

    double short_rate() const { return forward(0.0); }

private:
    void check(double T) const {
        if (!(T >= 0.0) || T > t_.back() * (1 + 1e-12)) {
            std::ostringstream os;
            os << "DiscountCurve: maturity " << T << " outside curve domain [0, " << t_.back() << "]";
            throw domain_error(os.str());
        }
    }
    std::size_t segment(double T) const {
        if (t_.size() < 2) throw domain_error("DiscountCurve: curve has no maturities beyond 0");
        auto it = std::upper_bound(t_.begin(), t_.end(), T);
        std::size_t i = static_cast<std::size_t>(it - t_.begin());
        return std::min(i == 0 ? 0 : i - 1, t_.size() - 2);
    }

    std::vector<double> t_;
    std::vector<double> log_p_;
};

struct CurveView {
    double yield;      ///< R(0,T)
    double forward;    ///< f(0,T)
    double short_rate; ///< r_0 = f(0,0)
};

inline CurveView curve_views(const DiscountCurve& c, double T) { return {c.zero_yield(T), c.forward(T), c.short_rate()}; }

} // namespace phyn
