#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <vector>

#include "phyn/errors.hpp"

namespace phyn {

/// q = (S_now·e^{rδt} − S_down)/(S_up − S_down), requiring S_down < S_now·e^{rδt} < S_up.
inline double risk_neutral_q(double s_now, double s_up, double s_down, double r, double dt) {
    const double grown = s_now * std::exp(r * dt);
    std::ostringstream os;
    os.precision(17);
    if (!(s_up > s_down)) {
        os << "arbitrage band: S_up (" << s_up << ") must exceed S_down (" << s_down << ")";
        throw arbitrage_error(os.str());
    }
    if (!(s_down < grown)) {
        os << "arbitrage band violated: S_down (" << s_down << ") < S_now*exp(r*dt) (" << grown << ") fails";
        throw arbitrage_error(os.str());
    }
    if (!(grown < s_up)) {
        os << "arbitrage band violated: S_now*exp(r*dt) (" << grown << ") < S_up (" << s_up << ") fails";
        throw arbitrage_error(os.str());
    }
    return (grown - s_down) / (s_up - s_down);
}

/// Recombining binomial lattice with constant multipliers: S(k, j) = s0·u^j·d^{k−j}
/// after k steps with j up-moves; cash bond B_k = e^{r k δt}.
class BinomialTree {
public:
    BinomialTree(double s0, double up, double down, double r, double dt, std::size_t n_steps)
        : s0_(s0), up_(up), down_(down), r_(r), dt_(dt), n_(n_steps) {
        if (!(s0 > 0.0)) throw parameter_error("BinomialTree: s0 must be positive");
        if (!(dt > 0.0)) throw parameter_error("BinomialTree: dt must be positive");
        if (n_steps < 1) throw parameter_error("BinomialTree: need at least one step");
        if (!(down > 0.0)) throw parameter_error("BinomialTree: down multiplier must be positive");
        q_ = risk_neutral_q(1.0, up, down, r, dt);
    }

    /// Up/down multipliers e^{±σ√δt}; the drift lives in the measure.
    static BinomialTree crr(double s0, double r, double sigma, double T, std::size_t n) {
        if (!(sigma > 0.0)) throw parameter_error("BinomialTree::crr: sigma must be positive");
        const double dt = T / static_cast<double>(n);
        const double u = std::exp(sigma * std::sqrt(dt));
        return {s0, u, 1.0 / u, r, dt, n};
    }

    /// S± = S·e^{μδt ± σ√δt}.
    static BinomialTree drifted(double s0, double mu, double sigma, double r, double T, std::size_t n) {
        const double dt = T / static_cast<double>(n);
        return {s0, std::exp(mu * dt + sigma * std::sqrt(dt)), std::exp(mu * dt - sigma * std::sqrt(dt)), r, dt, n};
    }

    double s0() const { return s0_; }
    double up() const { return up_; }
    double down() const { return down_; }
    double rate() const { return r_; }
    double dt() const { return dt_; }
    std::size_t n_steps() const { return n_; }
    double maturity() const { return dt_ * static_cast<double>(n_); }
    double q() const { return q_; }

    double price(std::size_t k, std::size_t j) const {
        return s0_ * std::pow(up_, static_cast<double>(j)) * std::pow(down_, static_cast<double>(k - j));
    }
    double bond(std::size_t k) const { return std::exp(r_ * dt_ * static_cast<double>(k)); }

    /// Same tree cut after m steps.
    BinomialTree truncated(std::size_t m) const { return {s0_, up_, down_, r_, dt_, m}; }

private:
    double s0_, up_, down_, r_, dt_;
    std::size_t n_;
    double q_;
};

enum class Exercise { European, American };

/// A claim on the tree. Path bit i is set when step i moved up.
struct TreeClaim {
    std::function<double(double)> payoff;
    std::function<double(std::uint32_t path, std::size_t depth)> path_payoff;
    Exercise exercise = Exercise::European;

    bool filtration_mode() const { return static_cast<bool>(path_payoff); }

    static TreeClaim terminal(std::function<double(double)> f, Exercise ex = Exercise::European) {
        return {std::move(f), {}, ex};
    }
    static TreeClaim on_path(std::function<double(std::uint32_t, std::size_t)> f) { return {{}, std::move(f)}; }
};

inline TreeClaim call_claim(double k, Exercise ex = Exercise::European) {
    return TreeClaim::terminal([k](double s) { return std::max(s - k, 0.0); }, ex);
}
inline TreeClaim put_claim(double k, Exercise ex = Exercise::European) {
    return TreeClaim::terminal([k](double s) { return std::max(k - s, 0.0); }, ex);
}

} // namespace phyn
