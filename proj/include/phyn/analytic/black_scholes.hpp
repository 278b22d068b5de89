#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phyn/errors.hpp"
#include "phyn/mathcore/normal.hpp"

namespace phyn {

enum class OptionKind { Call, Put, Binary };

inline const char* to_string(OptionKind k) {
    switch (k) {
    case OptionKind::Call: return "call";
    case OptionKind::Put: return "put";
    case OptionKind::Binary: return "binary";
    }
    return "?";
}

inline OptionKind parse_option_kind(const std::string& s) {
    if (s == "call") return OptionKind::Call;
    if (s == "put") return OptionKind::Put;
    if (s == "binary") return OptionKind::Binary;
    throw parameter_error("unknown option kind '" + s + "' (expected call, put or binary)");
}

/// One vanilla pricing problem: spot z, strike k, rate r, volatility, now t, maturity T.
struct PriceSpec {
    double z = 100.0;
    double k = 100.0;
    double r = 0.0;
    double sigma = 0.2;
    double t = 0.0;
    double T = 1.0;

    double tau() const { return T - t; }

    void validate() const {
        if (!(z > 0.0)) throw parameter_error("PriceSpec: spot must be positive");
        if (!(k > 0.0)) throw parameter_error("PriceSpec: strike must be positive");
        if (!(sigma >= 0.0)) throw parameter_error("PriceSpec: sigma must be nonnegative");
        if (!(T >= t)) throw parameter_error("PriceSpec: maturity must not precede the current time");
        if (!std::isfinite(r)) throw parameter_error("PriceSpec: rate must be finite");
    }
};

struct DividendSpec {
    enum class Mode { Continuous, Periodic };
    Mode mode = Mode::Continuous;
    double rho = 0.0;       ///< continuous yield, or fraction paid per payment
    unsigned payments = 0;  ///< n[T] − n[t] for periodic mode

    static DividendSpec continuous(double rho) { return {Mode::Continuous, rho, 0}; }
    static DividendSpec periodic(double rho, unsigned payments) { return {Mode::Periodic, rho, payments}; }
};

inline double forward_price(const PriceSpec& s, const std::optional<DividendSpec>& div = std::nullopt) {
    s.validate();
    const double tau = s.tau();
    if (!div) return s.z * std::exp(s.r * tau);
    if (div->mode == DividendSpec::Mode::Continuous) return s.z * std::exp((s.r - div->rho) * tau);
    if (!(div->rho >= 0.0 && div->rho < 1.0))
        throw parameter_error("forward_price: periodic dividend fraction must lie in [0, 1)");
    return s.z * std::pow(1.0 - div->rho, static_cast<double>(div->payments)) * std::exp(s.r * tau);
}

/// Black formula on a forward: discount·E[payoff] with log-normal S_T, total log-sd `sd`.
/// sd = 0 gives the deterministic limit.
inline double black_price(OptionKind kind, double forward, double k, double discount, double sd) {
    if (sd <= 0.0) {
        switch (kind) {
        case OptionKind::Call: return discount * std::max(forward - k, 0.0);
        case OptionKind::Put: return discount * std::max(k - forward, 0.0);
        case OptionKind::Binary: return discount * (forward > k ? 1.0 : forward == k ? 0.5 : 0.0);
        }
    }
    const double dp = (std::log(forward / k) + 0.5 * sd * sd) / sd;
    const double dm = dp - sd;
    switch (kind) {
    case OptionKind::Call: return discount * (forward * norm_cdf(dp) - k * norm_cdf(dm));
    case OptionKind::Put: return discount * (k * norm_sf(dm) - forward * norm_sf(dp));
    case OptionKind::Binary: return discount * norm_cdf(dm);
    }
    return 0.0;
}

inline double payoff(OptionKind kind, double s, double k) {
    switch (kind) {
    case OptionKind::Call: return std::max(s - k, 0.0);
    case OptionKind::Put: return std::max(k - s, 0.0);
    case OptionKind::Binary: return s > k ? 1.0 : 0.0;
    }
    return 0.0;
}

/// Black-Scholes price of a European call, put or binary (pays 1 if S_T > k).
inline double bs_price(OptionKind kind, const PriceSpec& s, const std::optional<DividendSpec>& div = std::nullopt) {
    s.validate();
    const double tau = s.tau();
    if (tau == 0.0) return payoff(kind, s.z, s.k);
    return black_price(kind, forward_price(s, div), s.k, std::exp(-s.r * tau), s.sigma * std::sqrt(tau));
}

struct Greeks {
    double theta = 0.0; ///< ∂V/∂t
    double delta = 0.0; ///< ∂V/∂z
    double gamma = 0.0; ///< ∂²V/∂z²
    double vega = 0.0;  ///< ∂V/∂σ
    double rho = 0.0;   ///< ∂V/∂r
};

inline Greeks bs_greeks(OptionKind kind, const PriceSpec& s) {
    s.validate();
    const double tau = s.tau();
    if (!(tau > 0.0)) throw domain_error("bs_greeks: maturity must be after the current time");
    const double disc = std::exp(-s.r * tau);
    const double kd = s.k * disc;
    Greeks g;
    if (s.sigma == 0.0) {
        const double fwd = s.z - kd;
        switch (kind) {
        case OptionKind::Call:
            if (fwd > 0) g = {-s.r * kd, 1.0, 0.0, 0.0, tau * kd};
            break;
        case OptionKind::Put:
            if (fwd < 0) g = {s.r * kd, -1.0, 0.0, 0.0, -tau * kd};
            break;
        case OptionKind::Binary:
            if (fwd > 0) g = {s.r * disc, 0.0, 0.0, 0.0, -tau * disc};
            break;
        }
        return g;
    }
    const double sq = std::sqrt(tau), sd = s.sigma * sq;
    const double lz = std::log(s.z / s.k);
    const double dp = (lz + (s.r + 0.5 * s.sigma * s.sigma) * tau) / sd;
    const double dm = dp - sd;
    const double pdp = norm_pdf(dp), pdm = norm_pdf(dm);
    switch (kind) {
    case OptionKind::Call:
        g.delta = norm_cdf(dp);
        g.gamma = pdp / (s.z * sd);
        g.vega = s.z * pdp * sq;
        g.rho = tau * kd * norm_cdf(dm);
        g.theta = -s.z * pdp * s.sigma / (2.0 * sq) - s.r * kd * norm_cdf(dm);
        break;
    case OptionKind::Put:
        g.delta = norm_cdf(dp) - 1.0;
        g.gamma = pdp / (s.z * sd);
        g.vega = s.z * pdp * sq;
        g.rho = -tau * kd * norm_sf(dm);
        g.theta = -s.z * pdp * s.sigma / (2.0 * sq) + s.r * kd * norm_sf(dm);
        break;
    case OptionKind::Binary: {
        const double v = disc * norm_cdf(dm);
        const double ddm_dtau = -lz / (2.0 * s.sigma * tau * sq) + (s.r - 0.5 * s.sigma * s.sigma) / (2.0 * s.sigma * sq);
        g.delta = disc * pdm / (s.z * sd);
        g.gamma = -disc * pdm * dp / (s.z * s.z * sd * sd);
        g.vega = -disc * pdm * dp / s.sigma;
        g.rho = -tau * v + disc * pdm * sq / s.sigma;
        g.theta = s.r * v - disc * pdm * ddm_dtau;
        break;
    }
    }
    return g;
}

/// Replicating holdings: φ = ∂V/∂z stock units and ψ = e^{−rt}(V − φz) units of B_t = e^{rt}.
struct Hedge {
    double phi;
    double psi;
};

inline Hedge bs_hedge(OptionKind kind, const PriceSpec& s) {
    const double v = bs_price(kind, s);
    const double phi = bs_greeks(kind, s).delta;
    return {phi, std::exp(-s.r * s.t) * (v - phi * s.z)};
}

/// Binary prices V^b = −∂V^c/∂k by central differences at the interior strikes of a
/// uniform strike grid. Returns (strike, binary) pairs.
inline std::vector<std::pair<double, double>> binary_from_call_spectrum(const std::vector<double>& strikes,
                                                                        const std::vector<double>& calls) {
    if (strikes.size() < 3) throw parameter_error("binary_from_call_spectrum: need at least 3 strikes");
    if (strikes.size() != calls.size()) throw parameter_error("binary_from_call_spectrum: size mismatch");
    const double dk = strikes[1] - strikes[0];
    if (!(dk > 0.0)) throw parameter_error("binary_from_call_spectrum: strikes must increase");
    for (std::size_t i = 1; i < strikes.size(); ++i)
        if (std::abs(strikes[i] - strikes[i - 1] - dk) > 1e-9 * std::max(1.0, std::abs(strikes[i])))
            throw parameter_error("binary_from_call_spectrum: strike spacing must be uniform");
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 1; i + 1 < strikes.size(); ++i)
        out.emplace_back(strikes[i], -(calls[i + 1] - calls[i - 1]) / (strikes[i + 1] - strikes[i - 1]));
    return out;
}

/// Small-σ√T expansions with κ = ln(F/k)/(σ√T).
inline double atm_approx(OptionKind kind, double k, double r, double T, double sigma, double kappa = 0.0) {
    const double sd = sigma * std::sqrt(T), disc = std::exp(-r * T);
    switch (kind) {
    case OptionKind::Call: return k * disc * (kappa * norm_cdf(kappa) + norm_pdf(kappa)) * sd;
    case OptionKind::Put: return -k * disc * (kappa * norm_sf(kappa) - norm_pdf(kappa)) * sd;
    case OptionKind::Binary: return disc * (norm_cdf(kappa) - norm_pdf(kappa) * sd / 2.0);
    }
    return 0.0;
}

enum class ExerciseStyle { European, American };

struct PriceBounds {
    double lower;
    double upper;
};

/// No-arbitrage bounds for calls and puts.
inline PriceBounds price_bounds(OptionKind kind, ExerciseStyle style, const PriceSpec& s) {
    s.validate();
    const double kd = s.k * std::exp(-s.r * s.tau());
    switch (kind) {
    case OptionKind::Call: return {std::max(0.0, s.z - kd), s.z};
    case OptionKind::Put:
        if (style == ExerciseStyle::American) return {std::max(0.0, s.k - s.z), s.k};
        return {std::max(0.0, kd - s.z), kd};
    case OptionKind::Binary: break;
    }
    throw unsupported_error("price_bounds: only calls and puts have bounds here");
}

} // namespace phyn
