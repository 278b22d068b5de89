#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "phyn/analytic/black_scholes.hpp"
#include "phyn/errors.hpp"
#include "phyn/mathcore/parallel.hpp"
#include "phyn/mathcore/rng.hpp"
#include "phyn/mathcore/stats.hpp"

namespace phyn {

inline constexpr double max_hedge_units = 1e6;

/// One rebalance: holdings after trading at time t.
struct HedgeStep {
    double t;
    double stock;     ///< S_t
    double phi;       ///< stock units
    double psi;       ///< bond units, B_t = e^{rt}
    double value;     ///< φS + ψB after trading
    double cash_flow; ///< external cash injected at t (the premium at inception, zero afterwards)
};

using HedgeLedger = std::vector<HedgeStep>;

struct HedgeOptions {
    std::optional<double> mu;             ///< real-world drift of the simulated stock (default r)
    std::optional<double> pinned_terminal; ///< condition every path on S_T = this value
    bool keep_ledger = false;             ///< return the ledger of path 0
    unsigned workers = 0;                 ///< 0: worker_count()
};

struct HedgeSummary {
    OptionKind kind;
    std::size_t n_rebalances = 0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    double price = 0.0;    ///< inception cost
    Estimate mean_error;   ///< terminal portfolio − claim, with its standard error
    double std_error = 0.0; ///< dispersion of the replication error
    double min_error = 0.0;
    double max_error = 0.0;
    double max_abs_phi = 0.0;
    double phi_slope = 0.0; ///< log-log slope of max|φ| against T − t over the last rebalances
    bool clipped = false;
    bool pathology = false;
    std::vector<double> errors;
    std::optional<HedgeLedger> ledger;
};

namespace detail {

/// Stock path on the rebalancing grid; with a pin, a Brownian bridge to the pinned log price.
inline std::vector<double> hedge_path(const PriceSpec& s, std::size_t n, double mu, std::optional<double> pin, Rng& rng) {
    const double tau = s.tau(), dt = tau / static_cast<double>(n), sq = std::sqrt(dt);
    std::vector<double> w(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) w[k + 1] = w[k] + sq * rng.normal();
    const double drift = mu - 0.5 * s.sigma * s.sigma;
    if (pin) {
        if (!(*pin > 0.0)) throw parameter_error("hedge: pinned terminal spot must be positive");
        if (s.sigma == 0.0) throw parameter_error("hedge: pinning needs sigma > 0");
        const double w_target = (std::log(*pin / s.z) - drift * tau) / s.sigma;
        const double gap = w[n] - w_target;
        for (std::size_t k = 0; k <= n; ++k) w[k] -= gap * static_cast<double>(k) / static_cast<double>(n);
    }
    std::vector<double> S(n + 1);
    for (std::size_t k = 0; k <= n; ++k) S[k] = s.z * std::exp(drift * dt * static_cast<double>(k) + s.sigma * w[k]);
    if (pin) S[n] = *pin;
    return S;
}

struct HedgeRun {
    double error = 0.0;
    std::vector<double> abs_phi;
    bool clipped = false;
    HedgeLedger ledger;
};

inline double clipped_delta(OptionKind kind, const PriceSpec& at, bool& clipped) {
    double phi = bs_greeks(kind, at).delta;
    if (!std::isfinite(phi) || std::abs(phi) > max_hedge_units) {
        phi = std::isfinite(phi) ? std::copysign(max_hedge_units, phi) : max_hedge_units;
        clipped = true;
    }
    return phi;
}

/// Hedges one path. If `stop` is given, the run ends at that rebalance index and the error is the portfolio
/// value there minus `stop_payoff(S)`.
inline HedgeRun hedge_one(OptionKind kind, const PriceSpec& s, const std::vector<double>& S, bool keep,
                          std::optional<std::size_t> stop = std::nullopt) {
    const std::size_t n = S.size() - 1;
    const double dt = s.tau() / static_cast<double>(n);
    auto bank = [&](double t) { return std::exp(s.r * t); };
    HedgeRun run;
    run.abs_phi.resize(n);
    PriceSpec at = s;
    const double v0 = bs_price(kind, s);
    double phi = clipped_delta(kind, s, run.clipped);
    double psi = (v0 - phi * S[0]) / bank(s.t);
    run.abs_phi[0] = std::abs(phi);
    if (keep) run.ledger.push_back({s.t, S[0], phi, psi, v0, v0});
    const std::size_t last = stop ? *stop : n;
    for (std::size_t k = 1; k <= last; ++k) {
        const double t = k == n ? s.T : s.t + dt * static_cast<double>(k);
        const double before = phi * S[k] + psi * bank(t);
        if (k == last) {
            run.error = before;
            if (keep) run.ledger.push_back({t, S[k], phi, psi, before, 0.0});
            break;
        }
        at.z = S[k];
        at.t = t;
        const double new_phi = clipped_delta(kind, at, run.clipped);
        const double new_psi = (before - new_phi * S[k]) / bank(t);
        const double after = new_phi * S[k] + new_psi * bank(t);
        const double flow = after - before;
        if (std::abs(flow) > 1e-9 * std::max({1.0, std::abs(before), std::abs(new_phi * S[k])})) {
            std::ostringstream os;
            os << "hedge: rebalancing at t = " << t << " needed external cash " << flow;
            throw degeneracy_error(os.str());
        }
        phi = new_phi;
        psi = new_psi;
        run.abs_phi[k] = std::abs(phi);
        if (keep) run.ledger.push_back({t, S[k], phi, psi, after, 0.0});
    }
    return run;
}

} // namespace detail

/// Discretely rebalanced delta hedge of a European claim over n_paths simulated paths.
/// The pathology flag is raised when |φ| had to be clipped or max|φ| grows at least like (T − t)^{−0.4}
/// over the final quarter of the rebalances.
inline HedgeSummary run_delta_hedge(OptionKind kind, const PriceSpec& spec, std::size_t n_rebalances, RngSeed seed,
                                    std::size_t n_paths, const HedgeOptions& opt = {}) {
    spec.validate();
    if (n_rebalances < 1) throw parameter_error("hedge: need at least one rebalance");
    if (n_paths < 1) throw parameter_error("hedge: need at least one path");
    if (!(spec.tau() > 0.0)) throw parameter_error("hedge: maturity must be after the start time");
    const double mu = opt.mu.value_or(spec.r);
    auto runs = parallel_map<detail::HedgeRun>(
        n_paths,
        [&](std::size_t i) {
            Rng rng = Rng::stream(seed, i);
            const auto S = detail::hedge_path(spec, n_rebalances, mu, opt.pinned_terminal, rng);
            auto run = detail::hedge_one(kind, spec, S, opt.keep_ledger && i == 0);
            run.error -= payoff(kind, S.back(), spec.k);
            return run;
        },
        opt.workers ? opt.workers : worker_count());

    HedgeSummary out;
    out.kind = kind;
    out.n_rebalances = n_rebalances;
    out.n_paths = n_paths;
    out.seed = seed.value;
    out.price = bs_price(kind, spec);
    Moments m;
    out.min_error = std::numeric_limits<double>::infinity();
    out.max_error = -out.min_error;
    std::vector<double> max_phi(n_rebalances, 0.0);
    for (const auto& r : runs) {
        m.add(r.error);
        out.errors.push_back(r.error);
        out.min_error = std::min(out.min_error, r.error);
        out.max_error = std::max(out.max_error, r.error);
        out.clipped = out.clipped || r.clipped;
        for (std::size_t k = 0; k < n_rebalances; ++k) max_phi[k] = std::max(max_phi[k], r.abs_phi[k]);
    }
    out.mean_error = m.mean_estimate();
    out.std_error = m.stddev();
    out.max_abs_phi = *std::max_element(max_phi.begin(), max_phi.end());

    // least-squares slope of log max|φ| on log(T − t) over the last quarter (at least 3 points)
    const std::size_t tail = std::min(n_rebalances, std::max<std::size_t>(3, n_rebalances / 4));
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    const double dt = spec.tau() / static_cast<double>(n_rebalances);
    for (std::size_t k = n_rebalances - tail; k < n_rebalances; ++k) {
        if (!(max_phi[k] > 0.0)) continue;
        const double x = std::log(dt * static_cast<double>(n_rebalances - k)), y = std::log(max_phi[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        cnt += 1;
    }
    if (cnt >= 2 && sxx * cnt - sx * sx > 0) out.phi_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    out.pathology = out.clipped || (tail >= 3 && cnt >= 3 && out.phi_slope <= -0.4);
    if (opt.keep_ledger) out.ledger = std::move(runs.front().ledger);
    return out;
}

struct SurplusSummary {
    std::size_t n_paths = 0;
    std::size_t n_exercised = 0;
    double min_surplus = 0.0;           ///< over all paths, discounted to the start
    double min_exercised_surplus = 0.0; ///< over paths where the holder exercised early
    double mean_surplus = 0.0;
};

/// The issuer hedges the European call (worth the same as the American call without dividends); the holder
/// exercises at `exercise_time` whenever in the money. Surplus = portfolio − payout, discounted to the start.
inline SurplusSummary early_exercise_surplus(const PriceSpec& spec, double exercise_time, std::size_t n_rebalances,
                                             RngSeed seed, std::size_t n_paths) {
    spec.validate();
    if (!(exercise_time > spec.t && exercise_time < spec.T))
        throw parameter_error("early_exercise_surplus: exercise time must lie strictly inside (t, T)");
    const double dt = spec.tau() / static_cast<double>(n_rebalances);
    const auto stop = static_cast<std::size_t>(std::llround((exercise_time - spec.t) / dt));
    if (stop < 1 || stop >= n_rebalances) throw parameter_error("early_exercise_surplus: exercise time off the grid");
    struct One {
        double surplus;
        bool exercised;
    };
    auto res = parallel_map<One>(n_paths, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, i);
        const auto S = detail::hedge_path(spec, n_rebalances, spec.r, std::nullopt, rng);
        const double t_ex = spec.t + dt * static_cast<double>(stop);
        if (S[stop] > spec.k) {
            const double held = detail::hedge_one(OptionKind::Call, spec, S, false, stop).error;
            return One{(held - (S[stop] - spec.k)) * std::exp(-spec.r * (t_ex - spec.t)), true};
        }
        const double held = detail::hedge_one(OptionKind::Call, spec, S, false).error;
        return One{(held - std::max(S.back() - spec.k, 0.0)) * std::exp(-spec.r * spec.tau()), false};
    });
    SurplusSummary out;
    out.n_paths = n_paths;
    out.min_surplus = out.min_exercised_surplus = std::numeric_limits<double>::infinity();
    double sum = 0;
    for (const auto& o : res) {
        out.min_surplus = std::min(out.min_surplus, o.surplus);
        if (o.exercised) {
            ++out.n_exercised;
            out.min_exercised_surplus = std::min(out.min_exercised_surplus, o.surplus);
        }
        sum += o.surplus;
    }
    out.mean_surplus = sum / static_cast<double>(n_paths);
    return out;
}

} // namespace phyn
