#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include "phyn/errors.hpp"
#include "phyn/mathcore/quadrature.hpp"
#include "phyn/mathcore/rng.hpp"
#include "phyn/rates/curve.hpp"

namespace phyn {

/// Initial curve plus factor volatilities σ^i(t,T). Drifts are always derived, never supplied.
struct HjmSurface {
    DiscountCurve curve;
    std::vector<std::function<double(double, double)>> sigma;

    std::size_t factors() const { return sigma.size(); }

    /// Σ^i(t,T) = −∫_t^T σ^i(t,u) du
    double big_sigma(std::size_t i, double t, double T) const {
        if (T <= t) return 0.0;
        return -integrate([&](double u) { return sigma.at(i)(t, u); }, t, T, 1e-12);
    }

    static HjmSurface ho_lee(DiscountCurve c, double rho) {
        return {std::move(c), {[rho](double, double) { return rho; }}};
    }
    static HjmSurface vasicek(DiscountCurve c, double rho, double alpha) {
        return {std::move(c), {[rho, alpha](double t, double T) { return rho * std::exp(-alpha * (T - t)); }}};
    }
};

/// One simulated path on the uniform grid t_k = kΔ, maturities T_j = jΔ.
/// f[k][m] is the forward for [T_m, T_{m+1}] seen at t_k (valid for m ≥ k).
struct HjmPath {
    double delta = 0.0;
    std::vector<std::vector<double>> f;
    std::vector<double> bank;                 ///< B at t_k
    std::vector<std::vector<double>> brownian; ///< W^i at t_k (under the simulation measure)

    std::size_t steps() const { return bank.size() - 1; }
    double short_rate(std::size_t k) const { return f.at(k).at(k); }

    /// P(t_k, T_j) = exp(−Δ Σ_{m=k}^{j−1} f(t_k, T_m))
    double bond(std::size_t k, std::size_t j) const {
        if (j < k) throw domain_error("HjmPath::bond: maturity precedes the observation time");
        if (j > f.at(k).size()) throw domain_error("HjmPath::bond: maturity beyond the simulated surface");
        double s = 0.0;
        for (std::size_t m = k; m < j; ++m) s += f[k][m];
        return std::exp(-delta * s);
    }
    double discounted_bond(std::size_t k, std::size_t j) const { return bond(k, j) / bank.at(k); }
};

/// Grid-discretized HJM model. The drift of f(t_k, T_l) over one step is
/// Σ_i σ_l Δ(A_l + ½σ_l) with A_l = Σ_{m=k+1}^{l−1} σ_m, the discrete form of −σΣ that makes
/// every discounted grid bond an exact martingale.
class HjmModel {
public:
    HjmModel(HjmSurface s, double delta, std::size_t n_maturities) : s_(std::move(s)), delta_(delta), n_(n_maturities) {
        if (!(delta > 0.0) || n_maturities < 1) throw parameter_error("HjmModel: need Δ > 0 and at least one maturity");
        if (s_.factors() == 0) throw parameter_error("HjmModel: need at least one volatility factor");
        const double horizon = delta * static_cast<double>(n_);
        if (horizon > s_.curve.horizon() * (1 + 1e-12)) {
            std::ostringstream os;
            os << "HjmModel: surface maturity " << horizon << " beyond curve domain " << s_.curve.horizon();
            throw domain_error(os.str());
        }
        f0_.resize(n_);
        for (std::size_t m = 0; m < n_; ++m)
            f0_[m] = (s_.curve.log_discount(delta * m) - s_.curve.log_discount(delta * (m + 1))) / delta;
        const std::size_t nf = s_.factors();
        sig_.assign(nf, std::vector<std::vector<double>>(n_));
        drift_.assign(n_, std::vector<double>(n_, 0.0));
        for (std::size_t i = 0; i < nf; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                auto& row = sig_[i][k];
                row.assign(n_, 0.0);
                for (std::size_t l = k; l < n_; ++l) row[l] = s_.sigma[i](delta * k, delta * l);
                double a = 0.0;
                for (std::size_t l = k + 1; l < n_; ++l) {
                    drift_[k][l] += row[l] * delta * (a + 0.5 * row[l]);
                    a += row[l];
                }
            }
    }

    double delta() const { return delta_; }
    std::size_t maturities() const { return n_; }
    const HjmSurface& surface() const { return s_; }
    double initial_forward(std::size_t m) const { return f0_.at(m); }
    double sigma(std::size_t i, std::size_t k, std::size_t l) const { return sig_.at(i).at(k).at(l); }
    double drift(std::size_t k, std::size_t l) const { return drift_.at(k).at(l); }

    /// Discrete Σ^i(t_k, T_J) = −Δ Σ_{m=k+1}^{J−1} σ^i(t_k, T_m): the Brownian shift to the T_J-forward measure.
    double forward_shift(std::size_t i, std::size_t k, std::size_t J) const {
        double a = 0.0;
        for (std::size_t m = k + 1; m < J && m < n_; ++m) a += sig_[i][k][m];
        return -delta_ * a;
    }

    /// Simulates n_steps steps. With `forward_index` = J the path is drawn under the T_J-forward
    /// measure: dW̃ = dŴ + Σ(t, T_J)dt with Ŵ the driving Brownian motion.
    HjmPath simulate(std::size_t n_steps, Rng& rng, std::optional<std::size_t> forward_index = std::nullopt) const {
        if (n_steps > n_) {
            std::ostringstream os;
            os << "hjm_simulate: " << n_steps << " steps exceed the surface's " << n_ << " maturities";
            throw domain_error(os.str());
        }
        if (forward_index && *forward_index > n_) throw domain_error("hjm_simulate: forward-measure maturity beyond surface");
        const std::size_t nf = s_.factors();
        HjmPath p;
        p.delta = delta_;
        p.f.assign(n_steps + 1, {});
        p.f[0] = f0_;
        p.bank.assign(n_steps + 1, 1.0);
        p.brownian.assign(n_steps + 1, std::vector<double>(nf, 0.0));
        const double sq = std::sqrt(delta_);
        std::vector<double> dw(nf);
        for (std::size_t k = 0; k < n_steps; ++k) {
            for (std::size_t i = 0; i < nf; ++i) {
                dw[i] = sq * rng.normal();
                p.brownian[k + 1][i] = p.brownian[k][i] + dw[i];
                if (forward_index) dw[i] += forward_shift(i, k, *forward_index) * delta_;
            }
            const auto& cur = p.f[k];
            auto& next = p.f[k + 1];
            next.assign(n_, 0.0);
            for (std::size_t l = k + 1; l < n_; ++l) {
                double v = cur[l] + drift_[k][l] * delta_;
                for (std::size_t i = 0; i < nf; ++i) v += sig_[i][k][l] * dw[i];
                next[l] = v;
            }
            p.bank[k + 1] = p.bank[k] * std::exp(delta_ * cur[k]);
        }
        return p;
    }

private:
    HjmSurface s_;
    double delta_;
    std::size_t n_;
    std::vector<double> f0_;
    std::vector<std::vector<std::vector<double>>> sig_;
    std::vector<std::vector<double>> drift_;
};

inline HjmPath hjm_simulate(const HjmModel& model, std::size_t n_steps, RngSeed seed, std::uint64_t path_index = 0,
                            std::optional<std::size_t> forward_index = std::nullopt) {
    Rng rng = Rng::stream(seed, path_index);
    return model.simulate(n_steps, rng, forward_index);
}

/// Change of drift for pricing under the τ-forward measure: Ŵ^i = W̃^i − ∫Σ^i(s,τ)ds, so each forward
/// rate's drift moves by σ^iΣ^i(t,τ) and f(t,τ) loses its drift.
struct ForwardMeasureShift {
    std::vector<double> brownian; ///< Σ^i(t,τ) per factor
    double forward_drift;         ///< Σ_i σ^i(t,τ)Σ^i(t,τ), the change in d_t f(t,τ)'s drift
};

inline ForwardMeasureShift forward_measure_shift(const HjmSurface& s, double t, double tau) {
    if (tau > s.curve.horizon() * (1 + 1e-12)) throw domain_error("forward_measure_shift: τ beyond surface domain");
    if (tau < t) throw domain_error("forward_measure_shift: τ precedes t");
    ForwardMeasureShift out{std::vector<double>(s.factors()), 0.0};
    for (std::size_t i = 0; i < s.factors(); ++i) {
        out.brownian[i] = s.big_sigma(i, t, tau);
        out.forward_drift += s.sigma[i](t, tau) * out.brownian[i];
    }
    return out;
}

} // namespace phyn
