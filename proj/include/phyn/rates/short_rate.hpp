#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "phyn/errors.hpp"
#include "phyn/mathcore/montecarlo.hpp"
#include "phyn/mathcore/quadrature.hpp"
#include "phyn/mathcore/rng.hpp"

namespace phyn {

/// Deterministic model coefficient; constants take the closed-form paths.
class TimeFn {
public:
    TimeFn(double v = 0.0) : c_(v) {}
    template <class F>
        requires std::invocable<F, double> && (!std::convertible_to<F, double>)
    TimeFn(F f) : f_(std::move(f)) {}

    double operator()(double t) const { return c_ ? *c_ : f_(t); }
    bool constant() const { return c_.has_value(); }
    std::function<double(double)> fn() const {
        if (c_) return [v = *c_](double) { return v; };
        return f_;
    }

private:
    std::optional<double> c_;
    std::function<double(double)> f_;
};

/// dr = ρ dW + ν dt
struct HoLee {
    TimeFn rho, nu;
};
/// dr = ρ dW + (ν − αr) dt
struct Vasicek {
    TimeFn rho, nu, alpha;
};
/// dr = √r ρ dW + (ν − αr) dt
struct Cir {
    TimeFn rho, nu, alpha;
};
/// r = e^X, dX = ρ dW + (ν − αX) dt
struct BlackKarasinski {
    TimeFn rho, nu, alpha;
};

using ShortRateModel = std::variant<HoLee, Vasicek, Cir, BlackKarasinski>;

inline std::string model_name(const ShortRateModel& m) {
    static const char* names[] = {"ho_lee", "vasicek", "cir", "black_karasinski"};
    return names[m.index()];
}

namespace detail {
inline void check_times(double t, double T, const char* who) {
    if (!(T >= t)) {
        std::ostringstream os;
        os << who << ": maturity T = " << T << " precedes t = " << t;
        throw domain_error(os.str());
    }
}
} // namespace detail

/// β(s,u) = exp(−∫_s^u α)
inline double vasicek_beta(const TimeFn& alpha, double s, double u) {
    if (alpha.constant()) return std::exp(-alpha(0) * (u - s));
    return std::exp(-integrate_fixed([&](double v) { return alpha(v); }, s, u));
}

/// η(s,T) = ∫_s^T β(s,u) du
inline double vasicek_eta(const TimeFn& alpha, double s, double T) {
    if (alpha.constant()) {
        const double a = alpha(0), tau = T - s;
        return std::abs(a * tau) < 1e-12 ? tau : -std::expm1(-a * tau) / a;
    }
    return integrate_fixed([&](double u) { return vasicek_beta(alpha, s, u); }, s, T);
}

inline double ho_lee_g(const HoLee& m, double x, double t, double T) {
    const double tau = T - t;
    if (m.rho.constant() && m.nu.constant()) {
        const double r = m.rho(0), n = m.nu(0);
        return x * tau - r * r * tau * tau * tau / 6.0 + n * tau * tau / 2.0;
    }
    if (tau == 0.0) return 0.0;
    return x * tau - 0.5 * integrate([&](double s) { return std::pow((T - s) * m.rho(s), 2); }, t, T) +
           integrate([&](double s) { return (T - s) * m.nu(s); }, t, T);
}

inline double vasicek_g(const Vasicek& m, double x, double t, double T) {
    const double tau = T - t;
    if (tau == 0.0) return 0.0;
    if (m.rho.constant() && m.nu.constant() && m.alpha.constant()) {
        const double a = m.alpha(0), r = m.rho(0), n = m.nu(0);
        if (std::abs(a * tau) < 1e-7) return ho_lee_g(HoLee{r, n - a * x}, x, t, T);
        const double eta = -std::expm1(-a * tau) / a;
        const double int_eta = (tau - eta) / a;
        const double int_eta2 = (tau - 2 * eta - std::expm1(-2 * a * tau) / (2 * a)) / (a * a);
        return x * eta + n * int_eta - 0.5 * r * r * int_eta2;
    }
    return x * vasicek_eta(m.alpha, t, T) +
           integrate([&](double s) { return vasicek_eta(m.alpha, s, T) * m.nu(s); }, t, T, 1e-11) -
           0.5 * integrate([&](double s) { return std::pow(vasicek_eta(m.alpha, s, T) * m.rho(s), 2); }, t, T, 1e-11);
}

struct RiccatiSolution {
    double B;        ///< B(t,T)
    double nu_int;   ///< ∫_t^T ν(s)B(s,T) ds
};

/// ∂_tB = ½ρ²B² + αB − 1 integrated backward from B(T,T) = terminal_b with classical RK4,
/// jointly with ∫νB. terminal_b = 0 gives P(T,T) = 1; 1 is the alternative boundary value.
inline RiccatiSolution cir_riccati(const Cir& m, double t, double T, double terminal_b = 0.0, int steps = 1000) {
    detail::check_times(t, T, "cir_riccati");
    if (T == t) return {terminal_b, 0.0};
    const double h = (T - t) / steps;
    auto rhs = [&](double s, double b) { return 0.5 * std::pow(m.rho(s), 2) * b * b + m.alpha(s) * b - 1.0; };
    double b = terminal_b, I = 0.0, s = T;
    for (int i = 0; i < steps; ++i) {
        // march in −s; I' = −νB in s, so +νB going backward
        const double k1 = rhs(s, b), j1 = m.nu(s) * b;
        const double b2 = b - 0.5 * h * k1;
        const double k2 = rhs(s - 0.5 * h, b2), j2 = m.nu(s - 0.5 * h) * b2;
        const double b3 = b - 0.5 * h * k2;
        const double k3 = rhs(s - 0.5 * h, b3), j3 = m.nu(s - 0.5 * h) * b3;
        const double b4 = b - h * k3;
        const double k4 = rhs(s - h, b4), j4 = m.nu(s - h) * b4;
        b -= h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        I += h / 6.0 * (j1 + 2 * j2 + 2 * j3 + j4);
        s = i + 1 == steps ? t : s - h;
    }
    return {b, I};
}

inline double cir_g(const Cir& m, double x, double t, double T, double terminal_b = 0.0) {
    if (x < 0.0) throw domain_error("CIR: short rate must be nonnegative");
    const auto sol = cir_riccati(m, t, T, terminal_b);
    return x * sol.B + sol.nu_int;
}

/// g(x,t,T) = −ln P(t,T) given r_t = x.
inline double short_rate_g(const ShortRateModel& model, double x, double t, double T) {
    detail::check_times(t, T, "short_rate_bond_price");
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, HoLee>) return ho_lee_g(m, x, t, T);
            else if constexpr (std::is_same_v<M, Vasicek>) return vasicek_g(m, x, t, T);
            else if constexpr (std::is_same_v<M, Cir>) return cir_g(m, x, t, T);
            else
                throw unsupported_error("Black-Karasinski has no closed-form bond price; price it by simulation "
                                        "(short_rate_discount_mc)");
        },
        model);
}

inline double short_rate_bond_price(const ShortRateModel& model, double x, double t, double T) {
    return std::exp(-short_rate_g(model, x, t, T));
}

/// Short rate at the end of a step and ∫r over it.
struct ShortRateStep {
    double r;
    double integral;
};

/// Exact joint Gaussian transition of (r, ∫r) for constant-coefficient Vasicek (α = 0: Ho-Lee).
inline ShortRateStep gaussian_short_rate_step(double r, double rho, double nu, double alpha, double dt, Rng& rng) {
    const double z1 = rng.normal(), z2 = rng.normal();
    double m_r, m_i, v_r, v_i, cov;
    const double x = alpha * dt;
    if (std::abs(x) < 1e-3) {
        // series in x = αΔ about the Ho-Lee limit
        const double one_m_e = dt * (1 - x / 2 + x * x / 6 - x * x * x / 24);
        m_r = r * (1 - one_m_e * alpha) + nu * one_m_e;
        m_i = r * one_m_e + nu * dt * dt * (0.5 - x / 6 + x * x / 24);
        v_r = rho * rho * dt * (1 - x + 2 * x * x / 3 - x * x * x / 3);
        v_i = rho * rho * dt * dt * dt * (1.0 / 3 - x / 4 + 7 * x * x / 60);
        cov = rho * rho * dt * dt * (0.5 - x / 2 + 7 * x * x / 24);
    } else {
        const double ome = -std::expm1(-x), ome2 = -std::expm1(-2 * x);
        m_r = r * (1 - ome) + nu / alpha * ome;
        m_i = nu / alpha * dt + (r - nu / alpha) * ome / alpha;
        v_r = rho * rho * ome2 / (2 * alpha);
        v_i = rho * rho / (alpha * alpha) * (dt - 2 * ome / alpha + ome2 / (2 * alpha));
        cov = rho * rho * ome * ome / (2 * alpha * alpha);
    }
    const double sd_r = std::sqrt(v_r);
    const double beta = sd_r > 0 ? cov / sd_r : 0.0;
    const double resid = std::sqrt(std::max(0.0, v_i - beta * beta));
    return {m_r + sd_r * z1, m_i + beta * z1 + resid * z2};
}

/// Simulates r from (x, t) to T in n_steps, returning r_T and ∫_t^T r.
/// Constant-coefficient Gaussian models step exactly; otherwise Euler (CIR with full truncation) and a
/// trapezoidal integral.
inline ShortRateStep simulate_short_rate(const ShortRateModel& model, double x, double t, double T,
                                         std::size_t n_steps, Rng& rng) {
    detail::check_times(t, T, "simulate_short_rate");
    if (n_steps == 0) throw parameter_error("simulate_short_rate: need at least one step");
    const double dt = (T - t) / static_cast<double>(n_steps);
    return std::visit(
        [&](const auto& m) -> ShortRateStep {
            using M = std::decay_t<decltype(m)>;
            double r = x, I = 0.0;
            if constexpr (std::is_same_v<M, HoLee> || std::is_same_v<M, Vasicek>) {
                const double a = [&] { if constexpr (std::is_same_v<M, Vasicek>) return m.alpha(0); else return 0.0; }();
                bool exact = m.rho.constant() && m.nu.constant();
                if constexpr (std::is_same_v<M, Vasicek>) exact = exact && m.alpha.constant();
                for (std::size_t k = 0; k < n_steps; ++k) {
                    const double s = t + static_cast<double>(k) * dt;
                    if (exact) {
                        const auto st = gaussian_short_rate_step(r, m.rho(0), m.nu(0), a, dt, rng);
                        r = st.r;
                        I += st.integral;
                    } else {
                        double drift = m.nu(s);
                        if constexpr (std::is_same_v<M, Vasicek>) drift -= m.alpha(s) * r;
                        const double next = r + drift * dt + m.rho(s) * std::sqrt(dt) * rng.normal();
                        I += 0.5 * (r + next) * dt;
                        r = next;
                    }
                }
                return {r, I};
            } else if constexpr (std::is_same_v<M, Cir>) {
                if (x < 0.0) throw domain_error("CIR: short rate must be nonnegative");
                for (std::size_t k = 0; k < n_steps; ++k) {
                    const double s = t + static_cast<double>(k) * dt;
                    const double rp = std::max(r, 0.0);
                    const double next = r + (m.nu(s) - m.alpha(s) * rp) * dt + std::sqrt(rp * dt) * m.rho(s) * rng.normal();
                    I += 0.5 * (rp + std::max(next, 0.0)) * dt;
                    r = next;
                }
                return {std::max(r, 0.0), I};
            } else {
                if (!(x > 0.0)) throw domain_error("Black-Karasinski: short rate must be positive");
                double X = std::log(x);
                const bool exact = m.rho.constant() && m.nu.constant() && m.alpha.constant();
                for (std::size_t k = 0; k < n_steps; ++k) {
                    const double s = t + static_cast<double>(k) * dt;
                    double next;
                    if (exact) next = gaussian_short_rate_step(X, m.rho(0), m.nu(0), m.alpha(0), dt, rng).r;
                    else next = X + (m.nu(s) - m.alpha(s) * X) * dt + m.rho(s) * std::sqrt(dt) * rng.normal();
                    I += 0.5 * (std::exp(X) + std::exp(next)) * dt;
                    X = next;
                }
                return {std::exp(X), I};
            }
        },
        model);
}

/// ⟨exp(−∫_t^T r)⟩ by simulation; the only bond price available for Black-Karasinski.
inline Estimate short_rate_discount_mc(const ShortRateModel& model, double x, double t, double T, std::size_t n_paths,
                                       std::size_t n_steps, RngSeed seed = default_seed) {
    return monte_carlo(n_paths, seed, [&](Rng& rng) { return std::exp(-simulate_short_rate(model, x, t, T, n_steps, rng).integral); });
}

} // namespace phyn
