#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "phyn/errors.hpp"
#include "phyn/pde/diffusion.hpp"

namespace phyn {

enum class Scheme { Ftcs, CrankNicolson };

inline Scheme parse_scheme(const std::string& s) {
    if (s == "ftcs") return Scheme::Ftcs;
    if (s == "cn" || s == "crank_nicolson" || s == "crank-nicolson") return Scheme::CrankNicolson;
    throw parameter_error("unknown scheme '" + s + "' (expected ftcs or crank_nicolson)");
}

/// Y on the (y, t) grid plus the map back to prices. Row n is time t0 + nΔt.
struct ValueSurface {
    PdeGrid grid;
    double t0 = 0.0;
    double T = 1.0;
    std::vector<double> growth;            ///< e^{∫_{t_n}^T r} per time row
    std::vector<std::vector<double>> y_values;

    double dt() const { return (T - t0) / static_cast<double>(grid.n_t); }
    double time(std::size_t n) const { return n == grid.n_t ? T : t0 + static_cast<double>(n) * dt(); }

    /// Y(y, t_n) by 4-point Lagrange interpolation.
    double y_at(double y, std::size_t n) const {
        const auto& row = y_values.at(n);
        if (y < grid.x_min || y > grid.x_max) {
            std::ostringstream os;
            os << "y = " << y << " outside PDE grid [" << grid.x_min << ", " << grid.x_max << "]";
            throw domain_error(os.str());
        }
        const double h = grid.dx();
        const long last = static_cast<long>(grid.n_x) - 1;
        long i = static_cast<long>(std::floor((y - grid.x_min) / h)) - 1;
        i = std::clamp(i, 0L, std::max(0L, last - 3));
        const long m = std::min(4L, last + 1);
        double out = 0.0;
        for (long a = 0; a < m; ++a) {
            double w = 1.0;
            for (long b = 0; b < m; ++b)
                if (b != a) w *= (y - grid.x(i + b)) / (grid.x(i + a) - grid.x(i + b));
            out += w * row[i + a];
        }
        return out;
    }

    /// V(z, t_n) = Y(growth·z, t_n)/growth.
    double price(double z, std::size_t n = 0) const {
        const double g = growth.at(n);
        return y_at(g * z, n) / g;
    }
};

namespace detail {

/// Solves a tridiagonal system in place (Thomas). lower[0] and upper[n-1] are ignored.
inline void thomas(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                   std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

inline double checked_d(const DiffusionProblem& p, double y, double t) {
    const double d = p.diffusion(y, t);
    if (!std::isfinite(d) || d < 0.0) {
        std::ostringstream os;
        os << "diffusion coefficient D(" << y << ", " << t << ") = " << d << " must be finite and >= 0";
        throw domain_error(os.str());
    }
    return d;
}

} // namespace detail

/// Marches ½D∂²Y + ∂_tY = 0 backward from the payoff. FTCS is refused when 2(½D_max)Δt/(Δx)² > 1.
inline ValueSurface solve_pde(const DiffusionProblem& p, const PdeGrid& grid, Scheme scheme) {
    grid.validate();
    if (!(p.T > p.t0)) throw parameter_error("solve_pde: T must exceed t0");
    const std::size_t nx = grid.n_x, nt = grid.n_t;
    const double dx = grid.dx();
    ValueSurface s;
    s.grid = grid;
    s.t0 = p.t0;
    s.T = p.T;
    const double dt = s.dt();
    std::vector<double> ys(nx);
    for (std::size_t j = 0; j < nx; ++j) ys[j] = grid.x(j);

    // Heat coefficient a = ½D, sampled where each scheme uses it.
    auto coeff = [&](std::size_t n_hi) {
        const double t = scheme == Scheme::Ftcs ? s.time(n_hi) : 0.5 * (s.time(n_hi) + s.time(n_hi - 1));
        std::vector<double> a(nx);
        for (std::size_t j = 0; j < nx; ++j) a[j] = 0.5 * detail::checked_d(p, ys[j], t);
        return a;
    };

    if (scheme == Scheme::Ftcs) {
        double a_max = 0.0;
        for (std::size_t n = nt; n >= 1; --n) {
            const auto a = coeff(n);
            a_max = std::max(a_max, *std::max_element(a.begin() + 1, a.end() - 1));
        }
        if (a_max > 0.0) {
            const double ratio = 2.0 * a_max * dt / (dx * dx);
            if (ratio > 1.0) {
                std::ostringstream os;
                os << std::setprecision(6) << "FTCS unstable: 2DΔt/(Δx)² ≤ 1 violated (2DΔt/(Δx)² = " << ratio
                   << " with D = " << a_max << ", Δt = " << dt << ", Δx = " << dx
                   << "); stability limit Δt_max = " << ftcs_stability_limit(a_max, dx);
                throw stability_error(os.str());
            }
        }
    }

    s.growth.resize(nt + 1);
    for (std::size_t n = 0; n <= nt; ++n) s.growth[n] = p.growth(s.time(n));
    s.y_values.assign(nt + 1, std::vector<double>(nx));
    auto& last = s.y_values[nt];
    for (std::size_t j = 0; j < nx; ++j) last[j] = p.payoff(ys[j]);

    auto lower_bc = [&](double t) { return p.lower_boundary ? p.lower_boundary(t) : p.payoff(grid.x_min); };
    auto upper_bc = [&](double t) { return p.upper_boundary ? p.upper_boundary(t) : p.payoff(grid.x_max); };

    const double inv = dt / (dx * dx);
    for (std::size_t n = nt; n >= 1; --n) {
        const auto& hi = s.y_values[n];
        auto& lo = s.y_values[n - 1];
        const double t_lo = s.time(n - 1);
        const auto a = coeff(n);
        if (scheme == Scheme::Ftcs) {
            for (std::size_t j = 1; j + 1 < nx; ++j)
                lo[j] = hi[j] + a[j] * inv * (hi[j + 1] - 2.0 * hi[j] + hi[j - 1]);
            lo[0] = lower_bc(t_lo);
            lo[nx - 1] = upper_bc(t_lo);
        } else {
            const std::size_t m = nx - 2;
            std::vector<double> l(m), d(m), u(m), rhs(m);
            const double b_lo = lower_bc(t_lo), b_hi = upper_bc(t_lo);
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t j = i + 1;
                const double c = 0.5 * a[j] * inv;
                l[i] = -c;
                d[i] = 1.0 + 2.0 * c;
                u[i] = -c;
                rhs[i] = hi[j] + c * (hi[j + 1] - 2.0 * hi[j] + hi[j - 1]);
            }
            rhs[0] += 0.5 * a[1] * inv * b_lo;
            rhs[m - 1] += 0.5 * a[nx - 2] * inv * b_hi;
            detail::thomas(l, d, u, rhs);
            lo[0] = b_lo;
            lo[nx - 1] = b_hi;
            for (std::size_t i = 0; i < m; ++i) lo[i + 1] = rhs[i];
        }
    }
    return s;
}

/// Grid in y spanning forward·e^{±width·σ√τ}, the transformed image of the usual price window.
inline PdeGrid bs_grid(double z, double sigma, double r, double tau, std::size_t n_x, std::size_t n_t,
                       double width = 6.0) {
    if (!(z > 0.0) || !(sigma > 0.0) || !(tau > 0.0))
        throw parameter_error("bs_grid: spot, volatility and time to expiry must be positive");
    const double fwd = z * std::exp(r * tau);
    const double w = width * sigma * std::sqrt(tau);
    return PdeGrid{fwd * std::exp(-w), fwd * std::exp(w), n_x, n_t};
}

} // namespace phyn
