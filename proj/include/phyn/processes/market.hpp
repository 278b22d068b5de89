#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "phyn/errors.hpp"
#include "phyn/mathcore/linalg.hpp"
#include "phyn/mathcore/normal.hpp"
#include "phyn/mathcore/rng.hpp"
#include "phyn/processes/paths.hpp"

namespace phyn {

struct MarketPriceOfRisk {
    Vector gamma;
};

namespace detail {
inline void require_invertible(const Matrix& a, const char* who) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s[0] : 0.0;
    const Eigen::Index last = s.size() - 1;
    if (smax == 0.0 || s[last] <= 1e-12 * smax) {
        std::ostringstream os;
        os << who << ": volatility matrix is singular, the market is not complete; null direction "
           << format_vector(svd.matrixV().col(last));
        throw incompleteness_error(os.str());
    }
}
} // namespace detail

/// Solve Σγ = μ − r for a square volatility matrix (rows: assets, columns: factors).
inline MarketPriceOfRisk market_price_of_risk(const Matrix& vol, const Vector& mu, double r) {
    if (vol.rows() != vol.cols() || vol.rows() != mu.size())
        throw parameter_error("market_price_of_risk: dimension mismatch");
    detail::require_invertible(vol, "market_price_of_risk");
    const Vector excess = mu.array() - r;
    return {vol.fullPivLu().solve(excess)};
}

/// For N assets driven by n < N factors: the drift conditions μ^α − r − Σ^{αi}γ^i on the
/// extra assets, where γ is fixed by the first n assets.
inline Vector degenerate_drift_residual(const Matrix& vol, const Vector& mu, double r) {
    const Eigen::Index big = vol.rows(), n = vol.cols();
    if (big <= n || mu.size() != big)
        throw parameter_error("degenerate_drift_residual: need more assets than factors");
    const Matrix top = vol.topRows(n);
    detail::require_invertible(top, "degenerate_drift_residual");
    const Vector gamma = top.fullPivLu().solve(Vector(mu.head(n).array() - r));
    return (mu.tail(big - n).array() - r).matrix() - vol.bottomRows(big - n) * gamma;
}

/// P(max_{s≤T} W_s ≥ z*) = 2(1 − Φ(z*/√T)).
inline double hit_by_time_prob(double z_star, double T) {
    if (!(T > 0.0)) throw domain_error("hit_by_time_prob: T must be positive");
    if (!(z_star >= 0.0)) throw domain_error("hit_by_time_prob: level must be nonnegative");
    return 2.0 * norm_sf(z_star / std::sqrt(T));
}

/// Correlated GBMs S^i = s0_i·exp(Σ_j vol_ij W^j + μ_i t) on independent factors W^j.
/// Returns one row per asset, n_steps+1 columns.
inline Matrix simulate_multi_gbm(const Vector& s0, const Matrix& vol, const Vector& mu, const TimeGrid& grid,
                                 Rng& rng) {
    grid.validate();
    if (vol.rows() != s0.size() || mu.size() != s0.size())
        throw parameter_error("simulate_multi_gbm: dimension mismatch");
    const double dt = grid.dt(), sq = std::sqrt(dt);
    Matrix out(s0.size(), grid.n_steps + 1);
    Vector w = Vector::Zero(vol.cols());
    out.col(0) = s0;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        for (Eigen::Index j = 0; j < w.size(); ++j) w[j] += sq * rng.normal();
        const double t = grid.time(k + 1) - grid.t0;
        out.col(k + 1) = (s0.array() * ((vol * w).array() + mu.array() * t).exp()).matrix();
    }
    return out;
}

} // namespace phyn
