#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace phyn {

/// Monte Carlo estimate with its sample standard error.
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;

    /// |mean − target| ≤ k·SE, with a tiny absolute floor for zero-variance estimates.
    bool within(double target, double k = 3.0) const {
        return std::abs(mean - target) <= k * std_error + 1e-12 * (1.0 + std::abs(target));
    }
    double z_score(double target) const { return std_error > 0 ? (mean - target) / std_error : 0.0; }
};

/// Streaming mean/variance (Welford) plus fourth central moment for the SE of the variance.
class Moments {
public:
    void add(double x) {
        const double n1 = static_cast<double>(n_);
        ++n_;
        const double n = static_cast<double>(n_);
        const double delta = x - mean_;
        const double dn = delta / n;
        const double dn2 = dn * dn;
        const double term1 = delta * dn * n1;
        mean_ += dn;
        m4_ += term1 * dn2 * (n * n - 3 * n + 3) + 6 * dn2 * m2_ - 4 * dn * m3_;
        m3_ += term1 * dn * (n - 2) - 3 * dn * m2_;
        m2_ += term1;
    }

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double stddev() const { return std::sqrt(variance()); }

    Estimate mean_estimate() const {
        return {mean_, n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0, n_};
    }

    /// Sample variance with its asymptotic standard error sqrt((μ4 − σ⁴)/n).
    Estimate variance_estimate() const {
        const double n = static_cast<double>(n_);
        const double mu2 = m2_ / n, mu4 = m4_ / n;
        const double se = std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / n);
        return {variance(), se, n_};
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
};

inline Estimate estimate_mean(std::span<const double> xs) {
    Moments m;
    for (double x : xs) m.add(x);
    return m.mean_estimate();
}

} // namespace phyn
