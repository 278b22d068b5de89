#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "phyn/errors.hpp"
#include "phyn/mathcore/linalg.hpp"

namespace phyn {

/// Adaptive 61-point Gauss-Kronrod. Infinite limits are allowed.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 20) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        std::forward<F>(f), a, b, max_depth, rel_tol);
}

/// Fixed 30-point Gauss-Legendre for smooth integrands nested inside other quadratures.
template <class F>
double integrate_fixed(F&& f, double a, double b) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss<double, 30>::integrate(std::forward<F>(f), a, b);
}

struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights; ///< for ∫ e^{−x²} g(x) dx
};

/// Gauss-Hermite nodes and weights: eigenvalues of the Jacobi matrix as starting
/// points, then Newton polishing on the orthonormal three-term recurrence.
inline GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw domain_error("gauss_hermite: need at least one node");
    Vector diag = Vector::Zero(n);
    Vector sub(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    GaussHermiteRule rule{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < n; ++i) {
        double z = es.eigenvalues()[i], pp = 0.0;
        for (int it = 0; it < 20; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double step = p1 / pp;
            z -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        rule.nodes[i] = z;
        rule.weights[i] = 2.0 / (pp * pp);
    }
    return rule;
}

/// E[g(Y)] for Y ~ N(0,1) using an n-node Gauss-Hermite rule.
template <class G>
double gaussian_expectation(G&& g, const GaussHermiteRule& rule) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * g(std::numbers::sqrt2 * rule.nodes[i]);
    return s / std::sqrt(std::numbers::pi);
}

} // namespace phyn
