#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "phyn/errors.hpp"

namespace phyn {

using Rational = boost::multiprecision::cpp_rational;

/// P(a girl | at least one boy) for two children.
inline Rational boy_girl_conditional() { return Rational(2, 3); }

/// Exact count over the four equally likely families; `conditioned` restricts to families with a boy.
inline Rational boy_girl_enumeration(bool conditioned = true) {
    int kept = 0, girl = 0;
    for (int fam = 0; fam < 4; ++fam) {
        const bool b0 = fam & 1, b1 = fam & 2; // bit set = boy
        if (conditioned && !(b0 || b1)) continue;
        ++kept;
        girl += !(b0 && b1);
    }
    return Rational(girl, kept);
}

/// Expected fair-coin tosses until k heads in a row, from the absorbing chain on
/// states 0..k (current run length): E_i = 1 + ½E_{i+1} + ½E_0, E_k = 0.
inline Rational expected_tosses_for_run(int k) {
    if (k < 1) throw domain_error("expected_tosses_for_run: run length must be at least 1");
    // E_i = a + b·E_0, walking down from E_k = 0
    Rational a = 0, b = 0;
    const Rational half(1, 2);
    for (int i = k - 1; i >= 0; --i) {
        a = 1 + half * a;
        b = half * b + half;
    }
    return a / (1 - b);
}

/// Σ_n Q(n) with Q(n) = P(no run of k heads in n tosses), generated by
/// Q(n) = Q(n−1) − Q(n−k−1)/2^{k+1}. Summation stops once the geometric tail is below `tol`.
inline std::pair<double, double> expected_tosses_by_survival(int k, double tol = 1e-15) {
    if (k < 1) throw domain_error("expected_tosses_by_survival: run length must be at least 1");
    std::vector<double> q;
    const double c = std::ldexp(1.0, -(k + 1));
    double sum = 0.0;
    for (std::size_t n = 0;; ++n) {
        double v;
        if (n < static_cast<std::size_t>(k)) v = 1.0;
        else if (n == static_cast<std::size_t>(k)) v = 1.0 - std::ldexp(1.0, -k);
        else v = q[n - 1] - c * q[n - k - 1];
        q.push_back(v);
        sum += v;
        if (n > static_cast<std::size_t>(2 * k)) {
            const double ratio = v / q[n - 1];
            const double tail = v * ratio / (1.0 - ratio);
            if (ratio < 1.0 && tail < tol * sum) return {sum, tail};
        }
        if (n > 100000000) throw degeneracy_error("expected_tosses_by_survival: series did not converge");
    }
}

/// Scale-function form of P(x hits a before −b), dx = m dt + dz, started at 0.
inline double hit_closed_form(double a, double b, double m) {
    if (!(a > 0.0 && b > 0.0)) throw domain_error("hit_a_before_b: levels must be positive");
    if (m == 0.0) return b / (a + b);
    const double eb = std::expm1(2.0 * m * b), ea = std::expm1(-2.0 * m * a);
    if (std::isinf(eb) || std::isinf(ea)) return m > 0 ? 1.0 : 0.0;
    return eb / (eb - ea);
}

/// Symmetric one-step probability Q(0; x; −x) = e^{mx}/(2cosh mx).
inline double symmetric_hit(double x, double m) { return 1.0 / (1.0 + std::exp(-2.0 * m * x)); }

/// Integer grid (A, B) with a/A = b/B, found from the continued-fraction search on a/b.
inline std::optional<std::pair<long, long>> commensurate_grid(double a, double b, long max_nodes = 100000) {
    const double r = a / b;
    for (long den = 1; den <= max_nodes; ++den) {
        const double num = std::round(r * static_cast<double>(den));
        if (num >= 1.0 && std::abs(r * den - num) <= 1e-12 * std::max(1.0, r * den)) {
            if (num + den > max_nodes) return std::nullopt;
            return std::make_pair(static_cast<long>(num), den);
        }
    }
    return std::nullopt;
}

/// Recursive route on a commensurate grid with spacing g: each interior level is left
/// through a neighbour with the symmetric probability, h_i = p h_{i+1} + (1−p) h_{i−1},
/// h_{−B} = 0, h_A = 1. Each h_i is carried as an affine map of the unknown h_{−B+1}.
inline double hit_recursive(long A, long B, double g, double m) {
    const double p = symmetric_hit(g, m);
    double a0 = 0.0, b0 = 0.0, a1 = 0.0, b1 = 1.0; // h_{−B}, h_{−B+1} as a + b·c
    for (long i = -B + 1; i < A; ++i) {
        const double a2 = (a1 - (1.0 - p) * a0) / p, b2 = (b1 - (1.0 - p) * b0) / p;
        a0 = a1, b0 = b1, a1 = a2, b1 = b2;
    }
    const double c = (1.0 - a1) / b1;
    // h_0 is B steps above the lower barrier; re-walk to it
    double x0 = 0.0, x1 = c;
    for (long i = -B + 1; i < 0; ++i) {
        const double x2 = (x1 - (1.0 - p) * x0) / p;
        x0 = x1, x1 = x2;
    }
    return x1;
}

struct HitProbability {
    double closed_form;
    std::optional<double> recursive; ///< empty when the levels are not commensurate
    bool commensurate() const { return recursive.has_value(); }
};

inline HitProbability hit_a_before_b(double a, double b, double m) {
    HitProbability h{hit_closed_form(a, b, m), std::nullopt};
    if (m == 0.0) {
        h.recursive = h.closed_form;
        return h;
    }
    if (auto grid = commensurate_grid(a, b)) {
        h.recursive = hit_recursive(grid->first, grid->second, a / grid->first, m);
        if (std::abs(*h.recursive - h.closed_form) > 1e-10 * std::max(1e-300, h.closed_form) + 1e-13)
            throw degeneracy_error("hit_a_before_b: recursive and closed-form routes disagree");
    }
    return h;
}

/// Admissible ρ13 range given ρ12, ρ23 (positive semidefinite 3×3 correlation).
inline std::pair<double, double> correlation_bounds(double rho12, double rho23) {
    if (!(std::abs(rho12) <= 1.0 && std::abs(rho23) <= 1.0))
        throw domain_error("correlation_bounds: correlations must lie in [−1, 1]");
    const double c = rho12 * rho23;
    const double s = std::sqrt(std::max(0.0, (1.0 - rho12 * rho12) * (1.0 - rho23 * rho23)));
    return {c - s, c + s};
}

/// E[min of N iid U(0,1)].
inline Rational expected_min_uniform(std::uint64_t n) {
    if (n < 1) throw domain_error("expected_min_uniform: N must be at least 1");
    return Rational(1, n + 1);
}

/// Expected number of clusters of N cars entering a one-lane road at iid speeds: H_N,
/// summed over the common denominator lcm(1..N).
inline Rational expected_clusters(std::uint64_t n) {
    if (n < 1) throw domain_error("expected_clusters: N must be at least 1");
    using boost::multiprecision::cpp_int;
    cpp_int lcm = 1;
    for (std::uint64_t i = 2; i <= n; ++i) {
        const auto r = static_cast<std::uint64_t>(lcm % i);
        lcm *= i / std::gcd(r, i);
    }
    cpp_int num = 0;
    for (std::uint64_t i = 1; i <= n; ++i) num += lcm / i;
    return Rational(num, lcm);
}

} // namespace phyn
