#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "phyn/analytic/contracts.hpp"
#include "phyn/mathcore/linalg.hpp"
#include "phyn/mathcore/montecarlo.hpp"
#include "phyn/quizoracle/oracles.hpp"

namespace phyn {

/// One oracle paired with its verifier. Statistical rows pass when the gap is within
/// 3 standard errors; exact rows carry a deterministic tolerance (0 for rational matches).
struct QuizResult {
    std::string name;
    std::string closed_form_text; ///< exact rational where one exists
    double closed_form = 0.0;
    double verifier_estimate = 0.0;
    double verifier_error = 0.0;
    bool statistical = false;
    bool exact_match = false; ///< rational verifier reproduced the rational answer exactly
    std::string verifier;

    double gap() const { return std::abs(closed_form - verifier_estimate); }
    bool pass() const {
        if (statistical) return gap() <= 3.0 * verifier_error;
        if (!closed_form_text.empty() && verifier_error == 0.0) return exact_match;
        return gap() <= verifier_error;
    }
};

inline std::string to_text(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

namespace detail {
inline QuizResult exact_row(std::string name, const Rational& cf, const Rational& ver, std::string how) {
    QuizResult r;
    r.name = std::move(name);
    r.closed_form_text = to_text(cf);
    r.closed_form = cf.convert_to<double>();
    r.verifier_estimate = ver.convert_to<double>();
    r.exact_match = cf == ver;
    r.verifier = std::move(how);
    return r;
}

inline QuizResult mc_row(std::string name, const Rational& cf, const Estimate& e, std::string how) {
    QuizResult r;
    r.name = std::move(name);
    r.closed_form_text = to_text(cf);
    r.closed_form = cf.convert_to<double>();
    r.verifier_estimate = e.mean;
    r.verifier_error = e.std_error;
    r.statistical = true;
    r.verifier = std::move(how);
    return r;
}

inline QuizResult tol_row(std::string name, double cf, double ver, double tol, std::string how) {
    QuizResult r;
    r.name = std::move(name);
    r.closed_form = cf;
    r.verifier_estimate = ver;
    r.verifier_error = tol;
    r.verifier = std::move(how);
    return r;
}
} // namespace detail

/// Families conditioned on at least one boy, by rejection.
inline Estimate boy_girl_monte_carlo(std::size_t n, RngSeed seed) {
    return monte_carlo(n, seed, [](Rng& rng) {
        for (;;) {
            const bool b0 = rng.below(2), b1 = rng.below(2);
            if (b0 || b1) return (b0 && b1) ? 0.0 : 1.0;
        }
    });
}

inline Estimate min_uniform_monte_carlo(std::uint64_t n_vars, std::size_t n, RngSeed seed) {
    return monte_carlo(n, seed, [n_vars](Rng& rng) {
        double m = 1.0;
        for (std::uint64_t i = 0; i < n_vars; ++i) m = std::min(m, rng.uniform());
        return m;
    });
}

/// Cars enter in order; a car slower than every car ahead of it starts a new cluster.
inline Estimate clusters_monte_carlo(std::uint64_t n_cars, std::size_t n, RngSeed seed) {
    return monte_carlo(n, seed, [n_cars](Rng& rng) {
        double slowest = std::numeric_limits<double>::infinity();
        int clusters = 0;
        for (std::uint64_t i = 0; i < n_cars; ++i) {
            const double v = rng.uniform();
            if (v < slowest) {
                slowest = v;
                ++clusters;
            }
        }
        return static_cast<double>(clusters);
    });
}

/// Longest admissible ρ13 interval on a grid: the 3×3 matrix must have no eigenvalue below −tol.
inline std::pair<double, double> correlation_bounds_scan(double rho12, double rho23, double step = 1e-4,
                                                         double tol = 1e-12) {
    double lo = 2.0, hi = -2.0;
    const long n = static_cast<long>(std::llround(2.0 / step));
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    for (long i = 0; i <= n; ++i) {
        const double r13 = -1.0 + static_cast<double>(i) * step;
        Matrix c(3, 3);
        c << 1, rho12, r13, rho12, 1, rho23, r13, rho23, 1;
        es.compute(c, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() >= -tol) {
            lo = std::min(lo, r13);
            hi = std::max(hi, r13);
        }
    }
    return {lo, hi};
}

struct QuizOptions {
    RngSeed seed = default_seed;
    std::size_t mc_samples = 1000000;
};

/// All oracles with their verifiers, in a fixed order.
inline std::vector<QuizResult> run_quiz_suite(const QuizOptions& opt = {}) {
    std::vector<QuizResult> out;
    const auto s = [&](std::uint64_t k) { return RngSeed{opt.seed.value + k}; };

    out.push_back(detail::exact_row("boy_girl", boy_girl_conditional(), boy_girl_enumeration(), "enumeration"));
    out.push_back(detail::mc_row("boy_girl_mc", boy_girl_conditional(), boy_girl_monte_carlo(opt.mc_samples, s(1)),
                                 "monte carlo"));

    const Rational mv = min_variance_weights(Rational(1, 5), Rational(3, 10), Rational(1, 2));
    {
        // grid minimisation of the portfolio variance as the verifier
        double best_x = 0.0, best_v = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 1000000; ++i) {
            const double x = i * 1e-6;
            const double v = x * x * 0.04 + (1 - x) * (1 - x) * 0.09 + 2 * x * (1 - x) * 0.5 * 0.2 * 0.3;
            if (v < best_v) best_v = v, best_x = x;
        }
        auto r = detail::tol_row("min_variance_weight", mv.convert_to<double>(), best_x, 1e-6, "variance grid");
        r.closed_form_text = to_text(mv);
        out.push_back(r);
    }

    {
        const Rational e = expected_tosses_for_run(3);
        const auto [sum, tail] = expected_tosses_by_survival(3);
        auto r = detail::tol_row("three_heads", e.convert_to<double>(), sum, 1e-12 * 14 + tail, "survival recursion");
        r.closed_form_text = to_text(e);
        out.push_back(r);
    }

    {
        const auto h = hit_a_before_b(3, 5, 0.0);
        auto r = detail::tol_row("hit_3_before_-5", h.closed_form, *h.recursive, 1e-15, "grid recursion");
        r.closed_form_text = "5/8";
        r.closed_form = 0.625;
        out.push_back(r);
    }
    for (double m : {0.5, -0.5, 0.1, -0.1}) {
        const auto h = hit_a_before_b(3, 5, m);
        std::ostringstream nm;
        nm << "hit_3_before_-5_drift_" << m;
        out.push_back(detail::tol_row(nm.str(), h.closed_form, *h.recursive, 1e-12, "grid recursion"));
    }

    {
        const auto [lo, hi] = correlation_bounds(0.9, 0.8);
        const auto [slo, shi] = correlation_bounds_scan(0.9, 0.8);
        out.push_back(detail::tol_row("correlation_min", lo, slo, 1e-4, "eigenvalue scan"));
        out.push_back(detail::tol_row("correlation_max", hi, shi, 1e-4, "eigenvalue scan"));
    }

    out.push_back(detail::mc_row("min_uniform_N3", expected_min_uniform(3), min_uniform_monte_carlo(3, opt.mc_samples, s(2)),
                                 "monte carlo"));
    out.push_back(detail::mc_row("clusters_N3", expected_clusters(3), clusters_monte_carlo(3, opt.mc_samples, s(3)),
                                 "monte carlo"));
    return out;
}

} // namespace phyn
