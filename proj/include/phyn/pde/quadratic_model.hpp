#pragma once

#include <cmath>
#include <functional>
#include <sstream>

#include "phyn/errors.hpp"
#include "phyn/mathcore/quadrature.hpp"
#include "phyn/pde/diffusion.hpp"

namespace phyn {

/// Stock S = S0 + α(W² − t), a martingale. Its pricing equation is 2α[z − S0 + αt]∂²V + ∂_tV = 0.
struct QuadraticModel {
    double s0 = 1.0;
    double alpha = 0.1;

    void validate(double z, double t, double T) const {
        std::ostringstream os;
        if (!(s0 > 0.0) || !(alpha > 0.0)) os << "quadratic model needs S0 > 0 and alpha > 0";
        else if (!(t <= T)) os << "quadratic model needs t <= T (t = " << t << ", T = " << T << ")";
        else if (!(T < s0 / alpha))
            os << "quadratic model needs T < S0/alpha = " << s0 / alpha << " (T = " << T << ")";
        else if (!(z - s0 + alpha * t >= 0.0))
            os << "quadratic model needs z - S0 + alpha*t >= 0 (got " << z - s0 + alpha * t << ")";
        else if (t < 0.0) os << "quadratic model needs t >= 0";
        if (!os.str().empty()) throw domain_error(os.str());
    }

    /// Problem in the form ½D∂²Y + ∂_tY = 0, D = 4α(z − S0 + αt) clipped at zero.
    DiffusionProblem diffusion_problem(std::function<double(double)> payoff, double t0, double T) const {
        DiffusionProblem p;
        p.t0 = t0;
        p.T = T;
        p.payoff = std::move(payoff);
        p.diffusion = [s0 = s0, a = alpha](double z, double t) { return std::max(0.0, 4.0 * a * (z - s0 + a * t)); };
        return p;
    }
};

struct QuadraticBranches {
    double plus = 0.0;
    double minus = 0.0;
};

/// V(z,t) for both signs ε of W_t.
inline QuadraticBranches quadratic_model_branches(const QuadraticModel& m, double z, double t, double T,
                                                  const std::function<double(double)>& f, int nodes = 200) {
    m.validate(z, t, T);
    if (t == T) return {f(z), f(z)};
    const double h = m.alpha * (T - t);
    const double root = std::sqrt((z - m.s0 + m.alpha * t) / h);
    const auto& rule = gauss_hermite(nodes);
    auto branch = [&](double eps) {
        return gaussian_expectation([&](double y) { return f(z + h * (y * y + 2.0 * eps * y * root - 1.0)); }, rule);
    };
    return {branch(1.0), branch(-1.0)};
}

inline double quadratic_model_price(const QuadraticModel& m, double z, double t, double T,
                                    const std::function<double(double)>& f, int nodes = 200) {
    const auto b = quadratic_model_branches(m, z, t, T, f, nodes);
    const double gap = std::abs(b.plus - b.minus);
    if (gap > 1e-10 * std::max(1.0, std::abs(b.plus))) {
        std::ostringstream os;
        os << "quadratic model: epsilon branches disagree by " << gap;
        throw degeneracy_error(os.str());
    }
    return 0.5 * (b.plus + b.minus);
}

} // namespace phyn
