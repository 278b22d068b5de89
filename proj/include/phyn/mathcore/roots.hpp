#pragma once

#include <cmath>
#include <sstream>

#include "phyn/errors.hpp"

namespace phyn {

/// Root of f on [lo, hi] by bisection with secant acceleration.
/// The bracket always shrinks, so monotone brackets converge.
template <class F>
double find_root(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 500) {
    if (!(lo < hi)) {
        std::ostringstream os;
        os << "find_root: empty bracket [" << lo << ", " << hi << "]";
        throw bracket_error(os.str());
    }
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) {
        std::ostringstream os;
        os.precision(17);
        os << "find_root: no sign change on [" << lo << ", " << hi << "] (f(lo)=" << flo
           << ", f(hi)=" << fhi << ")";
        throw bracket_error(os.str());
    }
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        double x = lo - flo * (hi - lo) / (fhi - flo);
        const double width = hi - lo;
        // fall back to the midpoint when the secant lands too close to an end
        if (!(x > lo + 0.1 * width && x < hi - 0.1 * width)) x = 0.5 * (lo + hi);
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

} // namespace phyn
