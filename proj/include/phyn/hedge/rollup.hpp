#pragma once

#include <sstream>
#include <vector>

#include "phyn/errors.hpp"
#include "phyn/rates/curve.hpp"

namespace phyn {

struct Payment {
    double amount;
    double time;
};

/// Single payment at T equivalent to the stream: X = Σ X_i/P(T_i,T), each payment reinvested in the T-bond at
/// the forward price P(T_i,T) = P(0,T)/P(0,T_i).
inline double rollup_payments(const std::vector<Payment>& payments, const DiscountCurve& curve, double T) {
    double x = 0.0;
    for (std::size_t i = 0; i < payments.size(); ++i) {
        const auto& p = payments[i];
        if (p.time > T || p.time < 0.0) {
            std::ostringstream os;
            os << "rollup_payments: payment " << i << " at t = " << p.time << " is outside [0, " << T << "]";
            throw domain_error(os.str());
        }
        x += p.amount / curve.discount(p.time, T);
    }
    return x;
}

} // namespace phyn
