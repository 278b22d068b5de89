#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "phyn/lattice/pricing.hpp"

namespace phyn {

/// Values on the recombining nodes, values[k][j].
using NodeProcess = std::vector<std::vector<double>>;

inline NodeProcess stock_process(const BinomialTree& t) {
    NodeProcess p(t.n_steps() + 1);
    for (std::size_t k = 0; k <= t.n_steps(); ++k)
        for (std::size_t j = 0; j <= k; ++j) p[k].push_back(t.price(k, j));
    return p;
}

inline NodeProcess bond_process(const BinomialTree& t) {
    NodeProcess p(t.n_steps() + 1);
    for (std::size_t k = 0; k <= t.n_steps(); ++k) p[k].assign(k + 1, t.bond(k));
    return p;
}

/// Price process of a path-independent claim, usable as a tradable numeraire when positive.
inline NodeProcess claim_process(const BinomialTree& t, const TreeClaim& claim) {
    const auto L = price_european(t, claim).ledger;
    NodeProcess p(L.nodes.size());
    for (std::size_t k = 0; k < L.nodes.size(); ++k)
        for (const auto& e : L.nodes[k]) p[k].push_back(e.value);
    return p;
}

/// Reprice a path-independent claim with `alt` as numeraire, V = N_now·E_N[f/N_next],
/// where E_N makes the stock and bond, in units of N, martingales. Returns the largest
/// node-wise difference against the bond-numeraire price.
inline double verify_numeraire_invariance(const BinomialTree& tree, const TreeClaim& claim, const NodeProcess& alt) {
    if (claim.filtration_mode()) throw unsupported_error("verify_numeraire_invariance: only path-independent claims");
    const std::size_t n = tree.n_steps();
    if (alt.size() != n + 1) throw parameter_error("verify_numeraire_invariance: numeraire shape mismatch");
    for (std::size_t k = 0; k <= n; ++k) {
        if (alt[k].size() != k + 1) throw parameter_error("verify_numeraire_invariance: numeraire shape mismatch");
        for (std::size_t j = 0; j <= k; ++j)
            if (!(alt[k][j] > 0.0)) {
                std::ostringstream os;
                os << "verify_numeraire_invariance: numeraire must be strictly positive, node (" << k << ", " << j
                   << ") has " << alt[k][j];
                throw parameter_error(os.str());
            }
    }
    const auto ref = price_european(tree, claim).ledger;
    std::vector<double> v(n + 1);
    for (std::size_t j = 0; j <= n; ++j) v[j] = claim.payoff(tree.price(n, j));
    double worst = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = 0; j <= k; ++j) {
            const double nn = alt[k][j], nu = alt[k + 1][j + 1], nd = alt[k + 1][j];
            const double s[3] = {tree.price(k, j) / nn, tree.price(k + 1, j + 1) / nu, tree.price(k + 1, j) / nd};
            const double b[3] = {tree.bond(k) / nn, tree.bond(k + 1) / nu, tree.bond(k + 1) / nd};
            const bool use_stock = std::abs(s[1] - s[2]) / s[0] >= std::abs(b[1] - b[2]) / b[0];
            const double* a = use_stock ? s : b;
            const double* o = use_stock ? b : s;
            const double q = (a[0] - a[2]) / (a[1] - a[2]);
            const double check = q * o[1] + (1.0 - q) * o[2] - o[0];
            if (!(q > 0.0 && q < 1.0) || std::abs(check) > 1e-9 * std::abs(o[0])) {
                std::ostringstream os;
                os << "verify_numeraire_invariance: numeraire is not a tradable at node (" << k << ", " << j << ")";
                throw parameter_error(os.str());
            }
            v[j] = nn * (q * v[j + 1] / nu + (1.0 - q) * v[j] / nd);
            worst = std::max(worst, std::abs(v[j] - ref.nodes[k][j].value));
        }
    }
    return worst;
}

} // namespace phyn
