#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "phyn/lattice/tree.hpp"

namespace phyn {

inline constexpr std::size_t max_filtration_depth = 24;

struct LedgerEntry {
    double stock = 0.0; ///< S at the node
    double bond = 1.0;  ///< B at the node
    double value = 0.0; ///< claim value at the node
    double phi = 0.0;   ///< stock units held over the next step (terminal: inherited)
    double psi = 0.0;   ///< bond units held over the next step (terminal: inherited)
};

/// Node-indexed replication strategy. Recombining: nodes[k][j], j = up-moves.
/// Filtration: nodes[k][path], path bits below k.
struct ReplicationLedger {
    bool filtration = false;
    std::vector<std::vector<LedgerEntry>> nodes;

    std::size_t up_child(std::size_t k, std::size_t i) const { return filtration ? (i | (std::size_t{1} << k)) : i + 1; }
    std::size_t down_child(std::size_t, std::size_t i) const { return i; }
    std::size_t parent(std::size_t k, std::size_t i) const {
        return filtration ? (i & ~(std::size_t{1} << (k - 1))) : (i == 0 ? 0 : i - 1);
    }
};

struct TreePrice {
    double value;
    ReplicationLedger ledger;
};

/// Stock price on a filtration path after k steps.
inline double path_price(const BinomialTree& tree, std::uint32_t path, std::size_t k) {
    const auto mask = k >= 32 ? ~0u : ((1u << k) - 1u);
    const int ups = std::popcount(path & mask);
    return tree.s0() * std::pow(tree.up(), ups) * std::pow(tree.down(), static_cast<double>(k) - ups);
}

namespace detail {
inline void fill_hedge(LedgerEntry& e, const LedgerEntry& up, const LedgerEntry& down) {
    e.phi = (up.value - down.value) / (up.stock - down.stock);
    e.psi = (e.value - e.phi * e.stock) / e.bond;
}
} // namespace detail

/// European backward induction f_now = e^{−rδt}[q f_up + (1−q) f_down] with the
/// replicating (φ, ψ) at every node.
inline TreePrice price_european(const BinomialTree& tree, const TreeClaim& claim) {
    const std::size_t n = tree.n_steps();
    const double disc = std::exp(-tree.rate() * tree.dt());
    ReplicationLedger L;
    L.filtration = claim.filtration_mode();
    if (L.filtration && n > max_filtration_depth)
        throw parameter_error("filtration-mode claims are limited to depth " + std::to_string(max_filtration_depth));
    if (!L.filtration && !claim.payoff) throw parameter_error("price_european: claim has no payoff");
    L.nodes.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t width = L.filtration ? (std::size_t{1} << k) : k + 1;
        L.nodes[k].resize(width);
        for (std::size_t i = 0; i < width; ++i) {
            auto& e = L.nodes[k][i];
            e.stock = L.filtration ? path_price(tree, static_cast<std::uint32_t>(i), k) : tree.price(k, i);
            e.bond = tree.bond(k);
        }
    }
    for (std::size_t i = 0; i < L.nodes[n].size(); ++i) {
        auto& e = L.nodes[n][i];
        e.value = L.filtration ? claim.path_payoff(static_cast<std::uint32_t>(i), n) : claim.payoff(e.stock);
        if (!std::isfinite(e.value)) throw domain_error("price_european: payoff is not finite on a terminal node");
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t i = 0; i < L.nodes[k].size(); ++i) {
            auto& e = L.nodes[k][i];
            const auto& up = L.nodes[k + 1][L.up_child(k, i)];
            const auto& dn = L.nodes[k + 1][L.down_child(k, i)];
            const double q = risk_neutral_q(e.stock, up.stock, dn.stock, tree.rate(), tree.dt());
            e.value = disc * (q * up.value + (1.0 - q) * dn.value);
            detail::fill_hedge(e, up, dn);
        }
    }
    for (std::size_t i = 0; i < L.nodes[n].size(); ++i) {
        auto& e = L.nodes[n][i];
        const auto& p = L.nodes[n - 1][L.parent(n, i)];
        e.phi = p.phi;
        e.psi = p.psi;
    }
    const double v = L.nodes[0][0].value;
    return {v, std::move(L)};
}

/// American backward induction: node value = max(exercise, continuation).
inline double price_american(const BinomialTree& tree, const TreeClaim& claim) {
    if (claim.filtration_mode()) throw unsupported_error("price_american: only path-independent claims");
    const std::size_t n = tree.n_steps();
    const double disc = std::exp(-tree.rate() * tree.dt());
    const double q = tree.q();
    std::vector<double> v(n + 1);
    for (std::size_t j = 0; j <= n; ++j) v[j] = claim.payoff(tree.price(n, j));
    for (std::size_t k = n; k-- > 0;)
        for (std::size_t j = 0; j <= k; ++j)
            v[j] = std::max(claim.payoff(tree.price(k, j)), disc * (q * v[j + 1] + (1.0 - q) * v[j]));
    return v[0];
}

inline double price(const BinomialTree& tree, const TreeClaim& claim) {
    return claim.exercise == Exercise::American ? price_american(tree, claim) : price_european(tree, claim).value;
}

/// max |Δφ·S + Δψ·B| over every interior rebalancing (each node against each child).
inline double self_financing_residual(const ReplicationLedger& L) {
    double worst = 0.0;
    for (std::size_t k = 0; k + 2 < L.nodes.size(); ++k)
        for (std::size_t i = 0; i < L.nodes[k].size(); ++i) {
            const auto& p = L.nodes[k][i];
            for (std::size_t c : {L.up_child(k, i), L.down_child(k, i)}) {
                const auto& e = L.nodes[k + 1][c];
                worst = std::max(worst, std::abs((e.phi - p.phi) * e.stock + (e.psi - p.psi) * e.bond));
            }
        }
    return worst;
}

/// max |φS + ψB − claim| over terminal nodes, using the holdings set one step earlier.
inline double replication_residual(const ReplicationLedger& L) {
    double worst = 0.0;
    const std::size_t k = L.nodes.size() - 2;
    for (std::size_t i = 0; i < L.nodes[k].size(); ++i) {
        const auto& p = L.nodes[k][i];
        for (std::size_t c : {L.up_child(k, i), L.down_child(k, i)}) {
            const auto& e = L.nodes[k + 1][c];
            worst = std::max(worst, std::abs(p.phi * e.stock + p.psi * e.bond - e.value));
        }
    }
    return worst;
}

} // namespace phyn
