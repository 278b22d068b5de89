#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "phyn/errors.hpp"
#include "phyn/lattice/pricing.hpp"

namespace phyn {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Stake on the first game of a best-of-(2n+1) series so that a game-by-game betting
/// strategy returns exactly ±$100 on the series: (2n)!/(2^{2n}(n!)²)·100.
inline Rational world_series_bet(unsigned n) {
    BigInt num = 1, den = 1;
    for (unsigned i = 1; i <= n; ++i) {
        num *= (n + i);  // (2n)!/n!
        den *= 4 * i;    // 2^{2n}·n!
    }
    return Rational(num * 100, den);
}

/// Generic exact backward induction for a filtration claim with constant q and no
/// discounting. Returns node values per level, values[k][path].
template <class Real, class Leaf>
std::vector<std::vector<Real>> filtration_values(std::size_t depth, Leaf&& leaf, const Real& q) {
    if (depth > max_filtration_depth)
        throw parameter_error("filtration-mode claims are limited to depth " + std::to_string(max_filtration_depth));
    std::vector<std::vector<Real>> v(depth + 1);
    v[depth].resize(std::size_t{1} << depth);
    for (std::size_t p = 0; p < v[depth].size(); ++p) v[depth][p] = leaf(static_cast<std::uint32_t>(p));
    for (std::size_t k = depth; k-- > 0;) {
        v[k].resize(std::size_t{1} << k);
        for (std::size_t p = 0; p < v[k].size(); ++p)
            v[k][p] = q * v[k + 1][p | (std::size_t{1} << k)] + (Real(1) - q) * v[k + 1][p];
    }
    return v;
}

/// Same stake from the tree: the series outcome ±$100 as a claim on 2n+1 fair games,
/// priced with q = 1/2; the bet is the value after a first-game win.
inline Rational world_series_tree_price(unsigned n) {
    const std::size_t depth = 2 * n + 1;
    auto leaf = [n](std::uint32_t path) {
        return std::popcount(path) >= static_cast<int>(n + 1) ? Rational(100) : Rational(-100);
    };
    const auto v = filtration_values<Rational>(depth, leaf, Rational(1, 2));
    return v[1][1] - v[0][0];
}

} // namespace phyn
