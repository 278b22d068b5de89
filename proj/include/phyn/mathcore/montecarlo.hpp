#pragma once

#include <cstdint>

#include "phyn/mathcore/parallel.hpp"
#include "phyn/mathcore/rng.hpp"
#include "phyn/mathcore/stats.hpp"

namespace phyn {

/// Mean and standard error of sample(rng) over n_paths, each path on its own stream.
/// Reduction runs in path order, so the result is independent of the worker count.
template <class Sampler>
Estimate monte_carlo(std::size_t n_paths, RngSeed seed, Sampler&& sample) {
    auto xs = parallel_map<double>(n_paths, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, i);
        return static_cast<double>(sample(rng));
    });
    Moments m;
    for (double x : xs) m.add(x);
    return m.mean_estimate();
}

} // namespace phyn
