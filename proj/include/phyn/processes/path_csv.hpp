#pragma once

#include <ostream>

#include "phyn/processes/paths.hpp"

namespace phyn {

/// CSV with columns t,W,state,zeta. With `path_id` set, a leading path column is added.
inline void write_path_csv(std::ostream& os, const SamplePath& p, bool header = true, long path_id = -1) {
    const auto old = os.precision(17);
    if (header) os << (path_id >= 0 ? "path," : "") << "t,W,state,zeta\n";
    for (std::size_t k = 0; k < p.state.size(); ++k) {
        if (path_id >= 0) os << path_id << ',';
        os << p.grid.time(k) << ',' << p.brownian[k] << ',' << p.state[k] << ',' << p.rn_weight[k] << '\n';
    }
    os.precision(old);
}

} // namespace phyn
