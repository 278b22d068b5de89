#pragma once

#include <ostream>

#include "phyn/lattice/pricing.hpp"

namespace phyn {

/// CSV with columns step,node,stock,bond,value,phi,psi.
inline void write_ledger_csv(std::ostream& os, const ReplicationLedger& L) {
    const auto old = os.precision(17);
    os << "step,node,stock,bond,value,phi,psi\n";
    for (std::size_t k = 0; k < L.nodes.size(); ++k)
        for (std::size_t i = 0; i < L.nodes[k].size(); ++i) {
            const auto& e = L.nodes[k][i];
            os << k << ',' << i << ',' << e.stock << ',' << e.bond << ',' << e.value << ',' << e.phi << ',' << e.psi
               << '\n';
        }
    os.precision(old);
}

} // namespace phyn
