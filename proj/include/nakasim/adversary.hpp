// Network-layer adversary: corrupted nodes hold back messages on a fixed
// subset of their connections. Delays are additive; nothing is dropped or forged.

#pragma once

#include <cstdint>
#include <vector>

#include "nakasim/model.hpp"
#include "nakasim/netmodel.hpp"

namespace nakasim {

struct AdversaryAssignment {
    std::vector<bool> corrupted;  // per node
    // delayed[u][i] refers to topology.neighbors[u][i]; only corrupted nodes
    // have any entry set.
    std::vector<std::vector<bool>> delayed;
    SimTimeMs nt_delay_ms = 0;
    bool delay_all_messages = false;

    std::size_t corrupted_count() const;
    bool is_delayed(std::uint32_t from, std::size_t neighbor_index) const {
        return !delayed.empty() && delayed[from][neighbor_index];
    }
};

/// Each node is corrupted independently with probability p_hat; every
/// corrupted node marks ceil(p_con * degree) of its neighbours, chosen
/// uniformly once for the whole run. A disabled config yields no corruption.
AdversaryAssignment assign_corruption(const Topology& topology, const AdversaryConfig& cfg,
                                      std::uint64_t seed);

/// base_ms + nt_delay_ms on a marked link, base_ms otherwise.
inline SimTimeMs delayed_link_delay(SimTimeMs base_ms, bool link_marked, SimTimeMs nt_delay_ms) {
    return link_marked ? base_ms + nt_delay_ms : base_ms;
}

}  // namespace nakasim
