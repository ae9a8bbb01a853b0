// Region-aware link model, random peer-to-peer topologies and graph diagnostics.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nakasim/model.hpp"

namespace nakasim {

inline constexpr SimTimeMs kOverlayLatencyMs = 10;
inline constexpr double kOverlayBitsPerSecond = 1e9;
inline constexpr double kDefaultDownloadFactor = 5.0;

/// Seven-region default: NA, EU, SA, AS, AP, JAP, AUS. Latencies and upload
/// throughput are the calibrated measurement tables; download is 5x upload.
NetworkConfig default_network();

/// Throws ConfigError when shapes, ranges or the weight vector are invalid.
void validate_network(const NetworkConfig& net);

struct Topology {
    // outbound[v]: the peers v dialled (exactly d_out per node).
    std::vector<std::vector<NodeId>> outbound;
    // neighbors[v]: union of inbound and outbound peers, sorted, deduplicated.
    // Connections carry traffic both ways.
    std::vector<std::vector<NodeId>> neighbors;
    std::vector<NodeProfile> profiles;
    bool overlay = false;  // validator-validator links use the high-speed overlay

    std::size_t size() const { return profiles.size(); }
    bool is_overlay_link(NodeId a, NodeId b) const {
        return overlay && profiles[a.value].role == Role::Validator &&
               profiles[b.value].role == Role::Validator;
    }
};

/// Random graph where every node dials d_out distinct uniform peers. Regions
/// are i.i.d. from region_weights, n_zp zero-power nodes are placed uniformly
/// at random and validators share power equally. Retries up to 10 derived
/// seeds if the result is disconnected.
Topology build_topology(const ScenarioConfig& cfg, std::uint64_t seed);

/// Hand-built topology, mainly for tests. Edges are treated as connections
/// (traffic flows both ways). Validators share power equally.
Topology make_topology(std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                       std::span<const RegionId> regions, std::span<const Role> roles = {});

/// Propagation plus transmission delay of one message, in ms:
/// max(lat[s][r], lat[r][s]) + ceil(bytes * 8 / min(up_s, down_r) * 1000),
/// with bandwidths in bits per second. Overlay links use 10 ms / 1 Gb/s.
SimTimeMs link_delay_ms(const NodeProfile& sender, const NodeProfile& receiver, std::uint64_t msg_bytes,
                        const NetworkConfig& cfg, bool overlay);

/// Transmission part of link_delay_ms only.
SimTimeMs transmission_ms(const NodeProfile& sender, const NodeProfile& receiver, std::uint64_t msg_bytes,
                          const NetworkConfig& cfg, bool overlay);

bool is_connected(const Topology& t);

/// Hop distances from `source` over connections; unreachable nodes get -1.
std::vector<int> bfs_distances(const Topology& t, NodeId source);

/// Exact diameter (all-pairs BFS) for n <= exact_limit, otherwise the best
/// double-sweep lower bound from `sweeps` random sources. Throws on a
/// disconnected graph.
std::uint32_t estimate_diameter(const Topology& t, std::uint64_t seed = 1, std::size_t exact_limit = 2000,
                                int sweeps = 16);

}  // namespace nakasim
