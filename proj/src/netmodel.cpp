#include "nakasim/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "nakasim/random.hpp"

namespace nakasim {

NetworkConfig default_network() {
    NetworkConfig net;
    net.regions = {"NA", "EU", "SA", "AS", "AP", "JAP", "AUS"};
    // Rows are origin regions in the same order as the columns.
    net.latency_ms = {
        {24, 70, 79, 115, 140, 79, 122},    //
        {70, 12, 161, 129, 97, 152, 140},   //
        {79, 128, 30, 195, 207, 176, 201},  //
        {122, 129, 195, 24, 54, 24, 129},   //
        {122, 97, 207, 54, 36, 42, 85},     //
        {103, 152, 176, 48, 42, 18, 183},   //
        {134, 158, 201, 128, 85, 192, 30},  //
    };
    // MB/s, 1 MB = 10^6 bytes.
    const double upload_mbps[] = {6.8, 4.8, 2.7, 4.8, 13.7, 6.8, 2.4};
    for (double mb : upload_mbps) {
        net.upload_Bps.push_back(mb * 1e6);
        net.download_Bps.push_back(mb * 1e6 * kDefaultDownloadFactor);
    }
    // Approximate share of reachable nodes per region; see docs/config.md.
    net.region_weights = {0.33, 0.48, 0.02, 0.05, 0.07, 0.03, 0.02};
    net.verification_delay_ms = 50;
    net.high_speed_overlay = false;
    return net;
}

void validate_network(const NetworkConfig& net) {
    const std::size_t r = net.regions.size();
    if (r == 0) throw ConfigError("network.regions must not be empty", std::nullopt, "network.regions");
    if (net.latency_ms.size() != r)
        throw ConfigError("network.latency_ms must be a square matrix over regions", std::nullopt,
                          "network.latency_ms");
    for (const auto& row : net.latency_ms) {
        if (row.size() != r)
            throw ConfigError("network.latency_ms must be a square matrix over regions", std::nullopt,
                              "network.latency_ms");
        for (double v : row) {
            if (!std::isfinite(v) || v < 0.0)
                throw ConfigError("network.latency_ms entries must be >= 0", std::nullopt,
                                  "network.latency_ms");
        }
    }
    if (net.upload_Bps.size() != r || net.download_Bps.size() != r) {
        throw ConfigError("network.upload_Bps/download_Bps need one entry per region", std::nullopt,
                          "network.upload_Bps");
    }
    for (std::size_t i = 0; i < r; ++i) {
        if (!(std::isfinite(net.upload_Bps[i]) && net.upload_Bps[i] > 0.0) ||
            !(std::isfinite(net.download_Bps[i]) && net.download_Bps[i] > 0.0)) {
            throw ConfigError("network bandwidths must be positive", std::nullopt, "network.upload_Bps");
        }
    }
    if (net.region_weights.size() != r)
        throw ConfigError("network.region_weights needs one entry per region", std::nullopt,
                          "network.region_weights");
    double total = 0.0;
    for (double w : net.region_weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw ConfigError("network.region_weights must be non-negative", std::nullopt,
                              "network.region_weights");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ConfigError("network.region_weights must sum to 1 (got " + std::to_string(total) + ")",
                          std::nullopt, "network.region_weights");
    }
    if (net.verification_delay_ms < 0)
        throw ConfigError("network.verification_delay_ms must be >= 0", std::nullopt,
                          "network.verification_delay_ms");
}

namespace {

void build_neighbor_lists(Topology& t) {
    const std::size_t n = t.outbound.size();
    t.neighbors.assign(n, {});
    for (std::uint32_t u = 0; u < n; ++u) {
        for (NodeId v : t.outbound[u]) {
            t.neighbors[u].push_back(v);
            t.neighbors[v.value].push_back(NodeId{u});
        }
    }
    for (auto& nb : t.neighbors) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
}

void assign_equal_power(std::vector<NodeProfile>& profiles) {
    const auto validators = std::count_if(profiles.begin(), profiles.end(),
                                          [](const NodeProfile& p) { return p.role == Role::Validator; });
    for (auto& p : profiles) {
        p.relative_power = p.role == Role::Validator ? 1.0 / static_cast<double>(validators) : 0.0;
    }
}

Topology build_once(const ScenarioConfig& cfg, std::uint64_t seed) {
    const std::uint32_t n = cfg.num_nodes();
    const std::uint32_t d = cfg.d_out;
    Topology t;
    t.overlay = cfg.network.high_speed_overlay;
    t.profiles.resize(n);

    std::mt19937_64 role_rng(stream_seed(seed, Stream::Roles));
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), role_rng);
    for (std::uint32_t i = 0; i < n; ++i) {
        t.profiles[i].id = NodeId{i};
        t.profiles[i].role = Role::Validator;
    }
    for (std::uint32_t i = 0; i < cfg.n_zp; ++i) t.profiles[order[i]].role = Role::ZeroPower;
    assign_equal_power(t.profiles);

    std::mt19937_64 region_rng(stream_seed(seed, Stream::Regions));
    std::discrete_distribution<std::uint32_t> region_dist(cfg.network.region_weights.begin(),
                                                          cfg.network.region_weights.end());
    for (auto& p : t.profiles) p.region = RegionId{region_dist(region_rng)};

    std::mt19937_64 rng(stream_seed(seed, Stream::Topology));
    t.outbound.assign(n, {});
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 2);
    std::vector<std::uint32_t> pool;
    for (std::uint32_t u = 0; u < n; ++u) {
        auto& out = t.outbound[u];
        out.reserve(d);
        if (d <= 32 && 2ull * d < n) {
            while (out.size() < d) {
                std::uint32_t v = pick(rng);
                if (v >= u) ++v;  // skip self
                if (std::find(out.begin(), out.end(), NodeId{v}) == out.end()) out.push_back(NodeId{v});
            }
        } else {
            pool.clear();
            for (std::uint32_t v = 0; v < n; ++v) {
                if (v != u) pool.push_back(v);
            }
            for (std::uint32_t k = 0; k < d; ++k) {
                std::uniform_int_distribution<std::size_t> rest(k, pool.size() - 1);
                std::swap(pool[k], pool[rest(rng)]);
                out.push_back(NodeId{pool[k]});
            }
        }
    }
    build_neighbor_lists(t);
    return t;
}

}  // namespace

Topology build_topology(const ScenarioConfig& cfg, std::uint64_t seed) {
    const std::uint64_t n = cfg.num_nodes();
    if (n < 2) throw ConfigError("topology needs at least 2 nodes", std::nullopt, "");
    if (cfg.d_out < 1 || cfg.d_out >= n)
        throw ConfigError("d_out must satisfy 1 <= d_out < n", std::nullopt, "d_out");
    validate_network(cfg.network);

    constexpr int kAttempts = 10;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, 0xC0FFEE, attempt);
        Topology t = build_once(cfg, s);
        if (is_connected(t)) return t;
    }
    throw std::runtime_error("could not build a connected topology after 10 attempts");
}

Topology make_topology(std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                       std::span<const RegionId> regions, std::span<const Role> roles) {
    const std::size_t n = regions.size();
    Topology t;
    t.profiles.resize(n);
    t.outbound.assign(n, {});
    for (std::uint32_t i = 0; i < n; ++i) {
        t.profiles[i].id = NodeId{i};
        t.profiles[i].region = regions[i];
        t.profiles[i].role = roles.empty() ? Role::Validator : roles[i];
    }
    for (const auto& [a, b] : edges) {
        if (a >= n || b >= n || a == b) throw std::invalid_argument("bad edge in make_topology");
        t.outbound[a].push_back(NodeId{b});
    }
    assign_equal_power(t.profiles);
    build_neighbor_lists(t);
    return t;
}

SimTimeMs transmission_ms(const NodeProfile& sender, const NodeProfile& receiver, std::uint64_t msg_bytes,
                          const NetworkConfig& cfg, bool overlay) {
    if (msg_bytes == 0) return 0;
    const double bits = static_cast<double>(msg_bytes) * 8.0;
    const double bps = overlay ? kOverlayBitsPerSecond
                               : 8.0 * std::min(cfg.upload_Bps[sender.region.value],
                                                cfg.download_Bps[receiver.region.value]);
    const double ms = bits / bps * 1000.0;
    return static_cast<SimTimeMs>(std::ceil(ms - 1e-9));
}

SimTimeMs link_delay_ms(const NodeProfile& sender, const NodeProfile& receiver, std::uint64_t msg_bytes,
                        const NetworkConfig& cfg, bool overlay) {
    SimTimeMs propagation = kOverlayLatencyMs;
    if (!overlay) {
        const auto s = sender.region.value;
        const auto r = receiver.region.value;
        propagation = std::llround(std::max(cfg.latency_ms[s][r], cfg.latency_ms[r][s]));
    }
    return propagation + transmission_ms(sender, receiver, msg_bytes, cfg, overlay);
}

std::vector<int> bfs_distances(const Topology& t, NodeId source) {
    std::vector<int> dist(t.size(), -1);
    std::vector<std::uint32_t> frontier{source.value};
    dist[source.value] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const std::uint32_t u = frontier[head];
        for (NodeId v : t.neighbors[u]) {
            if (dist[v.value] < 0) {
                dist[v.value] = dist[u] + 1;
                frontier.push_back(v.value);
            }
        }
    }
    return dist;
}

bool is_connected(const Topology& t) {
    if (t.size() == 0) return true;
    const auto dist = bfs_distances(t, NodeId{0});
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

namespace {

// Farthest node and its distance; throws if some node is unreachable.
std::pair<std::uint32_t, int> farthest(const Topology& t, NodeId source) {
    const auto dist = bfs_distances(t, source);
    std::pair<std::uint32_t, int> best{source.value, 0};
    for (std::uint32_t v = 0; v < dist.size(); ++v) {
        if (dist[v] < 0) throw std::runtime_error("diameter of a disconnected topology is undefined");
        if (dist[v] > best.second) best = {v, dist[v]};
    }
    return best;
}

}  // namespace

std::uint32_t estimate_diameter(const Topology& t, std::uint64_t seed, std::size_t exact_limit, int sweeps) {
    const std::size_t n = t.size();
    if (n <= 1) return 0;
    int diameter = 0;
    if (n <= exact_limit) {
        for (std::uint32_t s = 0; s < n; ++s) diameter = std::max(diameter, farthest(t, NodeId{s}).second);
        return static_cast<std::uint32_t>(diameter);
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    for (int i = 0; i < sweeps; ++i) {
        const auto [u, du] = farthest(t, NodeId{pick(rng)});
        const auto [w, dw] = farthest(t, NodeId{u});
        (void)w;
        diameter = std::max({diameter, du, dw});
    }
    return static_cast<std::uint32_t>(diameter);
}

}  // namespace nakasim
