#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <set>

#include "nakasim/netmodel.hpp"

using namespace nakasim;

namespace {

ScenarioConfig small(std::uint32_t n_val, std::uint32_t n_zp = 0, std::uint32_t d_out = 8) {
    auto cfg = preset(Chain::Bitcoin);
    cfg.n_val = n_val;
    cfg.n_zp = n_zp;
    cfg.d_out = d_out;
    return cfg;
}

Topology line(std::uint32_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    std::vector<RegionId> regions(n, RegionId{0});
    return make_topology(edges, regions, {});
}

}  // namespace

TEST_CASE("default network matrices") {
    const auto net = default_network();
    REQUIRE(net.regions.size() == 7);
    CHECK(net.regions[3] == "AS");
    CHECK(net.regions[4] == "AP");
    const double diag[] = {24, 12, 30, 24, 36, 18, 30};
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(net.latency_ms[i][i] == diag[i]);
        CHECK(net.download_Bps[i] == doctest::Approx(kDefaultDownloadFactor * net.upload_Bps[i]));
    }
    CHECK(net.upload_Bps[0] == 6.8e6);
    CHECK(net.upload_Bps[6] == 2.4e6);
    double total = 0;
    for (double w : net.region_weights) total += w;
    CHECK(total == doctest::Approx(1.0));
    CHECK_NOTHROW(validate_network(net));
}

TEST_CASE("link delay is latency plus transmission") {
    const auto net = default_network();
    NodeProfile na{NodeId{0}, Role::Validator, RegionId{0}, 0.5, false};
    NodeProfile eu{NodeId{1}, Role::Validator, RegionId{1}, 0.5, false};
    // 800 kB over the 6.8 MB/s NA uplink: 117.6 ms, rounded up.
    CHECK(transmission_ms(na, na, 800'000, net, false) == 118);
    CHECK(link_delay_ms(na, na, 800'000, net, false) == 24 + 118);
    // Bottleneck is the EU uplink (4.8 MB/s); latency is the slower direction.
    CHECK(link_delay_ms(eu, na, 800'000, net, false) == 70 + 167);
    CHECK(link_delay_ms(na, eu, 0, net, false) == 70);
    // Overlay: 10 ms plus 6.4 ms at 1 Gb/s.
    CHECK(link_delay_ms(na, eu, 800'000, net, true) == 10 + 7);
}

TEST_CASE("generated topology shape") {
    const auto cfg = small(500, 100);
    const auto t = build_topology(cfg, 42);
    REQUIRE(t.size() == 600);
    std::size_t zero_power = 0;
    double power = 0.0;
    for (std::uint32_t u = 0; u < t.size(); ++u) {
        const auto& out = t.outbound[u];
        CHECK(out.size() == cfg.d_out);
        std::set<NodeId> distinct(out.begin(), out.end());
        CHECK(distinct.size() == out.size());
        CHECK(distinct.count(NodeId{u}) == 0);
        for (NodeId v : out) {
            CHECK(std::binary_search(t.neighbors[u].begin(), t.neighbors[u].end(), v));
            CHECK(std::binary_search(t.neighbors[v.value].begin(), t.neighbors[v.value].end(), NodeId{u}));
        }
        if (t.profiles[u].role == Role::ZeroPower) {
            ++zero_power;
            CHECK(t.profiles[u].relative_power == 0.0);
        }
        power += t.profiles[u].relative_power;
    }
    CHECK(zero_power == 100);
    CHECK(power == doctest::Approx(1.0));
    CHECK(is_connected(t));
}

TEST_CASE("topology is a pure function of the seed") {
    const auto cfg = small(300);
    const auto a = build_topology(cfg, 7);
    const auto b = build_topology(cfg, 7);
    const auto c = build_topology(cfg, 8);
    CHECK(a.outbound == b.outbound);
    CHECK(a.neighbors == b.neighbors);
    CHECK(a.outbound != c.outbound);
}

TEST_CASE("dense corner cases") {
    const auto t = build_topology(small(5, 0, 4), 1);
    for (const auto& nb : t.neighbors) CHECK(nb.size() == 4);
    CHECK_THROWS_AS(build_topology(small(5, 0, 5), 1), ConfigError);
    CHECK_THROWS_AS(build_topology(small(1, 0, 1), 1), ConfigError);
}

TEST_CASE("region assignment follows the weights") {
    const auto cfg = small(20000);
    const auto t = build_topology(cfg, 3);
    std::vector<double> counts(7, 0.0);
    for (const auto& p : t.profiles) counts[p.region.value] += 1.0;
    double chi2 = 0.0;
    for (std::size_t r = 0; r < 7; ++r) {
        const double expect = cfg.network.region_weights[r] * 20000.0;
        chi2 += (counts[r] - expect) * (counts[r] - expect) / expect;
    }
    boost::math::chi_squared dist(6);
    CHECK(chi2 < boost::math::quantile(dist, 0.999));
}

TEST_CASE("overlay links join validators only") {
    auto cfg = small(20, 10);
    cfg.network.high_speed_overlay = true;
    const auto t = build_topology(cfg, 2);
    for (std::uint32_t u = 0; u < t.size(); ++u) {
        for (NodeId v : t.neighbors[u]) {
            const bool both =
                t.profiles[u].role == Role::Validator && t.profiles[v.value].role == Role::Validator;
            CHECK(t.is_overlay_link(NodeId{u}, v) == both);
        }
    }
    cfg.network.high_speed_overlay = false;
    const auto plain = build_topology(cfg, 2);
    CHECK_FALSE(plain.is_overlay_link(NodeId{0}, plain.neighbors[0][0]));
}

TEST_CASE("bfs and diameter on known graphs") {
    const auto l = line(10);
    const auto d = bfs_distances(l, NodeId{0});
    CHECK(d[9] == 9);
    CHECK(estimate_diameter(l) == 9);
    // Double sweep finds the exact diameter of a path even in sampled mode.
    CHECK(estimate_diameter(line(3000), 1, 100, 2) == 2999);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> ring;
    for (std::uint32_t i = 0; i < 12; ++i) ring.emplace_back(i, (i + 1) % 12);
    const auto r = make_topology(ring, std::vector<RegionId>(12), {});
    CHECK(estimate_diameter(r) == 6);

    const auto split = make_topology(std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 1}, {2, 3}},
                                     std::vector<RegionId>(4), {});
    CHECK_FALSE(is_connected(split));
    CHECK_THROWS(estimate_diameter(split));
    CHECK_THROWS_AS(make_topology(std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 0}},
                                  std::vector<RegionId>(2), {}),
                    std::invalid_argument);
}

TEST_CASE("sampled diameter never exceeds the exact one") {
    const auto t = build_topology(small(1500), 9);
    const auto exact = estimate_diameter(t, 1, 2000);
    const auto sampled = estimate_diameter(t, 1, 100, 8);
    CHECK(sampled <= exact);
    CHECK(sampled + 1 >= exact);
}
