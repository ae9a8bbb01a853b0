#include <doctest.h>

#include <map>
#include <sstream>
#include <tuple>

#include "nakasim/simengine.hpp"

using namespace nakasim;

namespace {

using Edges = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

ScenarioConfig scenario(Protocol p) {
    auto cfg = preset(Chain::Bitcoin);
    cfg.protocol = p;
    cfg.gossip.missing_tx_probability = 0.0;
    return cfg;
}

Topology graph(const Edges& edges, std::vector<std::uint32_t> regions) {
    std::vector<RegionId> r;
    for (auto x : regions) r.push_back(RegionId{x});
    return make_topology(edges, r, {});
}

Topology line3() { return graph({{0, 1}, {1, 2}}, {0, 0, 0}); }

RunOptions scripted(std::vector<std::pair<SimTimeMs, std::uint32_t>> blocks, bool record = false) {
    RunOptions o;
    o.genesis_miner = 0;
    o.scripted_blocks = std::move(blocks);
    o.record_messages = record;
    return o;
}

}  // namespace

// Link NA->NA for a full block: 24 ms latency + 118 ms on the 6.8 MB/s uplink.
// Control messages: 24 + 1. Compact block (16 kB): 24 + 3. Verification: 50.

TEST_CASE("two nodes: reception equals the link delay") {
    const auto cfg = scenario(Protocol::DirectPush);
    const auto t = graph({{0, 1}}, {0, 0});
    const auto m = run(cfg, t, 1, scripted({{1000, 0}}));
    REQUIRE(m.per_block.size() == 1);
    CHECK(m.per_block[0].received_at[0] == 1000);
    CHECK(m.per_block[0].received_at[1] == 1142);
    CHECK(m.summary.delta_max_s == doctest::Approx(0.142));
    CHECK_FALSE(m.partial);
}

TEST_CASE("three-node line under each protocol") {
    struct Case {
        Protocol p;
        double missing;
        SimTimeMs at1, at2;
    };
    const Case cases[] = {
        {Protocol::DirectPush, 0.0, 1142, 1142 + 50 + 142},
        {Protocol::HybridPush, 0.0, 1142, 1142 + 50 + 142},
        {Protocol::AdvertisementBased, 0.0, 1000 + 25 + 25 + 142, 1192 + 50 + 25 + 25 + 142},
        {Protocol::CompactBlocksLow, 0.0, 1000 + 25 + 25 + 27, 1077 + 50 + 25 + 25 + 27},
        // One GetBlockTxn/BlockTxn round: 25 + (24 + 12) for 80 kB.
        {Protocol::CompactBlocksLow, 1.0, 1077 + 25 + 36, 1138 + 50 + 25 + 25 + 27 + 25 + 36},
    };
    for (const auto& c : cases) {
        CAPTURE(to_string(c.p));
        auto cfg = scenario(c.p);
        cfg.gossip.missing_tx_probability = c.missing;
        const auto m = run(cfg, line3(), 1, scripted({{1000, 0}}));
        CHECK(m.per_block[0].received_at[1] == c.at1);
        CHECK(m.per_block[0].received_at[2] == c.at2);
    }
}

TEST_CASE("block payloads queue on the sender's uplink") {
    const auto cfg = scenario(Protocol::DirectPush);
    const auto t = graph({{0, 1}, {0, 2}, {0, 3}, {0, 4}}, {0, 0, 0, 0, 0});
    const auto m = run(cfg, t, 1, scripted({{1000, 0}}));
    std::vector<SimTimeMs> got(m.per_block[0].received_at.begin() + 1, m.per_block[0].received_at.end());
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<SimTimeMs>{1142, 1260, 1378, 1496});
}

TEST_CASE("hybrid push sends the block to ceil(sqrt(degree)) neighbours") {
    CHECK(hybrid_push_fanout(9) == 3);
    CHECK(hybrid_push_fanout(10) == 4);
    CHECK(hybrid_push_fanout(1) == 1);

    const auto cfg = scenario(Protocol::HybridPush);
    Edges star;
    for (std::uint32_t i = 1; i <= 9; ++i) star.emplace_back(0, i);
    const auto t = graph(star, std::vector<std::uint32_t>(10, 0));
    const auto m = run(cfg, t, 1, scripted({{1000, 0}}, true));
    int full = 0, hashes = 0, replies = 0;
    for (const auto& msg : m.messages) {
        if (msg.from != 0) continue;
        if (msg.kind == MessageKind::NewBlockMsg) ++full;
        if (msg.kind == MessageKind::NewBlockHashesMsg) ++hashes;
        if (msg.kind == MessageKind::FullBlock) ++replies;
    }
    CHECK(full == 3);
    CHECK(hashes == 6);
    CHECK(replies == 6);  // announced leaves fetch the block
    for (SimTimeMs at : m.per_block[0].received_at) CHECK(at >= 0);
}

TEST_CASE("compact blocks negotiate once per connection and send small sketches") {
    const auto cfg = scenario(Protocol::CompactBlocksLow);
    const auto m = run(cfg, line3(), 1, scripted({{1000, 0}}, true));
    int sendcmpct = 0, cmpct = 0;
    for (const auto& msg : m.messages) {
        if (msg.kind == MessageKind::SendCmpct) {
            ++sendcmpct;
            CHECK(msg.sent_at_ms == 0);
        }
        if (msg.kind == MessageKind::CmpctBlock) ++cmpct;
    }
    CHECK(sendcmpct == 4);
    CHECK(cmpct == 2);
    CHECK(message_size_bytes(MessageKind::CmpctBlock, 800'000, cfg.gossip) == 16'000);
    CHECK(message_size_bytes(MessageKind::BlockTxn, 800'000, cfg.gossip) == 80'000);
    CHECK(message_size_bytes(MessageKind::Inv, 800'000, cfg.gossip) == 64);
}

TEST_CASE("a timed-out request moves on to the next advertiser") {
    // 0 mines; 1 (NA) and 2 (AUS) relay to 3 (NA). 1 announces first but
    // holds the block back from 3.
    auto cfg = scenario(Protocol::AdvertisementBased);
    const auto t = graph({{0, 1}, {0, 2}, {1, 3}, {2, 3}}, {0, 0, 6, 0});
    AdversaryAssignment adv;
    adv.corrupted = {false, true, false, false};
    adv.delayed = {
        std::vector<bool>(2, false), {false, true}, std::vector<bool>(2, false), std::vector<bool>(2, false)};
    adv.nt_delay_ms = 100'000;

    for (SimTimeMs timeout : {SimTimeMs{5'000}, SimTimeMs{10'000'000}}) {
        CAPTURE(timeout);
        cfg.gossip.request_timeout_ms = timeout;
        auto opts = scripted({{1000, 0}}, true);
        opts.adversary = adv;
        const auto m = run(cfg, t, 1, opts);
        SimTimeMs first_request = -1;
        for (const auto& msg : m.messages) {
            if (msg.kind == MessageKind::GetData && msg.from == 3) {
                CHECK(msg.to == 1);
                first_request = msg.sent_at_ms;
                break;
            }
        }
        REQUIRE(first_request > 0);
        const SimTimeMs at3 = m.per_block[0].received_at[3];
        if (timeout == 5'000) {
            // GetData to AUS: 134 + 1; block back over the 2.4 MB/s AUS uplink: 134 + 334.
            CHECK(at3 == first_request + 5'000 + 135 + 468);
        } else {
            CHECK(at3 == first_request + 25 + 142 + 100'000);
        }
    }
}

TEST_CASE("fork race: stale block, refetched parent and metrics") {
    const auto cfg = scenario(Protocol::DirectPush);
    const auto m = run(cfg, line3(), 1, scripted({{1000, 0}, {1001, 2}, {100'000, 2}}));
    REQUIRE(m.per_block.size() == 3);
    const auto& b1 = m.per_block[0];
    const auto& b2 = m.per_block[1];
    const auto& b3 = m.per_block[2];
    CHECK(b1.block.height == 1);
    CHECK(b2.block.height == 1);
    CHECK(b3.block.height == 2);
    CHECK(*b3.block.parent == b2.block.id);
    CHECK(b1.stale);
    CHECK_FALSE(b2.stale);
    CHECK_FALSE(b3.stale);

    // Node 1 keeps block 1 and never forwards block 2 to node 0, which only
    // fetches it once block 3 arrives.
    CHECK(b2.received_at[1] == 1143);
    CHECK(b3.received_at[1] == 100'142);
    CHECK(b3.received_at[0] == 100'334);
    CHECK(b2.received_at[0] == 100'334 + 25 + 142);
    CHECK(b2.refetched[0]);
    CHECK_FALSE(b2.refetched[1]);

    CHECK(m.summary.stale_rate == doctest::Approx(1.0 / 3.0));
    CHECK(m.summary.delta_max_s == doctest::Approx(0.334));
    CHECK(m.summary.delta_avg_s == doctest::Approx((142 + 142 + 334) / 3.0 / 1000.0));
    CHECK_FALSE(m.partial);
}

TEST_CASE("fork choice prefers strictly higher blocks") {
    Block a, b;
    a.height = 3;
    b.height = 3;
    CHECK_FALSE(fork_choice(a, b));
    b.height = 4;
    CHECK(fork_choice(a, b));
    CHECK_FALSE(fork_choice(b, a));
}

TEST_CASE("timeline pops by time, then insertion order") {
    Timeline tl;
    for (SimTimeMs t : {5, 1, 5, 3}) {
        Event e;
        e.fire_at_ms = t;
        e.node = static_cast<std::uint32_t>(tl.size());
        tl.push(e);
    }
    std::vector<std::pair<SimTimeMs, std::uint32_t>> order;
    while (!tl.empty()) {
        const auto e = tl.pop();
        order.emplace_back(e.fire_at_ms, e.node);
    }
    CHECK(order == std::vector<std::pair<SimTimeMs, std::uint32_t>>{{1, 1}, {3, 3}, {5, 0}, {5, 2}});
}

TEST_CASE("block production times") {
    NodeProfile v{NodeId{0}, Role::Validator, RegionId{0}, 0.25, false};
    std::mt19937_64 rng(1);
    double total = 0;
    const int k = 20000;
    for (int i = 0; i < k; ++i) total += static_cast<double>(sample_next_block_time(v, 0.01, rng));
    // Mean 1 / (0.01 * 0.25) s = 400 s; standard error 400/sqrt(k).
    CHECK(std::abs(total / k - 400'000.0) < 5 * 400'000.0 / std::sqrt(k));
    NodeProfile zp{NodeId{1}, Role::ZeroPower, RegionId{0}, 0.0, false};
    CHECK_THROWS_AS(sample_next_block_time(zp, 0.01, rng), std::invalid_argument);
}

TEST_CASE("runs are reproducible and seed-sensitive") {
    auto cfg = scenario(Protocol::AdvertisementBased);
    cfg.n_val = 300;
    cfg.num_blocks = 20;
    const auto t = build_topology(cfg, 4);
    const auto a = run(cfg, t, 4);
    const auto b = run(cfg, t, 4);
    const auto c = run(cfg, t, 5);
    CHECK(a.trace_hash == b.trace_hash);
    CHECK(a.events_processed == b.events_processed);
    REQUIRE(a.per_block.size() == b.per_block.size());
    for (std::size_t i = 0; i < a.per_block.size(); ++i)
        CHECK(a.per_block[i].received_at == b.per_block[i].received_at);
    CHECK(a.trace_hash != c.trace_hash);
}

TEST_CASE("benign runs deliver every block once to every node") {
    for (auto p : {Protocol::AdvertisementBased, Protocol::DirectPush, Protocol::HybridPush,
                   Protocol::CompactBlocksLow}) {
        CAPTURE(to_string(p));
        auto cfg = preset(Chain::Cardano);
        cfg.protocol = p;
        cfg.n_val = 150;
        cfg.n_zp = 50;
        cfg.num_blocks = 30;
        const auto t = build_topology(cfg, 2);
        RunOptions opts;
        opts.record_messages = true;
        const auto m = run(cfg, t, 2, opts);
        CHECK_FALSE(m.partial);
        CHECK(m.per_block.size() == 30);
        // each node sends a given kind of payload for a block at most once per neighbour
        std::map<std::tuple<std::uint32_t, std::uint32_t, MessageKind>, std::size_t> pushes;
        for (const auto& msg : m.messages) {
            CHECK(msg.arrives_at_ms >= msg.sent_at_ms);
            if (is_block_bearing(msg.kind)) ++pushes[{msg.from, msg.block, msg.kind}];
        }
        for (const auto& [key, count] : pushes) CHECK(count <= t.neighbors[std::get<0>(key)].size());
        for (const auto& rec : m.per_block) {
            CHECK(t.profiles[rec.block.miner.value].role == Role::Validator);
            for (SimTimeMs at : rec.received_at) {
                if (!rec.stale) CHECK(at >= rec.block.created_at_ms);
            }
        }
    }
}

TEST_CASE("cutoff marks a run as partial") {
    auto cfg = scenario(Protocol::AdvertisementBased);
    cfg.n_val = 20;
    cfg.d_out = 3;
    cfg.num_blocks = 1;
    cfg.security.rho = 1.0;  // cutoff at 10 s
    cfg.adversary = {true, 1.0, 1.0, 60'000, false};
    const auto t = build_topology(cfg, 1);
    const auto m = run(cfg, t, 1);
    CHECK(m.partial);
    CHECK(m.corrupted_nodes == 20);
}

TEST_CASE("metric reduction by hand") {
    BlockRecord a;
    a.block.miner = NodeId{0};
    a.block.created_at_ms = 100;
    a.received_at = {100, 300, 1100};
    BlockRecord b = a;
    b.block.miner = NodeId{1};
    b.block.created_at_ms = 2000;
    b.received_at = {2500, 2000, 2200};
    BlockRecord s = a;
    s.stale = true;
    s.received_at = {100, 9000, 9000};
    const std::vector<BlockRecord> recs{a, b, s};
    const auto m = reduce_metrics(recs);
    // latencies: 200, 1000, 500, 200
    CHECK(m.delta_max_s == doctest::Approx(1.0));
    CHECK(m.delta_avg_s == doctest::Approx(0.475));
    CHECK(m.delta_p90_s == doctest::Approx(1.0));
    CHECK(m.stale_rate == doctest::Approx(1.0 / 3.0));

    const std::vector<MetricsSummary> runs{{1, 2, 3, 0.5}, {3, 4, 5, 0.0}};
    const auto mean = mean_metrics(runs);
    CHECK(mean.delta_max_s == 2);
    CHECK(mean.stale_rate == 0.25);
}

TEST_CASE("summary and verbose csv") {
    const auto cfg = scenario(Protocol::DirectPush);
    const auto m = run(cfg, line3(), 1, scripted({{1000, 0}}));
    std::ostringstream s;
    write_summary_csv_header(s);
    write_summary_csv_row(s, 0, 1, cfg, m);
    const auto text = s.str();
    CHECK(text.rfind("run_id,seed,n_val,n_zp,protocol,blocks,delta_max_s", 0) == 0);
    CHECK(text.find("\n0,1,1000,0,direct_push,1,0.334,") != std::string::npos);

    std::ostringstream v;
    write_verbose_csv_header(v);
    write_verbose_csv_rows(v, 0, m);
    const auto verbose = v.str();
    CHECK(std::count(verbose.begin(), verbose.end(), '\n') == 4);
}
