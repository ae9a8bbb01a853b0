#include "nakasim/simengine.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <numeric>
#include <ostream>

#include "nakasim/random.hpp"

namespace nakasim {

std::string_view to_string(MessageKind k) {
    switch (k) {
        case MessageKind::Inv: return "inv";
        case MessageKind::GetData: return "getdata";
        case MessageKind::FullBlock: return "block";
        case MessageKind::NewBlockMsg: return "newblock";
        case MessageKind::NewBlockHashesMsg: return "newblockhashes";
        case MessageKind::CmpctBlock: return "cmpctblock";
        case MessageKind::GetBlockTxn: return "getblocktxn";
        case MessageKind::BlockTxn: return "blocktxn";
        case MessageKind::SendCmpct: return "sendcmpct";
    }
    return "unknown";
}

std::uint64_t message_size_bytes(MessageKind k, std::uint64_t block_size, const GossipConfig& gossip) {
    auto fraction_of_block = [&](double f) {
        return std::max<std::uint64_t>(
            1, static_cast<std::uint64_t>(std::ceil(f * static_cast<double>(block_size))));
    };
    switch (k) {
        case MessageKind::FullBlock:
        case MessageKind::NewBlockMsg: return block_size;
        case MessageKind::CmpctBlock: return fraction_of_block(gossip.compact_fraction);
        case MessageKind::BlockTxn: return fraction_of_block(gossip.missing_tx_fraction);
        case MessageKind::Inv:
        case MessageKind::GetData:
        case MessageKind::NewBlockHashesMsg:
        case MessageKind::GetBlockTxn:
        case MessageKind::SendCmpct: return gossip.control_message_bytes;
    }
    return gossip.control_message_bytes;
}

std::uint64_t Timeline::push(Event e) {
    e.seq = next_seq_++;
    queue_.push(e);
    return e.seq;
}

Event Timeline::pop() {
    Event e = queue_.top();
    queue_.pop();
    return e;
}

namespace {

constexpr SimTimeMs kUnknown = -1;
constexpr std::uint32_t kNoPeer = 0xFFFFFFFFu;

struct Request {
    std::uint32_t block = 0;
    std::vector<std::uint32_t> advertisers;  // in order of announcement
    std::size_t current = 0;                 // index of the peer being asked
    bool active = false;
    std::uint32_t serial = 0;
    bool parent_fetch = false;  // asked for because a child arrived first
};

struct Orphan {
    std::uint32_t block = 0;
    std::uint32_t from = 0;
};

struct NodeState {
    std::uint32_t tip = 0;
    SimTimeMs uplink_free_at = 0;
    std::vector<Request> requested;
    std::vector<Orphan> orphans;
    SplitMix64 mining_rng;
};

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (i * 8)) & 0xFFu;
        h *= 1099511628211ull;
    }
    return h;
}

class Simulation {
public:
    Simulation(const ScenarioConfig& cfg, const Topology& topo, std::uint64_t seed, const RunOptions& opts)
        : cfg_(cfg), topo_(topo), seed_(seed), opts_(opts), n_(static_cast<std::uint32_t>(topo.size())) {
        adversary_ = opts.adversary ? *opts.adversary : assign_corruption(topo, cfg.adversary, seed);
        if (!adversary_.delayed.empty() && adversary_.delayed.size() != n_) {
            throw std::invalid_argument("adversary assignment does not match topology");
        }
        metrics_.corrupted_nodes = adversary_.corrupted_count();
        target_blocks_ = opts.scripted_blocks.empty()
                             ? cfg.num_blocks
                             : static_cast<std::uint32_t>(opts.scripted_blocks.size());
        const double expected_s = static_cast<double>(cfg.num_blocks) / cfg.security.rho;
        cutoff_ms_ = static_cast<SimTimeMs>(10.0 * expected_s * kMsPerSecond);
        if (!opts.scripted_blocks.empty()) {
            cutoff_ms_ = std::max(cutoff_ms_, opts.scripted_blocks.back().first * 10 + 1);
        }
    }

    RunMetrics execute();

private:
    bool knows(std::uint32_t v, std::uint32_t b) const { return received_[b][v] != kUnknown; }

    Request* find_request(std::uint32_t v, std::uint32_t b) {
        for (auto& r : nodes_[v].requested) {
            if (r.block == b) return &r;
        }
        return nullptr;
    }

    void erase_request(std::uint32_t v, std::uint32_t b) {
        auto& rq = nodes_[v].requested;
        rq.erase(std::remove_if(rq.begin(), rq.end(), [b](const Request& r) { return r.block == b; }),
                 rq.end());
    }

    std::size_t neighbor_index(std::uint32_t from, std::uint32_t to) const {
        const auto& nb = topo_.neighbors[from];
        const auto it = std::lower_bound(nb.begin(), nb.end(), NodeId{to});
        return static_cast<std::size_t>(it - nb.begin());
    }

    void schedule_mining(std::uint32_t v, SimTimeMs now) {
        const SimTimeMs dt =
            sample_next_block_time(topo_.profiles[v], cfg_.security.rho, nodes_[v].mining_rng);
        Event e;
        e.fire_at_ms = now + dt;
        e.kind = EventKind::BlockGenerated;
        e.node = v;
        timeline_.push(e);
    }

    void send(std::uint32_t from, std::uint32_t to, MessageKind kind, std::uint32_t block,
              SimTimeMs ready_at);
    void request_block(std::uint32_t v, std::uint32_t peer, std::uint32_t b, SimTimeMs now);
    void on_announcement(std::uint32_t v, std::uint32_t from, std::uint32_t b, SimTimeMs now);
    void on_block_received(std::uint32_t v, std::uint32_t from, std::uint32_t b, SimTimeMs now);
    void integrate(std::uint32_t v, std::uint32_t b, std::uint32_t source, SimTimeMs now);
    void on_block_adopted(std::uint32_t v, std::uint32_t b, std::uint32_t source, SimTimeMs now);
    void on_timeout(std::uint32_t v, std::uint32_t b, std::uint32_t serial, SimTimeMs now);
    void on_generate(std::uint32_t v, SimTimeMs now);
    void on_deliver(const Event& e);
    std::uint32_t create_block(std::uint32_t miner, SimTimeMs now);

    const ScenarioConfig& cfg_;
    const Topology& topo_;
    std::uint64_t seed_;
    const RunOptions& opts_;
    std::uint32_t n_;
    AdversaryAssignment adversary_;
    Timeline timeline_;
    std::vector<Block> blocks_;
    std::vector<std::vector<SimTimeMs>> received_;
    std::vector<std::vector<bool>> refetched_;
    std::vector<NodeState> nodes_;
    std::uint32_t target_blocks_ = 0;
    std::uint32_t produced_ = 0;
    std::uint32_t next_serial_ = 1;
    SimTimeMs cutoff_ms_ = 0;
    RunMetrics metrics_;
};

void Simulation::send(std::uint32_t from, std::uint32_t to, MessageKind kind, std::uint32_t block,
                      SimTimeMs ready_at) {
    const auto& s = topo_.profiles[from];
    const auto& r = topo_.profiles[to];
    const bool overlay = topo_.is_overlay_link(s.id, r.id);
    const std::uint64_t bytes = message_size_bytes(kind, blocks_[block].size_bytes, cfg_.gossip);
    const SimTimeMs delay = link_delay_ms(s, r, bytes, cfg_.network, overlay);

    SimTimeMs start = ready_at;
    if (is_block_bearing(kind)) {
        // Block payloads leave one at a time over the sender's uplink.
        const SimTimeMs tx = transmission_ms(s, r, bytes, cfg_.network, overlay);
        start = std::max(ready_at, nodes_[from].uplink_free_at);
        nodes_[from].uplink_free_at = start + tx;
    }
    SimTimeMs arrival = start + delay;
    if (!adversary_.delayed.empty() && adversary_.corrupted[from] &&
        (adversary_.delay_all_messages || is_block_bearing(kind))) {
        const std::size_t idx = neighbor_index(from, to);
        const bool marked = idx < topo_.neighbors[from].size() && adversary_.is_delayed(from, idx);
        arrival = delayed_link_delay(arrival, marked, adversary_.nt_delay_ms);
    }

    Event e;
    e.fire_at_ms = arrival;
    e.kind = EventKind::MessageDelivered;
    e.message = kind;
    e.node = to;
    e.from = from;
    e.block = block;
    timeline_.push(e);
    if (opts_.record_messages) metrics_.messages.push_back({start, arrival, from, to, kind, block});
}

void Simulation::request_block(std::uint32_t v, std::uint32_t peer, std::uint32_t b, SimTimeMs now) {
    Request* req = find_request(v, b);
    if (req == nullptr) {
        nodes_[v].requested.push_back(Request{b, {}, 0, false, 0, false});
        req = &nodes_[v].requested.back();
    }
    auto it = std::find(req->advertisers.begin(), req->advertisers.end(), peer);
    if (it == req->advertisers.end()) {
        req->advertisers.push_back(peer);
        it = req->advertisers.end() - 1;
    }
    req->current = static_cast<std::size_t>(it - req->advertisers.begin());
    req->active = true;
    req->serial = next_serial_++;
    send(v, peer, MessageKind::GetData, b, now);

    Event t;
    t.fire_at_ms = now + cfg_.gossip.request_timeout_ms;
    t.kind = EventKind::TimeoutFired;
    t.node = v;
    t.block = b;
    t.aux = req->serial;
    timeline_.push(t);
}

void Simulation::on_announcement(std::uint32_t v, std::uint32_t from, std::uint32_t b, SimTimeMs now) {
    if (knows(v, b)) return;
    Request* req = find_request(v, b);
    if (req != nullptr && req->active) {
        // At most one outstanding request per block; remember the alternative.
        if (std::find(req->advertisers.begin(), req->advertisers.end(), from) == req->advertisers.end()) {
            req->advertisers.push_back(from);
        }
        return;
    }
    request_block(v, from, b, now);
}

void Simulation::on_timeout(std::uint32_t v, std::uint32_t b, std::uint32_t serial, SimTimeMs now) {
    if (knows(v, b)) return;
    Request* req = find_request(v, b);
    if (req == nullptr || !req->active || req->serial != serial) return;
    const std::size_t next = req->current + 1;
    if (next < req->advertisers.size()) {
        request_block(v, req->advertisers[next], b, now);
    } else {
        req->active = false;  // wait for the next announcement
    }
}

void Simulation::on_block_received(std::uint32_t v, std::uint32_t from, std::uint32_t b, SimTimeMs now) {
    if (knows(v, b)) return;
    received_[b][v] = now;
    if (const Request* req = find_request(v, b);
        req != nullptr && req->parent_fetch && blocks_[nodes_[v].tip].height >= blocks_[b].height) {
        // Lost a local race: the node only learns of b because a descendant won.
        refetched_[b][v] = true;
    }
    erase_request(v, b);
    const auto parent = *blocks_[b].parent;
    if (knows(v, parent)) {
        integrate(v, b, from, now);
        return;
    }
    nodes_[v].orphans.push_back({b, from});
    on_announcement(v, from, parent, now);
    if (Request* req = find_request(v, parent)) req->parent_fetch = true;
}

void Simulation::integrate(std::uint32_t v, std::uint32_t b, std::uint32_t source, SimTimeMs now) {
    if (fork_choice(blocks_[nodes_[v].tip], blocks_[b])) {
        nodes_[v].tip = b;
        on_block_adopted(v, b, source, now);
    }
    // Children that were waiting for this block.
    auto& orphans = nodes_[v].orphans;
    for (std::size_t i = 0; i < orphans.size();) {
        if (*blocks_[orphans[i].block].parent == b) {
            const Orphan child = orphans[i];
            orphans.erase(orphans.begin() + static_cast<std::ptrdiff_t>(i));
            integrate(v, child.block, child.from, now);
            i = 0;
        } else {
            ++i;
        }
    }
}

void Simulation::on_block_adopted(std::uint32_t v, std::uint32_t b, std::uint32_t source, SimTimeMs now) {
    const SimTimeMs ready = blocks_[b].miner.value == v ? now : now + cfg_.network.verification_delay_ms;
    const auto& nb = topo_.neighbors[v];
    std::vector<std::uint32_t> peers;
    peers.reserve(nb.size());
    for (NodeId peer : nb) {
        if (peer.value != source) peers.push_back(peer.value);
    }
    // Relay order is random per (node, block); a fixed order would always
    // queue the same neighbours last on the uplink.
    SplitMix64 rng(stream_seed(seed_, Stream::Gossip, v, b));
    std::shuffle(peers.begin(), peers.end(), rng);
    switch (cfg_.protocol) {
        case Protocol::AdvertisementBased:
        case Protocol::CompactBlocksLow:
            for (auto peer : peers) send(v, peer, MessageKind::Inv, b, ready);
            break;
        case Protocol::DirectPush:
            for (auto peer : peers) send(v, peer, MessageKind::FullBlock, b, ready);
            break;
        case Protocol::HybridPush: {
            const std::size_t push = std::min(peers.size(), hybrid_push_fanout(nb.size()));
            for (std::size_t i = 0; i < peers.size(); ++i) {
                send(v, peers[i], i < push ? MessageKind::NewBlockMsg : MessageKind::NewBlockHashesMsg, b,
                     ready);
            }
            break;
        }
    }
}

std::uint32_t Simulation::create_block(std::uint32_t miner, SimTimeMs now) {
    const std::uint32_t parent = nodes_[miner].tip;
    Block blk;
    blk.id = static_cast<std::uint32_t>(blocks_.size());
    blk.parent = parent;
    blk.height = blocks_[parent].height + 1;
    blk.miner = NodeId{miner};
    blk.created_at_ms = now;
    blk.size_bytes = cfg_.block_size_bytes;
    blocks_.push_back(blk);
    received_.emplace_back(n_, kUnknown);
    received_.back()[miner] = now;
    refetched_.emplace_back(n_, false);
    ++produced_;
    return blk.id;
}

void Simulation::on_generate(std::uint32_t v, SimTimeMs now) {
    if (produced_ >= target_blocks_) return;
    const std::uint32_t b = create_block(v, now);
    integrate(v, b, kNoPeer, now);
    if (opts_.scripted_blocks.empty() && produced_ < target_blocks_) schedule_mining(v, now);
}

void Simulation::on_deliver(const Event& e) {
    const std::uint32_t v = e.node;
    const std::uint32_t u = e.from;
    const std::uint32_t b = e.block;
    const SimTimeMs now = e.fire_at_ms;
    switch (e.message) {
        case MessageKind::Inv:
        case MessageKind::NewBlockHashesMsg: on_announcement(v, u, b, now); break;
        case MessageKind::GetData:
            if (knows(v, b)) {
                const auto reply = cfg_.protocol == Protocol::CompactBlocksLow ? MessageKind::CmpctBlock
                                                                               : MessageKind::FullBlock;
                send(v, u, reply, b, now);
            }
            break;
        case MessageKind::FullBlock:
        case MessageKind::NewBlockMsg:
        case MessageKind::BlockTxn: on_block_received(v, u, b, now); break;
        case MessageKind::CmpctBlock: {
            if (knows(v, b)) break;
            const double u01 = unit_from_bits(stream_seed(seed_, Stream::Gossip, 0x10000000ull + v, b));
            if (u01 < cfg_.gossip.missing_tx_probability) {
                send(v, u, MessageKind::GetBlockTxn, b, now);
            } else {
                on_block_received(v, u, b, now);
            }
            break;
        }
        case MessageKind::GetBlockTxn:
            if (knows(v, b)) send(v, u, MessageKind::BlockTxn, b, now);
            break;
        case MessageKind::SendCmpct: break;
    }
}

RunMetrics Simulation::execute() {
    nodes_.resize(n_);
    for (std::uint32_t v = 0; v < n_; ++v)
        nodes_[v].mining_rng = SplitMix64(stream_seed(seed_, Stream::Mining, v));

    std::uint32_t genesis_miner = 0;
    if (opts_.genesis_miner) {
        genesis_miner = *opts_.genesis_miner;
    } else {
        std::mt19937_64 g(stream_seed(seed_, Stream::Genesis));
        genesis_miner = std::uniform_int_distribution<std::uint32_t>(0, n_ - 1)(g);
    }
    Block genesis;
    genesis.miner = NodeId{genesis_miner};
    genesis.size_bytes = cfg_.block_size_bytes;
    blocks_.push_back(genesis);
    received_.emplace_back(n_, 0);
    refetched_.emplace_back(n_, false);

    if (cfg_.protocol == Protocol::CompactBlocksLow) {
        // Low-bandwidth compact relay is negotiated once per connection.
        for (std::uint32_t v = 0; v < n_; ++v) {
            for (NodeId peer : topo_.neighbors[v]) send(v, peer.value, MessageKind::SendCmpct, 0, 0);
        }
    }

    if (opts_.scripted_blocks.empty()) {
        for (std::uint32_t v = 0; v < n_; ++v) {
            if (topo_.profiles[v].role == Role::Validator && topo_.profiles[v].relative_power > 0.0) {
                schedule_mining(v, 0);
            }
        }
    } else {
        for (const auto& [at, miner] : opts_.scripted_blocks) {
            Event e;
            e.fire_at_ms = at;
            e.kind = EventKind::BlockGenerated;
            e.node = miner;
            timeline_.push(e);
        }
    }

    std::uint64_t hash = 1469598103934665603ull;
    while (!timeline_.empty()) {
        const Event e = timeline_.pop();
        if (e.fire_at_ms > cutoff_ms_) break;
        if (e.kind == EventKind::BlockGenerated && produced_ >= target_blocks_) continue;
        ++metrics_.events_processed;
        metrics_.end_time_ms = e.fire_at_ms;
        hash = fnv_mix(hash, static_cast<std::uint64_t>(e.fire_at_ms));
        hash =
            fnv_mix(hash, (static_cast<std::uint64_t>(e.kind) << 8) | static_cast<std::uint64_t>(e.message));
        hash = fnv_mix(hash, (static_cast<std::uint64_t>(e.node) << 32) | e.from);
        hash = fnv_mix(hash, e.block);
        switch (e.kind) {
            case EventKind::BlockGenerated: on_generate(e.node, e.fire_at_ms); break;
            case EventKind::MessageDelivered: on_deliver(e); break;
            case EventKind::TimeoutFired: on_timeout(e.node, e.block, e.aux, e.fire_at_ms); break;
        }
    }
    metrics_.trace_hash = hash;

    // Best chain: highest block, earliest creation on ties.
    std::uint32_t best = 0;
    for (std::uint32_t b = 1; b < blocks_.size(); ++b) {
        const auto& cand = blocks_[b];
        const auto& cur = blocks_[best];
        if (cand.height > cur.height ||
            (cand.height == cur.height && cand.created_at_ms < cur.created_at_ms)) {
            best = b;
        }
    }
    std::vector<bool> on_chain(blocks_.size(), false);
    for (std::optional<std::uint32_t> b = best; b; b = blocks_[*b].parent) on_chain[*b] = true;

    metrics_.per_block.reserve(blocks_.size() - 1);
    for (std::uint32_t b = 1; b < blocks_.size(); ++b) {
        BlockRecord rec;
        rec.block = blocks_[b];
        rec.received_at = std::move(received_[b]);
        rec.refetched = std::move(refetched_[b]);
        rec.stale = !on_chain[b];
        if (!rec.stale &&
            std::find(rec.received_at.begin(), rec.received_at.end(), kUnknown) != rec.received_at.end()) {
            metrics_.partial = true;
        }
        metrics_.per_block.push_back(std::move(rec));
    }
    if (produced_ < target_blocks_) metrics_.partial = true;
    metrics_.summary = reduce_metrics(metrics_.per_block);
    return std::move(metrics_);
}

}  // namespace

MetricsSummary reduce_metrics(std::span<const BlockRecord> per_block) {
    MetricsSummary out;
    if (per_block.empty()) return out;
    std::vector<SimTimeMs> latencies;
    SimTimeMs worst = 0;
    std::size_t stale = 0;
    for (const auto& rec : per_block) {
        if (rec.stale) {
            ++stale;
            continue;
        }
        for (std::size_t v = 0; v < rec.received_at.size(); ++v) {
            if (v == rec.block.miner.value || rec.received_at[v] < 0) continue;
            if (!rec.refetched.empty() && rec.refetched[v]) continue;
            const SimTimeMs lat = rec.received_at[v] - rec.block.created_at_ms;
            latencies.push_back(lat);
            worst = std::max(worst, lat);
        }
    }
    out.stale_rate = static_cast<double>(stale) / static_cast<double>(per_block.size());
    if (latencies.empty()) return out;
    out.delta_max_s = ms_to_seconds(worst);
    long double total = 0.0L;
    for (SimTimeMs l : latencies) total += static_cast<long double>(l);
    out.delta_avg_s = static_cast<double>(total / latencies.size()) / kMsPerSecond;
    const auto rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(latencies.size())));
    const auto nth = latencies.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(rank, 1) - 1);
    std::nth_element(latencies.begin(), nth, latencies.end());
    out.delta_p90_s = ms_to_seconds(*nth);
    return out;
}

MetricsSummary mean_metrics(std::span<const MetricsSummary> runs) {
    MetricsSummary out;
    if (runs.empty()) return out;
    for (const auto& m : runs) {
        out.delta_max_s += m.delta_max_s;
        out.delta_avg_s += m.delta_avg_s;
        out.delta_p90_s += m.delta_p90_s;
        out.stale_rate += m.stale_rate;
    }
    const double k = static_cast<double>(runs.size());
    out.delta_max_s /= k;
    out.delta_avg_s /= k;
    out.delta_p90_s /= k;
    out.stale_rate /= k;
    return out;
}

RunMetrics run(const ScenarioConfig& scenario, const Topology& topology, std::uint64_t seed,
               const RunOptions& options) {
    if (topology.size() < 1) throw std::invalid_argument("empty topology");
    if (!is_connected(topology)) throw std::invalid_argument("topology must be connected");
    if (scenario.num_blocks < 1) throw std::invalid_argument("num_blocks must be >= 1");
    Simulation sim(scenario, topology, seed, options);
    return sim.execute();
}

void write_summary_csv_header(std::ostream& os) {
    os << "run_id,seed,n_val,n_zp,protocol,blocks,delta_max_s,delta_avg_s,delta_p90_s,stale_rate,partial,"
          "trace_hash\n";
}

void write_summary_csv_row(std::ostream& os, std::uint32_t run_id, std::uint64_t seed,
                           const ScenarioConfig& scenario, const RunMetrics& m) {
    fmt::print(os, "{},{},{},{},{},{},{:.3f},{:.6f},{:.3f},{:.6f},{},{:016x}\n", run_id, seed, scenario.n_val,
               scenario.n_zp, to_string(scenario.protocol), m.per_block.size(), m.summary.delta_max_s,
               m.summary.delta_avg_s, m.summary.delta_p90_s, m.summary.stale_rate, m.partial ? 1 : 0,
               m.trace_hash);
}

void write_verbose_csv_header(std::ostream& os) {
    os << "run_id,block,height,miner,created_ms,stale,node,received_ms,latency_ms,refetched\n";
}

void write_verbose_csv_rows(std::ostream& os, std::uint32_t run_id, const RunMetrics& m) {
    for (const auto& rec : m.per_block) {
        for (std::size_t v = 0; v < rec.received_at.size(); ++v) {
            const SimTimeMs at = rec.received_at[v];
            const bool refetched = !rec.refetched.empty() && rec.refetched[v];
            fmt::print(os, "{},{},{},{},{},{},{},{},{},{}\n", run_id, rec.block.id, rec.block.height,
                       rec.block.miner.value, rec.block.created_at_ms, rec.stale ? 1 : 0, v, at,
                       at < 0 ? -1 : at - rec.block.created_at_ms, refetched ? 1 : 0);
        }
    }
}

}  // namespace nakasim
