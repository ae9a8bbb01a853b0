// Deterministic discrete-event simulation of block production and gossip.
//
// One run is a single sequential event loop over a global timeline ordered by
// (fire time, insertion sequence). Runs share no mutable state, so many can
// execute concurrently on different threads.

#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "nakasim/adversary.hpp"
#include "nakasim/model.hpp"
#include "nakasim/netmodel.hpp"

namespace nakasim {

enum class MessageKind : std::uint8_t {
    Inv,
    GetData,
    FullBlock,
    NewBlockMsg,
    NewBlockHashesMsg,
    CmpctBlock,
    GetBlockTxn,
    BlockTxn,
    SendCmpct,
};

std::string_view to_string(MessageKind k);

/// Messages that carry block payload and therefore occupy the sender's uplink.
constexpr bool is_block_bearing(MessageKind k) {
    return k == MessageKind::FullBlock || k == MessageKind::NewBlockMsg || k == MessageKind::CmpctBlock ||
           k == MessageKind::BlockTxn;
}

std::uint64_t message_size_bytes(MessageKind k, std::uint64_t block_size, const GossipConfig& gossip);

/// Number of neighbours that receive the full block under hybrid push.
inline std::size_t hybrid_push_fanout(std::size_t degree) {
    return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(degree))));
}

enum class EventKind : std::uint8_t { BlockGenerated, MessageDelivered, TimeoutFired };

struct Event {
    SimTimeMs fire_at_ms = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::BlockGenerated;
    MessageKind message = MessageKind::Inv;
    std::uint32_t node = 0;   // node the event fires on
    std::uint32_t from = 0;   // sender, for deliveries
    std::uint32_t block = 0;  // block id, for deliveries and timeouts
    std::uint32_t aux = 0;    // request serial, for timeouts
};

/// Min-ordered by (fire_at_ms, seq); seq is assigned on push.
class Timeline {
public:
    std::uint64_t push(Event e);
    Event pop();
    bool empty() const { return queue_.empty(); }
    std::size_t size() const { return queue_.size(); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.fire_at_ms != b.fire_at_ms ? a.fire_at_ms > b.fire_at_ms : a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t next_seq_ = 0;
};

/// Longest-chain rule: adopt iff strictly higher; the first seen wins ties.
inline bool fork_choice(const Block& current_tip, const Block& candidate) {
    return candidate.height > current_tip.height;
}

/// Exponential block-generation delay with rate rho * relative_power, in
/// whole milliseconds (rounded up).
template <class Rng>
SimTimeMs sample_next_block_time(const NodeProfile& node, double rho, Rng& rng) {
    if (node.role != Role::Validator || !(node.relative_power > 0.0)) {
        throw std::invalid_argument("only validators with positive power produce blocks");
    }
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
    std::exponential_distribution<double> dist(rho * node.relative_power);
    return static_cast<SimTimeMs>(std::ceil(dist(rng) * kMsPerSecond));
}

struct BlockRecord {
    Block block;
    std::vector<SimTimeMs> received_at;  // per node, -1 if never received
    // Per node: obtained only as the missing parent of a later block while the
    // node already held a block at this height. Empty means none.
    std::vector<bool> refetched;
    bool stale = false;
};

struct MetricsSummary {
    double delta_max_s = 0.0;
    double delta_avg_s = 0.0;
    double delta_p90_s = 0.0;
    double stale_rate = 0.0;
};

struct MessageRecord {
    SimTimeMs sent_at_ms = 0;
    SimTimeMs arrives_at_ms = 0;
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    MessageKind kind = MessageKind::Inv;
    std::uint32_t block = 0;
};

struct RunMetrics {
    std::vector<BlockRecord> per_block;  // genesis excluded
    MetricsSummary summary;
    bool partial = false;
    std::uint64_t trace_hash = 0;
    std::uint64_t events_processed = 0;
    std::size_t corrupted_nodes = 0;
    SimTimeMs end_time_ms = 0;
    std::vector<MessageRecord> messages;  // only with RunOptions::record_messages
};

/// Delta_max is the largest (last reception - creation) over non-stale
/// blocks; Delta_avg and the nearest-rank 90th percentile run over every
/// (non-stale block, non-miner node) latency. Refetched pairs are skipped:
/// their timing reflects the next block's arrival, not propagation.
MetricsSummary reduce_metrics(std::span<const BlockRecord> per_block);

/// Field-wise mean.
MetricsSummary mean_metrics(std::span<const MetricsSummary> runs);

struct RunOptions {
    bool record_messages = false;
    // Replaces the assignment derived from scenario.adversary.
    std::optional<AdversaryAssignment> adversary;
    // Genesis miner; random when unset.
    std::optional<std::uint32_t> genesis_miner;
    // Overrides for hand-built traces: fixed creation times (ms) and miners
    // for blocks 1..k, replacing the Poisson production process.
    std::vector<std::pair<SimTimeMs, std::uint32_t>> scripted_blocks;
};

/// Simulates until num_blocks blocks are produced and propagated, or until
/// 10x the expected production time. Deterministic given (scenario, topology,
/// seed). `partial` is set if a best-chain block never reached every node.
RunMetrics run(const ScenarioConfig& scenario, const Topology& topology, std::uint64_t seed,
               const RunOptions& options = {});

/// run_id,seed,n_val,n_zp,protocol,blocks,delta_max_s,delta_avg_s,delta_p90_s,stale_rate,partial,trace_hash
void write_summary_csv_header(std::ostream& os);
void write_summary_csv_row(std::ostream& os, std::uint32_t run_id, std::uint64_t seed,
                           const ScenarioConfig& scenario, const RunMetrics& m);

/// run_id,block,height,miner,created_ms,stale,node,received_ms,latency_ms,refetched
void write_verbose_csv_header(std::ostream& os);
void write_verbose_csv_rows(std::ostream& os, std::uint32_t run_id, const RunMetrics& m);

}  // namespace nakasim
