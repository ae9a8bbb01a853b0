// Shared domain vocabulary: nodes, blocks, rates and the scenario description.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nakasim {

/// Simulation time, integer milliseconds.
using SimTimeMs = std::int64_t;

inline constexpr double kMsPerSecond = 1000.0;

inline double ms_to_seconds(SimTimeMs ms) { return static_cast<double>(ms) / kMsPerSecond; }

/// Raised for invalid scenario descriptions. `line` is set when the error can
/// be traced back to a location in a configuration file.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::optional<int> line = std::nullopt,
                         std::string field = {})
        : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + what : what),
          message_(what),
          line_(line),
          field_(std::move(field)) {}

    std::optional<int> line() const { return line_; }
    /// Dotted key of the offending setting, e.g. "network.region_weights".
    const std::string& field() const { return field_; }
    const std::string& message() const { return message_; }

private:
    std::string message_;
    std::optional<int> line_;
    std::string field_;
};

/// Raised when an analytical operation is called outside its domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct NodeId {
    std::uint32_t value = 0;
    auto operator<=>(const NodeId&) const = default;
};

struct RegionId {
    std::uint32_t value = 0;
    auto operator<=>(const RegionId&) const = default;
};

enum class Role : std::uint8_t { Validator, ZeroPower };

struct NodeProfile {
    NodeId id;
    Role role = Role::Validator;
    RegionId region;
    double relative_power = 0.0;  // 0 iff ZeroPower
    bool corrupted = false;
};

struct Block {
    std::uint32_t id = 0;
    std::optional<std::uint32_t> parent;
    std::uint32_t height = 0;
    NodeId miner;
    SimTimeMs created_at_ms = 0;
    std::uint64_t size_bytes = 0;
};

/// The probabilistic corruption model: validator types given as
/// (corruption probability, type frequency) pairs.
struct Characterization {
    struct Entry {
        double q = 0.0;  // corruption probability of the type
        double c = 0.0;  // frequency of the type
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> entries;

    static Characterization uniform(double p_star) { return {{{p_star, 1.0}}}; }

    /// Throws DomainError unless entries are non-empty, in [0,1] and the
    /// frequencies sum to one.
    void validate() const;

    bool operator==(const Characterization&) const = default;
};

struct SecurityParams {
    double rho = 1.0 / 600.0;  // blocks per second
    double e = 1.0;            // magnification factor
    Characterization corruption = Characterization::uniform(0.0);

    bool operator==(const SecurityParams&) const = default;
};

enum class Protocol : std::uint8_t { AdvertisementBased, DirectPush, HybridPush, CompactBlocksLow };

std::string_view to_string(Protocol p);
Protocol protocol_from_string(std::string_view name);

struct NetworkConfig {
    std::vector<std::string> regions;
    std::vector<std::vector<double>> latency_ms;  // [origin][target]
    std::vector<double> upload_Bps;               // bytes per second
    std::vector<double> download_Bps;             // bytes per second
    std::vector<double> region_weights;
    SimTimeMs verification_delay_ms = 50;
    bool high_speed_overlay = false;  // 10 ms / 1 Gb/s links between validators

    std::size_t num_regions() const { return regions.size(); }
    bool operator==(const NetworkConfig&) const = default;
};

struct AdversaryConfig {
    bool enabled = false;
    double p_hat = 0.0;  // per-node corruption probability
    double p_con = 0.0;  // fraction of a corrupted node's neighbours that get delayed
    SimTimeMs nt_delay_ms = 0;
    // When false only block-bearing replies are held back; announcements and
    // requests travel on time.
    bool delay_all_messages = false;

    bool operator==(const AdversaryConfig&) const = default;
};

struct GossipConfig {
    SimTimeMs request_timeout_ms = 600'000;
    double compact_fraction = 0.02;
    double missing_tx_probability = 0.10;
    double missing_tx_fraction = 0.10;
    std::uint64_t control_message_bytes = 64;

    bool operator==(const GossipConfig&) const = default;
};

struct ScenarioConfig {
    std::string name;
    std::uint32_t n_val = 1;
    std::uint32_t n_zp = 0;
    Protocol protocol = Protocol::CompactBlocksLow;
    std::uint64_t block_size_bytes = 800'000;
    SecurityParams security;
    NetworkConfig network;
    AdversaryConfig adversary;
    GossipConfig gossip;
    std::uint32_t d_out = 8;
    std::uint64_t seed = 1;
    std::uint32_t num_blocks = 100;
    std::uint32_t runs = 5;

    std::uint32_t num_nodes() const { return n_val + n_zp; }

    /// Throws ConfigError on the first violated invariant.
    void validate() const;

    bool operator==(const ScenarioConfig&) const = default;
};

enum class Chain : std::uint8_t { Bitcoin, Cardano, Monero, EthereumClassic };

inline constexpr Chain kAllChains[] = {Chain::Bitcoin, Chain::Monero, Chain::Cardano, Chain::EthereumClassic};

std::string_view to_string(Chain c);
Chain chain_from_string(std::string_view name);

/// Block interval of the chain in seconds.
double block_interval_s(Chain c);
Protocol chain_protocol(Chain c);

ScenarioConfig preset(Chain chain);
ScenarioConfig preset(std::string_view chain_name);

}  // namespace nakasim
