#include "nakasim/model.hpp"

#include <cmath>
#include <string>

#include "nakasim/netmodel.hpp"

namespace nakasim {

namespace {

bool in_unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

void Characterization::validate() const {
    if (entries.empty()) {
        throw DomainError("characterization must have at least one entry");
    }
    double total = 0.0;
    for (const auto& [q, c] : entries) {
        if (!in_unit_interval(q) || !in_unit_interval(c)) {
            throw DomainError("characterization entries must lie in [0,1]");
        }
        total += c;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("characterization frequencies must sum to 1 (got " + std::to_string(total) + ")");
    }
}

std::string_view to_string(Protocol p) {
    switch (p) {
        case Protocol::AdvertisementBased: return "advertisement_based";
        case Protocol::DirectPush: return "direct_push";
        case Protocol::HybridPush: return "hybrid_push";
        case Protocol::CompactBlocksLow: return "compact_blocks_low";
    }
    return "unknown";
}

Protocol protocol_from_string(std::string_view name) {
    for (auto p : {Protocol::AdvertisementBased, Protocol::DirectPush, Protocol::HybridPush,
                   Protocol::CompactBlocksLow}) {
        if (to_string(p) == name) return p;
    }
    throw ConfigError("unknown protocol '" + std::string(name) + "'", std::nullopt, "");
}

std::string_view to_string(Chain c) {
    switch (c) {
        case Chain::Bitcoin: return "bitcoin";
        case Chain::Cardano: return "cardano";
        case Chain::Monero: return "monero";
        case Chain::EthereumClassic: return "ethereum_classic";
    }
    return "unknown";
}

Chain chain_from_string(std::string_view name) {
    for (auto c : kAllChains) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError(
        "unknown chain '" + std::string(name) + "' (expected bitcoin, cardano, monero or ethereum_classic)",
        std::nullopt, "");
}

double block_interval_s(Chain c) {
    switch (c) {
        case Chain::Bitcoin: return 600.0;
        case Chain::Cardano: return 20.0;
        case Chain::Monero: return 120.0;
        case Chain::EthereumClassic: return 13.0;
    }
    return 600.0;
}

Protocol chain_protocol(Chain c) {
    switch (c) {
        case Chain::Bitcoin: return Protocol::CompactBlocksLow;
        case Chain::Cardano: return Protocol::AdvertisementBased;
        case Chain::Monero: return Protocol::DirectPush;
        case Chain::EthereumClassic: return Protocol::HybridPush;
    }
    return Protocol::CompactBlocksLow;
}

ScenarioConfig preset(Chain chain) {
    ScenarioConfig cfg;
    cfg.name = std::string(to_string(chain));
    cfg.n_val = 1000;
    cfg.n_zp = 0;
    cfg.protocol = chain_protocol(chain);
    cfg.block_size_bytes = 800'000;
    cfg.security.rho = 1.0 / block_interval_s(chain);
    cfg.security.e = 1.0;
    cfg.security.corruption = Characterization::uniform(0.0);
    cfg.network = default_network();
    cfg.d_out = 8;
    cfg.seed = 1;
    cfg.num_blocks = 100;
    cfg.runs = 5;
    return cfg;
}

ScenarioConfig preset(std::string_view chain_name) { return preset(chain_from_string(chain_name)); }

void ScenarioConfig::validate() const {
    if (n_val < 1) throw ConfigError("n_val must be at least 1", std::nullopt, "n_val");
    if (num_blocks < 1) throw ConfigError("num_blocks must be at least 1", std::nullopt, "num_blocks");
    if (runs < 1) throw ConfigError("runs must be at least 1", std::nullopt, "runs");
    if (block_size_bytes < 1)
        throw ConfigError("block_size_bytes must be positive", std::nullopt, "block_size_bytes");
    const std::uint64_t n = static_cast<std::uint64_t>(n_val) + n_zp;
    if (n > 0xFFFFFFF0ull) throw ConfigError("too many nodes", std::nullopt, "");
    if (d_out < 1 || d_out >= n) {
        throw ConfigError("d_out must satisfy 1 <= d_out < n_val + n_zp (d_out=" + std::to_string(d_out) +
                              ", n=" + std::to_string(n) + ")",
                          std::nullopt, "d_out");
    }

    if (!(std::isfinite(security.rho) && security.rho > 0.0)) {
        throw ConfigError("security.rho must be positive", std::nullopt, "security.rho");
    }
    if (!(std::isfinite(security.e) && security.e >= 1.0)) {
        throw ConfigError("security.e must be >= 1", std::nullopt, "security.e");
    }
    try {
        security.corruption.validate();
    } catch (const DomainError& err) {
        throw ConfigError(std::string("security: ") + err.what(), std::nullopt, "security.p_star");
    }

    validate_network(network);

    if (!in_unit_interval(adversary.p_hat))
        throw ConfigError("adversary.p_hat must lie in [0,1]", std::nullopt, "adversary.p_hat");
    if (!in_unit_interval(adversary.p_con))
        throw ConfigError("adversary.p_con must lie in [0,1]", std::nullopt, "adversary.p_con");
    if (adversary.nt_delay_ms < 0)
        throw ConfigError("adversary.nt_delay_ms must be >= 0", std::nullopt, "adversary.nt_delay_ms");

    if (gossip.request_timeout_ms < 1)
        throw ConfigError("gossip.request_timeout_ms must be positive", std::nullopt,
                          "gossip.request_timeout_ms");
    if (!(gossip.compact_fraction > 0.0 && gossip.compact_fraction <= 1.0)) {
        throw ConfigError("gossip.compact_fraction must lie in (0,1]", std::nullopt,
                          "gossip.compact_fraction");
    }
    if (!in_unit_interval(gossip.missing_tx_probability)) {
        throw ConfigError("gossip.missing_tx_probability must lie in [0,1]", std::nullopt,
                          "gossip.missing_tx_probability");
    }
    if (!in_unit_interval(gossip.missing_tx_fraction)) {
        throw ConfigError("gossip.missing_tx_fraction must lie in [0,1]", std::nullopt,
                          "gossip.missing_tx_fraction");
    }
}

}  // namespace nakasim
