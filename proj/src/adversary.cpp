#include "nakasim/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nakasim/random.hpp"

namespace nakasim {

std::size_t AdversaryAssignment::corrupted_count() const {
    return static_cast<std::size_t>(std::count(corrupted.begin(), corrupted.end(), true));
}

AdversaryAssignment assign_corruption(const Topology& topology, const AdversaryConfig& cfg,
                                      std::uint64_t seed) {
    const std::size_t n = topology.size();
    AdversaryAssignment out;
    out.corrupted.assign(n, false);
    out.nt_delay_ms = cfg.nt_delay_ms;
    out.delay_all_messages = cfg.delay_all_messages;
    if (!cfg.enabled || cfg.p_hat <= 0.0) return out;

    std::mt19937_64 rng(stream_seed(seed, Stream::Corruption));
    std::bernoulli_distribution coin(cfg.p_hat);
    for (std::size_t v = 0; v < n; ++v) out.corrupted[v] = coin(rng);

    out.delayed.resize(n);
    std::vector<std::size_t> idx;
    for (std::size_t u = 0; u < n; ++u) {
        const std::size_t degree = topology.neighbors[u].size();
        out.delayed[u].assign(degree, false);
        if (!out.corrupted[u] || degree == 0) continue;
        const auto targets = std::min<std::size_t>(
            degree, static_cast<std::size_t>(std::ceil(cfg.p_con * static_cast<double>(degree) - 1e-12)));
        idx.resize(degree);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::mt19937_64 pick(stream_seed(seed, Stream::Targets, u));
        std::shuffle(idx.begin(), idx.end(), pick);
        for (std::size_t k = 0; k < targets; ++k) out.delayed[u][idx[k]] = true;
    }
    return out;
}

}  // namespace nakasim
