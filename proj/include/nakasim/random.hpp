// Small seeded generators. Every random stream in a run is derived from the
// scenario seed plus a stream label, so draws never depend on event order.

#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace nakasim {

inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                           std::uint64_t c = 0) {
    return mix64(mix64(mix64(seed ^ mix64(a)) ^ b) ^ c);
}

/// Uniform double in [0,1) from a 64-bit hash.
inline constexpr double unit_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// 8-byte SplitMix64 engine; satisfies UniformRandomBitGenerator. Used where a
/// per-node stream is needed and mt19937_64's 2.5 KB state would dominate memory.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Stream labels for derive_seed.
enum class Stream : std::uint64_t {
    Topology = 1,
    Regions = 2,
    Roles = 3,
    Mining = 4,
    Genesis = 5,
    Corruption = 6,
    Gossip = 7,
    Targets = 8,
};

inline std::uint64_t stream_seed(std::uint64_t seed, Stream s, std::uint64_t a = 0, std::uint64_t b = 0) {
    return derive_seed(seed, static_cast<std::uint64_t>(s), a, b);
}

}  // namespace nakasim
