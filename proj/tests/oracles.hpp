// Reference computations used only by the tests. They are deliberately naive
// and share no code with the library.
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// Number of n-bit masks with exactly k bits set, counted by walking all 2^n masks.
inline std::vector<std::uint64_t> popcount_histogram(unsigned n) {
    std::vector<std::uint64_t> hist(n + 1, 0);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) ++hist[std::popcount(mask)];
    return hist;
}

// P[#corrupted <= g] by summing the probability of every corruption pattern.
inline double enumerate_at_most(const std::vector<std::uint64_t>& hist, double p, long long g) {
    const unsigned n = static_cast<unsigned>(hist.size() - 1);
    long double total = 0.0L;
    for (unsigned k = 0; k <= n && static_cast<long long>(k) <= g; ++k) {
        total += static_cast<long double>(hist[k]) * std::pow(static_cast<long double>(p), k) *
                 std::pow(1.0L - static_cast<long double>(p), n - k);
    }
    return static_cast<double>(total);
}

// Root of e*b = (1-b) / (1 + (1-b) rho delta) on [0, 1/(1+e)] by bisection.
inline double bisect_beta_max(double rho, double delta, double e) {
    auto h = [&](long double b) {
        return static_cast<long double>(e) * b - (1.0L - b) / (1.0L + (1.0L - b) * rho * delta);
    };
    long double lo = 0.0L, hi = 1.0L / (1.0L + e);
    if (h(hi) <= 0.0L) return static_cast<double>(hi);
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        (h(mid) < 0.0L ? lo : hi) = mid;
    }
    return static_cast<double>(0.5L * (lo + hi));
}

// Binomial pmf from log-gamma; fine for moderate n.
inline double binomial_pmf(unsigned long long k, unsigned long long n, double p) {
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    const long double lg = std::lgamma(static_cast<long double>(n) + 1) -
                           std::lgamma(static_cast<long double>(k) + 1) -
                           std::lgamma(static_cast<long double>(n - k) + 1);
    return static_cast<double>(std::exp(lg + k * std::log(static_cast<long double>(p)) +
                                        (n - k) * std::log1p(-static_cast<long double>(p))));
}

}  // namespace oracle
