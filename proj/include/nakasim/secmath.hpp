// Closed-form security machinery for Nakamoto-style consensus under a
// probabilistic corruption model.
//
// Conventions: delays are in seconds, rates in blocks per second, and `e` is
// the magnification factor on adversarial power (1 for classic PoW/PoS).

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>

#include "nakasim/model.hpp"

namespace nakasim::secmath {

/// f(beta) = e*beta*(1-beta) / (1 - beta*(1+e)), defined on [0, 1/(1+e)).
/// The chain is secure iff f(beta) * rho * delta < 1.
double f_beta(double beta, double e);

struct SecurityVerdict {
    bool secure = false;
    double lhs = 0.0;  // f(beta)*rho*delta, +inf once beta >= 1/(1+e)
    double beta_max = 0.0;
};

SecurityVerdict is_secure(double beta, double rho, double delta_s, double e);

/// Largest tolerable adversarial power: the smaller root of
/// C*b^2 - (C+1+e)*b + 1 = 0 with C = e*rho*delta. Evaluated in the
/// cancellation-free form 2 / (C+1+e + sqrt((C+1+e)^2 - 4C)), which equals
/// the limit 1/(1+e) at delta = 0.
double beta_max(double rho, double delta_s, double e);

/// p* = sum_i c_i q_i.
double effective_p_star(const Characterization& ch);

struct CorruptionSample {
    std::uint64_t corrupted = 0;
    double fraction = 0.0;
};

/// Each validator draws a type by inverse CDF over the frequencies, then is
/// corrupted with that type's probability.
CorruptionSample sample_corruption(std::uint64_t n_val, const Characterization& ch, std::mt19937_64& rng);
CorruptionSample sample_corruption(std::uint64_t n_val, const Characterization& ch, std::uint64_t seed);

/// Same marginal law as sample_corruption (Binomial(n, p*)) in one draw.
CorruptionSample sample_corruption_binomial(std::uint64_t n_val, double p_star, std::mt19937_64& rng);

/// log of the binomial pmf, via the saddle-point deviance form (stable for
/// very large n).
double log_binomial_pmf(std::uint64_t k, std::uint64_t n, double p);

/// P[X <= k] for X ~ Binomial(n, p). Log-space term recursion for n <= 10^6,
/// regularized incomplete beta above.
double binomial_cdf(std::int64_t k, std::uint64_t n, double p);

/// The term-recursion route on its own (any n); exposed for cross-checks.
double binomial_cdf_recursive(std::int64_t k, std::uint64_t n, double p);
/// The incomplete-beta route on its own; exposed for cross-checks.
double binomial_cdf_ibeta(std::int64_t k, std::uint64_t n, double p);

inline constexpr std::uint64_t kRecursionLimit = 1'000'000;

/// g(n) = floor(beta_max * n_val).
std::uint64_t nakamoto_coefficient(std::uint64_t n_val, double rho, double delta_s, double e);

/// P(E_sec) = F(g(n); n_val, p*).
double security_probability(std::uint64_t n_val, double p_star, double rho, double delta_s, double e);

/// min(1, 2*exp(-n*eps^2 / (3 p*))). Requires 0 <= eps < p*.
double chernoff_bound(std::uint64_t n_val, double p_star, double eps);

/// Raw (unclamped) bound.
double chernoff_bound_raw(std::uint64_t n_val, double p_star, double eps);

using DelayFn = std::function<double(double n)>;

struct Turnaround {
    std::uint64_t n_star = 0;
    double p_peak = 0.0;
};

/// Argmax of security_probability over a log-spaced integer grid on
/// [n_lo, n_hi]; ties go to the larger n.
Turnaround turnaround(double p_star, double rho, double e, const DelayFn& delay_fn, std::uint64_t n_lo,
                      std::uint64_t n_hi, int points_per_decade = 40);

/// Log-spaced integer grid, deduplicated, always containing both ends.
std::vector<std::uint64_t> log_grid(std::uint64_t n_lo, std::uint64_t n_hi, int points_per_decade);

struct TolerableDelay {
    enum class Status { Bounded, Unbounded, Unreachable };
    double delta_s = 0.0;  // +inf when Unbounded, 0 when Unreachable
    Status status = Status::Bounded;
};

inline constexpr double kDelayToleranceS = 1e-3;

/// max{delta | security_probability(n, p*, rho, delta, e) >= target}, by
/// bisection to 1 ms.
TolerableDelay max_tolerable_delay(std::uint64_t n_val, double p_star, double rho, double e, double target);

/// Published-style regression of the benign delay, delta(n) = a ln n + b.
struct DelayFit {
    double a = 0.0;
    double b = 0.0;
};

/// a*ln(n) + b + nt_max_s, floored at 0.
double adversarial_delay(double n, DelayFit fit, double nt_max_s);

}  // namespace nakasim::secmath
