#include "nakasim/secmath.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <string>

namespace nakasim::secmath {

namespace {

void require_magnification(double e) {
    if (!(std::isfinite(e) && e >= 1.0)) throw DomainError("magnification factor e must be >= 1");
}

}  // namespace

double f_beta(double beta, double e) {
    require_magnification(e);
    const double pole = 1.0 / (1.0 + e);
    if (!(beta >= 0.0 && beta < pole)) {
        throw DomainError("f_beta: beta must lie in [0, 1/(1+e)), got " + std::to_string(beta));
    }
    return e * beta * (1.0 - beta) / (1.0 - beta * (1.0 + e));
}

SecurityVerdict is_secure(double beta, double rho, double delta_s, double e) {
    require_magnification(e);
    if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("is_secure: beta must lie in [0,1)");
    if (!(rho > 0.0)) throw DomainError("is_secure: rho must be positive");
    if (!(delta_s >= 0.0)) throw DomainError("is_secure: delta must be non-negative");

    SecurityVerdict v;
    v.beta_max = beta_max(rho, delta_s, e);
    if (beta >= 1.0 / (1.0 + e)) {
        v.lhs = std::numeric_limits<double>::infinity();
        v.secure = false;
        return v;
    }
    v.lhs = f_beta(beta, e) * rho * delta_s;
    v.secure = v.lhs < 1.0;
    return v;
}

double beta_max(double rho, double delta_s, double e) {
    require_magnification(e);
    if (!(rho > 0.0)) throw DomainError("beta_max: rho must be positive");
    if (!(delta_s >= 0.0)) throw DomainError("beta_max: delta must be non-negative");
    const double c = e * rho * delta_s;
    const double s = c + 1.0 + e;
    return 2.0 / (s + std::sqrt(s * s - 4.0 * c));
}

double effective_p_star(const Characterization& ch) {
    ch.validate();
    double p = 0.0;
    for (const auto& [q, c] : ch.entries) p += q * c;
    return std::clamp(p, 0.0, 1.0);
}

CorruptionSample sample_corruption(std::uint64_t n_val, const Characterization& ch, std::mt19937_64& rng) {
    if (n_val < 1) throw DomainError("sample_corruption: n_val must be >= 1");
    ch.validate();
    std::vector<double> cumulative;
    cumulative.reserve(ch.entries.size());
    double acc = 0.0;
    for (const auto& entry : ch.entries) {
        acc += entry.c;
        cumulative.push_back(acc);
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CorruptionSample out;
    for (std::uint64_t i = 0; i < n_val; ++i) {
        const double u = unit(rng) * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        const double q = ch.entries[static_cast<std::size_t>(it - cumulative.begin())].q;
        if (unit(rng) < q) ++out.corrupted;
    }
    out.fraction = static_cast<double>(out.corrupted) / static_cast<double>(n_val);
    return out;
}

CorruptionSample sample_corruption(std::uint64_t n_val, const Characterization& ch, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_corruption(n_val, ch, rng);
}

CorruptionSample sample_corruption_binomial(std::uint64_t n_val, double p_star, std::mt19937_64& rng) {
    if (n_val < 1) throw DomainError("sample_corruption: n_val must be >= 1");
    if (!(p_star >= 0.0 && p_star <= 1.0)) throw DomainError("p_star must lie in [0,1]");
    std::binomial_distribution<std::uint64_t> dist(n_val, p_star);
    CorruptionSample out;
    out.corrupted = dist(rng);
    out.fraction = static_cast<double>(out.corrupted) / static_cast<double>(n_val);
    return out;
}

// ---------------------------------------------------------------------------
// Binomial distribution

namespace {

// log(n!) - [(n+1/2) log n - n + log sqrt(2 pi)]
double stirlerr(double n) {
    constexpr double s0 = 1.0 / 12.0;
    constexpr double s1 = 1.0 / 360.0;
    constexpr double s2 = 1.0 / 1260.0;
    constexpr double s3 = 1.0 / 1680.0;
    constexpr double s4 = 1.0 / 1188.0;
    if (n <= 15.0) {
        const long double ln = static_cast<long double>(n);
        const long double v =
            std::lgammal(ln + 1.0L) - (ln + 0.5L) * std::log(ln) + ln - 0.918938533204672741780329736406L;
        return static_cast<double>(v);
    }
    const double nn = n * n;
    if (n > 500.0) return (s0 - s1 / nn) / n;
    if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
    if (n > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// Deviance term x log(x/np) + np - x, without cancellation near x = np.
double bd0(double x, double np) {
    if (std::abs(x - np) < 0.1 * (x + np)) {
        double v = (x - np) / (x + np);
        double s = (x - np) * v;
        double ej = 2.0 * x * v;
        v = v * v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v;
            const double s1 = s + ej / static_cast<double>(2 * j + 1);
            if (s1 == s) return s1;
            s = s1;
        }
        return s;
    }
    return x * std::log(x / np) + np - x;
}

}  // namespace

double log_binomial_pmf(std::uint64_t k, std::uint64_t n, double p) {
    if (k > n) return -std::numeric_limits<double>::infinity();
    const double q = 1.0 - p;
    const double dn = static_cast<double>(n);
    const double dk = static_cast<double>(k);
    if (p == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (p == 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
    if (k == 0) {
        if (n == 0) return 0.0;
        return p < 0.1 ? -bd0(dn, dn * q) - dn * p : dn * std::log(q);
    }
    if (k == n) {
        return q < 0.1 ? -bd0(dn, dn * p) - dn * q : dn * std::log(p);
    }
    const double lc =
        stirlerr(dn) - stirlerr(dk) - stirlerr(dn - dk) - bd0(dk, dn * p) - bd0(dn - dk, dn * q);
    const double lf = std::log(2.0 * std::numbers::pi) + std::log(dk) + std::log1p(-dk / dn);
    return lc - 0.5 * lf;
}

double binomial_cdf_recursive(std::int64_t k, std::uint64_t n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial_cdf: p must lie in [0,1]");
    if (k < 0) return 0.0;
    const auto uk = static_cast<std::uint64_t>(k);
    if (uk >= n) return 1.0;
    if (p == 0.0) return 1.0;
    if (p == 1.0) return 0.0;
    const double q = 1.0 - p;
    const double dn = static_cast<double>(n);
    constexpr double kEps = 1e-17;

    if (static_cast<double>(uk) < dn * p) {
        // Lower tail, summed downward from k; terms shrink geometrically.
        double sum = 1.0;
        double term = 1.0;
        for (std::uint64_t i = uk; i > 0; --i) {
            term *= static_cast<double>(i) / (dn - static_cast<double>(i) + 1.0) * (q / p);
            sum += term;
            if (term < kEps * sum) break;
        }
        return std::min(1.0, std::exp(log_binomial_pmf(uk, n, p) + std::log(sum)));
    }
    // Upper tail from k+1 upward, then complement.
    double sum = 1.0;
    double term = 1.0;
    for (std::uint64_t i = uk + 1; i < n; ++i) {
        term *= (dn - static_cast<double>(i)) / (static_cast<double>(i) + 1.0) * (p / q);
        sum += term;
        if (term < kEps * sum) break;
    }
    const double upper = std::exp(log_binomial_pmf(uk + 1, n, p) + std::log(sum));
    return std::clamp(1.0 - upper, 0.0, 1.0);
}

double binomial_cdf_ibeta(std::int64_t k, std::uint64_t n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial_cdf: p must lie in [0,1]");
    if (k < 0) return 0.0;
    const auto uk = static_cast<std::uint64_t>(k);
    if (uk >= n) return 1.0;
    if (p == 0.0) return 1.0;
    if (p == 1.0) return 0.0;
    // F(k; n, p) = 1 - I_p(k+1, n-k)
    return boost::math::ibetac(static_cast<double>(uk) + 1.0, static_cast<double>(n - uk), p);
}

double binomial_cdf(std::int64_t k, std::uint64_t n, double p) {
    return n <= kRecursionLimit ? binomial_cdf_recursive(k, n, p) : binomial_cdf_ibeta(k, n, p);
}

std::uint64_t nakamoto_coefficient(std::uint64_t n_val, double rho, double delta_s, double e) {
    const double g = std::floor(beta_max(rho, delta_s, e) * static_cast<double>(n_val));
    return std::min<std::uint64_t>(static_cast<std::uint64_t>(g), n_val);
}

double security_probability(std::uint64_t n_val, double p_star, double rho, double delta_s, double e) {
    if (n_val < 1) throw DomainError("security_probability: n_val must be >= 1");
    if (!(p_star >= 0.0 && p_star <= 1.0))
        throw DomainError("security_probability: p_star must lie in [0,1]");
    const auto g = nakamoto_coefficient(n_val, rho, delta_s, e);
    return binomial_cdf(static_cast<std::int64_t>(g), n_val, p_star);
}

double chernoff_bound_raw(std::uint64_t n_val, double p_star, double eps) {
    if (!(eps >= 0.0 && eps < p_star)) throw DomainError("chernoff_bound: requires 0 <= eps < p_star");
    return 2.0 * std::exp(-static_cast<double>(n_val) * eps * eps / (3.0 * p_star));
}

double chernoff_bound(std::uint64_t n_val, double p_star, double eps) {
    return std::clamp(chernoff_bound_raw(n_val, p_star, eps), 0.0, 1.0);
}

std::vector<std::uint64_t> log_grid(std::uint64_t n_lo, std::uint64_t n_hi, int points_per_decade) {
    if (n_lo < 1 || n_hi < n_lo) throw DomainError("log_grid: empty range");
    if (points_per_decade < 1) throw DomainError("log_grid: points_per_decade must be positive");
    std::vector<std::uint64_t> grid;
    const double lo = std::log10(static_cast<double>(n_lo));
    const double hi = std::log10(static_cast<double>(n_hi));
    const auto steps = static_cast<long>(std::ceil((hi - lo) * points_per_decade - 1e-9));
    for (long i = 0; i <= steps; ++i) {
        const double x = std::min(hi, lo + static_cast<double>(i) / points_per_decade);
        auto n = static_cast<std::uint64_t>(std::llround(std::pow(10.0, x)));
        n = std::clamp(n, n_lo, n_hi);
        if (grid.empty() || grid.back() != n) grid.push_back(n);
    }
    if (grid.back() != n_hi) grid.push_back(n_hi);
    return grid;
}

Turnaround turnaround(double p_star, double rho, double e, const DelayFn& delay_fn, std::uint64_t n_lo,
                      std::uint64_t n_hi, int points_per_decade) {
    if (n_lo < 1 || n_hi < n_lo) throw DomainError("turnaround: empty range");
    if (points_per_decade < 20) throw DomainError("turnaround: need at least 20 points per decade");
    Turnaround best{0, -1.0};
    for (std::uint64_t n : log_grid(n_lo, n_hi, points_per_decade)) {
        const double p = security_probability(n, p_star, rho, delay_fn(static_cast<double>(n)), e);
        if (p >= best.p_peak) best = {n, p};
    }
    return best;
}

TolerableDelay max_tolerable_delay(std::uint64_t n_val, double p_star, double rho, double e, double target) {
    if (!(target > 0.0 && target < 1.0)) throw DomainError("max_tolerable_delay: target must lie in (0,1)");
    auto prob = [&](double delta) { return security_probability(n_val, p_star, rho, delta, e); };

    if (prob(0.0) < target) return {0.0, TolerableDelay::Status::Unreachable};

    constexpr double kHorizon = 1e15;
    double lo = 0.0;
    double hi = 1.0;
    while (prob(hi) >= target) {
        lo = hi;
        hi *= 2.0;
        if (hi > kHorizon) {
            return {std::numeric_limits<double>::infinity(), TolerableDelay::Status::Unbounded};
        }
    }
    while (hi - lo > kDelayToleranceS) {
        const double mid = 0.5 * (lo + hi);
        if (prob(mid) >= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, TolerableDelay::Status::Bounded};
}

double adversarial_delay(double n, DelayFit fit, double nt_max_s) {
    if (!(n >= 1.0)) throw DomainError("adversarial_delay: n must be >= 1");
    if (!(nt_max_s >= 0.0)) throw DomainError("adversarial_delay: nt_max must be >= 0");
    return std::max(0.0, fit.a * std::log(n) + fit.b + nt_max_s);
}

}  // namespace nakasim::secmath
