// Sweeps, log-regression fits and the analytical reproduction pipelines.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nakasim/model.hpp"
#include "nakasim/secmath.hpp"
#include "nakasim/simengine.hpp"

namespace nakasim::experiments {

struct RegressionFit {
    double a = 0.0;  // seconds per unit of ln n
    double b = 0.0;  // seconds
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;  // (n, delta_s)
};

/// Ordinary least squares of delta on ln(n). Needs >= 3 points with n >= 2
/// and at least two distinct n.
RegressionFit fit_log_regression(std::span<const std::pair<double, double>> points);

/// Benign delay regressions measured on the real networks (seconds).
secmath::DelayFit published_max_fit(Chain c);
secmath::DelayFit published_avg_fit(Chain c);

/// Calls fn(i) for i in [0, count) on up to `jobs` threads (0 = all cores).
/// fn must not throw.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

// ---- sweeps ----

enum class SweepAxis { N, NZp, Protocol, PHat, PCon, NtDelay, Overlay };

std::string_view to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(std::string_view name);

struct SweepSpec {
    ScenarioConfig base;
    std::vector<std::uint32_t> n_values;  // n_val per point
    std::vector<std::uint64_t> seeds;
    SweepAxis vary = SweepAxis::N;
    // Values of the second axis as text (protocol names, numbers, true/false);
    // ignored when vary == N.
    std::vector<std::string> values;
    unsigned jobs = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct SweepPoint {
    std::size_t index = 0;
    ScenarioConfig config;
};

struct SweepRow {
    std::size_t point = 0;
    std::uint64_t seed = 0;
    MetricsSummary metrics;
    bool partial = false;
    std::uint64_t trace_hash = 0;
    std::string error;  // non-empty if the run failed
};

struct SweepAggregate {
    std::size_t point = 0;
    MetricsSummary mean;
    std::size_t completed = 0;
    std::size_t failed = 0;
    bool partial = false;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<SweepRow> rows;  // ordered by (point, seed position)
    std::vector<SweepAggregate> aggregates;

    bool any_partial() const;
    bool any_failed() const;
};

/// Expands a sweep into configuration points, n_values outermost.
std::vector<SweepPoint> expand_sweep(const SweepSpec& spec);

/// Runs every (point, seed) pair on a worker pool. A failing run is recorded
/// in its row and the sweep carries on.
SweepResult run_sweep(const SweepSpec& spec);

/// kind,point,n_val,n_zp,protocol,p_hat,p_con,nt_delay_ms,overlay,seed,
/// delta_max_s,delta_avg_s,delta_p90_s,stale_rate,partial,trace_hash,error
void write_sweep_csv(std::ostream& os, const SweepResult& result);

// ---- fits from sweep output ----

struct GroupFit {
    std::string group;   // protocol, or "all"
    std::string metric;  // delta_max_s / delta_avg_s
    RegressionFit fit;
};

/// Reads a sweep CSV (or any CSV with n_val and delta columns) and fits each
/// protocol group. Rows of kind "run" are ignored when mean rows exist.
std::vector<GroupFit> fit_sweep_csv(std::istream& in);
void write_fits_csv(std::ostream& os, std::span<const GroupFit> fits);

// ---- analytical tables ----

struct Table6Cell {
    Chain chain = Chain::Bitcoin;
    int delayed_blocks = 0;  // 0, 1 or 5
    double nt_s = 0.0;
    double n = 0.0;
    double delta_s = 0.0;
    double beta_max = 0.0;
};

inline constexpr double kTable6N[] = {1e1, 1e3, 1e6, 1e9};
inline constexpr int kTable6Delays[] = {0, 1, 5};

/// chain x {0, 1, 5 delayed blocks} x n in {10, 1e3, 1e6, 1e9}, using the
/// published max-delay fits and e = 1.
std::vector<Table6Cell> reproduce_table6();
void write_table6_csv(std::ostream& os, std::span<const Table6Cell> cells);
void write_table6_markdown(std::ostream& os, std::span<const Table6Cell> cells);

struct Fig1Params {
    secmath::DelayFit fit = published_max_fit(Chain::Cardano);
    double rho = 1.0 / 20.0;
    double p_star = 0.125;
    double nt_s = 100.0;
    double e = 1.0;
    std::uint64_t n_lo = 10;
    std::uint64_t n_hi = 10'000'000;
    int points_per_decade = 40;
};

struct CurvePoint {
    std::uint64_t n = 0;
    double delta_s = 0.0;
    double beta_max = 0.0;
    std::uint64_t nakamoto = 0;
    double probability = 0.0;
};

struct Fig1Result {
    std::vector<CurvePoint> curve;
    std::uint64_t n_star = 0;
    double p_star_peak = 0.0;
    std::vector<CurvePoint> probes;  // n = 10, 2e4, 1e6
};

Fig1Result reproduce_fig1(const Fig1Params& params = {});
CurvePoint curve_point(std::uint64_t n, const Fig1Params& params);
void write_curve_csv(std::ostream& os, std::span<const CurvePoint> curve);

struct FrontierSpec {
    std::vector<Chain> chains{std::begin(kAllChains), std::end(kAllChains)};
    std::vector<double> p_stars{0.0, 0.05, 0.1, 0.15, 0.2};
    std::vector<std::uint64_t> n_values = secmath::log_grid(10, 1'000'000, 5);
    double target = 0.9;
    double e = 1.0;
};

struct FrontierRow {
    Chain chain = Chain::Bitcoin;
    double p_star = 0.0;
    std::uint64_t n = 0;
    secmath::TolerableDelay tolerable;
    double benign_delta_s = 0.0;     // published fit
    double one_block_delta_s = 0.0;  // published fit plus one block interval of delay
};

std::vector<FrontierRow> max_delay_frontier(const FrontierSpec& spec);
void write_frontier_csv(std::ostream& os, std::span<const FrontierRow> rows);

// ---- artifacts ----

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

/// Line chart with a log-scaled x axis.
void write_svg_plot(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, std::span<const Series> series);

struct Manifest {
    std::string command;
    std::vector<std::string> arguments;
    std::optional<std::string> config_hash;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> artifacts;
};

/// Stable 64-bit hash of the canonical config dump, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

/// Writes manifest.json; the timestamp lives only here.
void write_manifest(const std::filesystem::path& dir, const Manifest& m);

}  // namespace nakasim::experiments
