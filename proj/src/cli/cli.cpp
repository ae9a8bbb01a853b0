#include "nakasim/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nakasim/config_io.hpp"
#include "nakasim/experiments.hpp"
#include "nakasim/netmodel.hpp"
#include "nakasim/secmath.hpp"
#include "nakasim/simengine.hpp"

namespace nakasim::cli {

namespace fs = std::filesystem;
namespace ex = nakasim::experiments;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string out;
    unsigned jobs = 0;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> argv;
};

struct ScenarioSource {
    std::string config;
    std::string preset;
};

std::string timestamp_slug() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm local{};
    localtime_r(&now, &local);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &local);
    return buf;
}

// One fresh directory per invocation; never reuses one holding results.
fs::path prepare_output(const Common& common, std::string_view command) {
    fs::path dir;
    if (!common.out.empty()) {
        dir = common.out;
        if (fs::exists(dir) && !fs::is_empty(dir)) {
            throw UsageError("output directory " + dir.string() +
                             " is not empty; refusing to overwrite results");
        }
    } else {
        const char* env = std::getenv("NAKASIM_OUTPUT_ROOT");
        const fs::path root = env && *env ? fs::path(env) : fs::path("results");
        const std::string base = std::string(command) + "-" + timestamp_slug();
        dir = root / base;
        for (int k = 2; fs::exists(dir); ++k) dir = root / (base + "-" + std::to_string(k));
    }
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

void finish(const fs::path& dir, const Common& common, std::string_view command, ex::Manifest m,
            std::ostream& out) {
    m.command = std::string(command);
    m.arguments = common.argv;
    ex::write_manifest(dir, m);
    fmt::print(out, "results written to {}\n", dir.string());
}

ScenarioConfig load_source(const ScenarioSource& src) {
    if (!src.config.empty() && !src.preset.empty())
        throw UsageError("give either --config or --preset, not both");
    if (src.config.empty() && src.preset.empty()) throw UsageError("one of --config or --preset is required");
    if (!src.preset.empty()) return preset(src.preset);
    try {
        return load_scenario(src.config);
    } catch (const ConfigError& err) {
        if (err.line()) throw ConfigError(fmt::format("{}:{}: {}", src.config, *err.line(), err.message()));
        throw ConfigError(fmt::format("{}: {}", src.config, err.message()));
    }
}

void add_source(CLI::App* cmd, ScenarioSource& src) {
    cmd->add_option("--config", src.config, "scenario file (YAML)");
    cmd->add_option("--preset", src.preset, "bitcoin, cardano, monero or ethereum_classic");
}

void add_out(CLI::App* cmd, Common& c) {
    cmd->add_option("--out", c.out,
                    "output directory (default: $NAKASIM_OUTPUT_ROOT or ./results, one per run)");
}

// ---- analyze ----

struct AnalyzeArgs {
    double rho = 0.0;
    double delta = 0.0;
    double e = 1.0;
    std::optional<double> beta;
    std::optional<double> p_star;
    std::optional<std::uint64_t> n_val;
};

int cmd_analyze(const AnalyzeArgs& a, const Common& common, std::ostream& out) {
    if (!(a.rho > 0.0) || !std::isfinite(a.rho)) throw UsageError("--rho must be positive");
    if (!(a.delta >= 0.0) || !std::isfinite(a.delta)) throw UsageError("--delta must be >= 0");
    if (!(a.e >= 1.0)) throw UsageError("--e must be >= 1");
    if (a.p_star && !a.n_val) throw UsageError("--p-star needs --n-val");
    if (a.beta && !(*a.beta >= 0.0 && *a.beta <= 1.0)) throw UsageError("--beta must lie in [0,1]");
    if (a.p_star && !(*a.p_star >= 0.0 && *a.p_star <= 1.0)) throw UsageError("--p-star must lie in [0,1]");
    if (a.n_val && *a.n_val < 1) throw UsageError("--n-val must be >= 1");

    const double bmax = secmath::beta_max(a.rho, a.delta, a.e);
    std::string verdict, g, prob;
    fmt::print(out, "rho = {}, delta = {} s, e = {}\n", a.rho, a.delta, a.e);
    fmt::print(out, "beta_max            {:.4f}\n", bmax);
    if (a.beta) {
        const auto v = secmath::is_secure(*a.beta, a.rho, a.delta, a.e);
        const double bound = (1.0 - *a.beta) / (1.0 + (1.0 - *a.beta) * a.rho * a.delta);
        verdict = v.secure ? "secure" : "insecure";
        fmt::print(out, "verdict             {} (e*beta = {:.6g}, bound = {:.6g})\n", verdict, a.e * *a.beta,
                   bound);
    }
    if (a.n_val) {
        g = std::to_string(secmath::nakamoto_coefficient(*a.n_val, a.rho, a.delta, a.e));
        fmt::print(out, "nakamoto g(n)       {} (n_val = {})\n", g, *a.n_val);
    }
    if (a.p_star) {
        const double p = secmath::security_probability(*a.n_val, *a.p_star, a.rho, a.delta, a.e);
        prob = fmt::format("{:.6f}", p);
        fmt::print(out, "P(E_sec)            {:.3f} (p* = {})\n", p, *a.p_star);
    }
    const std::string header = "verdict,beta_max,nakamoto_coefficient,security_probability\n";
    const std::string row = fmt::format("{},{:.6f},{},{}\n", verdict, bmax, g, prob);
    out << header << row;
    if (!common.out.empty()) {
        const auto dir = prepare_output(common, "analyze");
        open_out(dir / "analyze.csv") << header << row;
        finish(dir, common, "analyze", {.artifacts = {"analyze.csv"}}, out);
    }
    return kExitOk;
}

// ---- simulate ----

struct SimulateArgs {
    ScenarioSource src;
    std::optional<std::uint32_t> n_val, n_zp, blocks, runs;
    std::string protocol;
    bool overlay = false;
    bool verbose = false;
};

void apply_overrides(ScenarioConfig& cfg, const SimulateArgs& a, const Common& common) {
    if (common.seed) cfg.seed = *common.seed;
    if (a.n_val) cfg.n_val = *a.n_val;
    if (a.n_zp) cfg.n_zp = *a.n_zp;
    if (a.blocks) cfg.num_blocks = *a.blocks;
    if (a.runs) cfg.runs = *a.runs;
    if (!a.protocol.empty()) cfg.protocol = protocol_from_string(a.protocol);
    if (a.overlay) cfg.network.high_speed_overlay = true;
    cfg.validate();
}

int cmd_simulate(const SimulateArgs& a, const Common& common, std::ostream& out) {
    ScenarioConfig cfg = load_source(a.src);
    apply_overrides(cfg, a, common);

    std::vector<std::uint64_t> seeds;
    for (std::uint32_t i = 0; i < cfg.runs; ++i) seeds.push_back(cfg.seed + i);
    std::vector<RunMetrics> results(seeds.size());
    std::vector<std::string> errors(seeds.size());
    ex::parallel_for(seeds.size(), common.jobs, [&](std::size_t i) {
        try {
            const Topology topo = build_topology(cfg, seeds[i]);
            results[i] = run(cfg, topo, seeds[i]);
        } catch (const std::exception& err) {
            errors[i] = err.what();
        }
    });
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) throw std::runtime_error(fmt::format("run {} failed: {}", i, errors[i]));
    }

    const auto dir = prepare_output(common, "simulate");
    ex::Manifest m{
        .config_hash = ex::config_hash(cfg), .seeds = seeds, .artifacts = {"config.yaml", "summary.csv"}};
    open_out(dir / "config.yaml") << dump_scenario(cfg);
    {
        auto f = open_out(dir / "summary.csv");
        write_summary_csv_header(f);
        for (std::size_t i = 0; i < results.size(); ++i)
            write_summary_csv_row(f, i, seeds[i], cfg, results[i]);
    }
    if (a.verbose) {
        auto f = open_out(dir / "verbose.csv");
        write_verbose_csv_header(f);
        for (std::size_t i = 0; i < results.size(); ++i) write_verbose_csv_rows(f, i, results[i]);
        m.artifacts.push_back("verbose.csv");
    }

    bool partial = false;
    std::vector<MetricsSummary> summaries;
    for (const auto& r : results) {
        summaries.push_back(r.summary);
        partial = partial || r.partial;
    }
    const auto mean = mean_metrics(summaries);
    fmt::print(out, "{}: n_val={} n_zp={} protocol={} blocks={} runs={}\n", cfg.name, cfg.n_val, cfg.n_zp,
               to_string(cfg.protocol), cfg.num_blocks, cfg.runs);
    fmt::print(out,
               "mean delta_max = {:.3f} s, delta_avg = {:.3f} s, delta_p90 = {:.3f} s, stale rate = {:.4f}\n",
               mean.delta_max_s, mean.delta_avg_s, mean.delta_p90_s, mean.stale_rate);
    if (partial)
        fmt::print(out, "warning: at least one run hit the cutoff before every block reached every node\n");
    finish(dir, common, "simulate", std::move(m), out);
    return partial ? kExitPartial : kExitOk;
}

// ---- sweep ----

struct SweepArgs {
    ScenarioSource src;
    std::vector<std::uint32_t> n_values;
    std::vector<std::uint64_t> seeds;
    std::optional<std::uint32_t> runs, blocks;
    std::string vary = "n";
    std::vector<std::string> values;
};

int cmd_sweep(const SweepArgs& a, const Common& common, std::ostream& out) {
    ex::SweepSpec spec;
    spec.base = load_source(a.src);
    if (common.seed) spec.base.seed = *common.seed;
    if (a.blocks) spec.base.num_blocks = *a.blocks;
    if (a.runs) spec.base.runs = *a.runs;
    spec.base.validate();
    spec.n_values = a.n_values;
    spec.seeds = a.seeds;
    if (spec.seeds.empty()) {
        for (std::uint32_t i = 0; i < spec.base.runs; ++i) spec.seeds.push_back(spec.base.seed + i);
    }
    spec.vary = ex::sweep_axis_from_string(a.vary);
    spec.values = a.values;
    spec.jobs = common.jobs;
    spec.validate();

    const auto result = ex::run_sweep(spec);
    const auto dir = prepare_output(common, "sweep");
    ex::Manifest m{.config_hash = ex::config_hash(spec.base),
                   .seeds = spec.seeds,
                   .artifacts = {"config.yaml", "sweep.csv"}};
    open_out(dir / "config.yaml") << dump_scenario(spec.base);
    std::ostringstream csv;
    ex::write_sweep_csv(csv, result);
    open_out(dir / "sweep.csv") << csv.str();

    std::istringstream again(csv.str());
    try {
        const auto fits = ex::fit_sweep_csv(again);
        {
            auto f = open_out(dir / "fits.csv");
            ex::write_fits_csv(f, fits);
        }
        m.artifacts.push_back("fits.csv");
        for (const auto& f : fits) {
            fmt::print(out, "{:<28} {:<12} a = {:8.4f}  b = {:8.4f}  R^2 = {:.3f}\n", f.group, f.metric,
                       f.fit.a, f.fit.b, f.fit.r_squared);
        }
    } catch (const DomainError& err) {
        fmt::print(out, "no regression: {}\n", err.what());
    }

    std::map<std::string, ex::Series> by_group;
    for (const auto& agg : result.aggregates) {
        if (agg.completed == 0) continue;
        const auto& p = result.points[agg.point];
        const std::string label =
            spec.vary == ex::SweepAxis::N
                ? std::string(to_string(p.config.protocol))
                : fmt::format("{}={}", to_string(spec.vary), spec.values[agg.point % spec.values.size()]);
        auto& s = by_group[label];
        s.name = label;
        s.points.emplace_back(p.config.n_val, agg.mean.delta_max_s);
    }
    std::vector<ex::Series> series;
    for (auto& [_, s] : by_group) series.push_back(std::move(s));
    ex::write_svg_plot(dir / "delta_max.svg", "Mean maximum propagation delay", "validators", "delta_max (s)",
                       series);
    m.artifacts.push_back("delta_max.svg");

    const bool failed = result.any_failed();
    const bool partial = result.any_partial();
    if (failed) fmt::print(out, "warning: some runs failed; see the error column of sweep.csv\n");
    if (partial) fmt::print(out, "warning: some runs were partial\n");
    finish(dir, common, "sweep", std::move(m), out);
    return failed ? kExitInternal : partial ? kExitPartial : kExitOk;
}

// ---- fit / table6 / fig1 / frontier ----

int cmd_fit(const std::string& input, const Common& common, std::ostream& out) {
    std::ifstream in(input);
    if (!in) throw UsageError("cannot read " + input);
    const auto fits = ex::fit_sweep_csv(in);
    const auto dir = prepare_output(common, "fit");
    {
        auto f = open_out(dir / "fits.csv");
        ex::write_fits_csv(f, fits);
    }
    ex::write_fits_csv(out, fits);
    finish(dir, common, "fit", {.artifacts = {"fits.csv"}}, out);
    return kExitOk;
}

int cmd_table6(const Common& common, std::ostream& out) {
    const auto cells = ex::reproduce_table6();
    const auto dir = prepare_output(common, "table6");
    {
        auto f = open_out(dir / "table6.md");
        ex::write_table6_markdown(f, cells);
    }
    {
        auto f = open_out(dir / "table6.csv");
        ex::write_table6_csv(f, cells);
    }
    ex::write_table6_markdown(out, cells);
    finish(dir, common, "table6", {.artifacts = {"table6.md", "table6.csv"}}, out);
    return kExitOk;
}

struct Fig1Args {
    ex::Fig1Params params;
    std::string chain = "cardano";
};

int cmd_fig1(Fig1Args a, const Common& common, std::ostream& out) {
    a.params.fit = ex::published_max_fit(chain_from_string(a.chain));
    if (!(a.params.rho > 0.0)) throw UsageError("--rho must be positive");
    if (!(a.params.p_star >= 0.0 && a.params.p_star <= 1.0)) throw UsageError("--p-star must lie in [0,1]");
    if (a.params.n_lo < 1 || a.params.n_hi < a.params.n_lo) throw UsageError("need 1 <= --n-lo <= --n-hi");
    if (a.params.points_per_decade < 1) throw UsageError("--ppd must be >= 1");
    const auto r = ex::reproduce_fig1(a.params);
    const auto dir = prepare_output(common, "fig1");
    {
        auto f = open_out(dir / "fig1.csv");
        ex::write_curve_csv(f, r.curve);
    }
    {
        auto f = open_out(dir / "fig1_summary.csv");
        f << "n_star,p_peak,p_at_10,p_at_20000,p_at_1000000\n";
        fmt::print(f, "{},{:.9e},{:.9e},{:.9e},{:.9e}\n", r.n_star, r.p_star_peak, r.probes[0].probability,
                   r.probes[1].probability, r.probes[2].probability);
    }
    ex::Series s{"P(E_sec)", {}};
    for (const auto& p : r.curve) s.points.emplace_back(static_cast<double>(p.n), p.probability);
    ex::write_svg_plot(dir / "fig1.svg", "Security probability vs network size", "validators", "P(E_sec)",
                       std::span(&s, 1));
    fmt::print(out, "turnaround n* = {} (P = {:.5f})\n", r.n_star, r.p_star_peak);
    for (const auto& p : r.probes) fmt::print(out, "P(n = {}) = {:.6g}\n", p.n, p.probability);
    finish(dir, common, "fig1", {.artifacts = {"fig1.csv", "fig1_summary.csv", "fig1.svg"}}, out);
    return kExitOk;
}

struct FrontierArgs {
    std::vector<std::string> chains;
    std::vector<double> p_stars{0.0, 0.05, 0.1, 0.15, 0.2};
    std::uint64_t n_lo = 10;
    std::uint64_t n_hi = 1'000'000;
    int ppd = 5;
    double target = 0.9;
    double e = 1.0;
};

int cmd_frontier(const FrontierArgs& a, const Common& common, std::ostream& out) {
    ex::FrontierSpec spec;
    if (!a.chains.empty()) {
        spec.chains.clear();
        for (const auto& c : a.chains) spec.chains.push_back(chain_from_string(c));
    }
    if (a.n_lo < 1 || a.n_hi < a.n_lo) throw UsageError("need 1 <= --n-lo <= --n-hi");
    if (!(a.target > 0.0 && a.target < 1.0)) throw UsageError("--target must lie in (0,1)");
    spec.p_stars = a.p_stars;
    spec.n_values = secmath::log_grid(a.n_lo, a.n_hi, a.ppd);
    spec.target = a.target;
    spec.e = a.e;
    const auto rows = ex::max_delay_frontier(spec);
    const auto dir = prepare_output(common, "frontier");
    {
        auto f = open_out(dir / "frontier.csv");
        ex::write_frontier_csv(f, rows);
    }

    std::vector<ex::Series> series;
    for (const auto& r : rows) {
        if (r.tolerable.status != secmath::TolerableDelay::Status::Bounded) continue;
        const std::string name = fmt::format("{} p*={}", to_string(r.chain), r.p_star);
        if (series.empty() || series.back().name != name) series.push_back({name, {}});
        series.back().points.emplace_back(static_cast<double>(r.n), r.tolerable.delta_s);
    }
    ex::write_svg_plot(dir / "frontier.svg", "Largest tolerable delay", "validators", "delta (s)", series);
    fmt::print(out, "{} frontier rows\n", rows.size());
    finish(dir, common, "frontier", {.artifacts = {"frontier.csv", "frontier.svg"}}, out);
    return kExitOk;
}

int cmd_validate(const ScenarioSource& src, std::ostream& out) {
    const auto cfg = load_source(src);
    fmt::print(out, "ok: {} (n_val={}, n_zp={}, protocol={}, config hash {})\n",
               src.config.empty() ? src.preset : src.config, cfg.n_val, cfg.n_zp, to_string(cfg.protocol),
               ex::config_hash(cfg));
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"nakasim: Nakamoto-style blockchain security analysis and propagation simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", NAKASIM_VERSION);

    Common common;
    for (int i = 0; i < argc; ++i) common.argv.emplace_back(argv[i]);

    AnalyzeArgs analyze;
    auto* c_analyze = app.add_subcommand("analyze", "security condition, beta_max, g(n) and P(E_sec)");
    c_analyze->add_option("--rho", analyze.rho, "block rate (1/s)")->required();
    c_analyze->add_option("--delta", analyze.delta, "maximum delay (s)")->required();
    c_analyze->add_option("--e", analyze.e, "magnification factor")->capture_default_str();
    c_analyze->add_option("--beta", analyze.beta, "adversarial power to test");
    c_analyze->add_option("--p-star", analyze.p_star, "mean corruption probability");
    c_analyze->add_option("--n-val", analyze.n_val, "number of validators");
    add_out(c_analyze, common);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "run the propagation simulator");
    add_source(c_sim, sim.src);
    c_sim->add_option("--seed", common.seed, "seed of the first run");
    c_sim->add_option("--n-val", sim.n_val);
    c_sim->add_option("--n-zp", sim.n_zp);
    c_sim->add_option("--protocol", sim.protocol);
    c_sim->add_option("--blocks", sim.blocks);
    c_sim->add_option("--runs", sim.runs);
    c_sim->add_flag("--overlay", sim.overlay, "enable the validator overlay");
    c_sim->add_flag("--verbose", sim.verbose, "also write per-node reception times");
    c_sim->add_option("--jobs", common.jobs, "parallel runs (default: all cores)");
    add_out(c_sim, common);

    SweepArgs sweep;
    auto* c_sweep = app.add_subcommand("sweep", "simulate a grid of configurations");
    add_source(c_sweep, sweep.src);
    c_sweep->add_option("--n", sweep.n_values, "validator counts, comma separated")
        ->required()
        ->delimiter(',');
    c_sweep->add_option("--seeds", sweep.seeds, "explicit seed list")->delimiter(',');
    c_sweep->add_option("--seed", common.seed, "first seed when --seeds is absent");
    c_sweep->add_option("--runs", sweep.runs, "seeds per point when --seeds is absent");
    c_sweep->add_option("--blocks", sweep.blocks);
    c_sweep->add_option("--vary", sweep.vary, "n, n_zp, protocol, p_hat, p_con, nt_delay_ms or overlay");
    c_sweep->add_option("--values", sweep.values, "values of the varied field")->delimiter(',');
    c_sweep->add_option("--jobs", common.jobs, "parallel runs (default: all cores)");
    add_out(c_sweep, common);

    std::string fit_input;
    auto* c_fit = app.add_subcommand("fit", "fit delta = a ln n + b to sweep output");
    c_fit->add_option("--input", fit_input, "sweep CSV")->required();
    add_out(c_fit, common);

    auto* c_table6 = app.add_subcommand("table6", "tolerable adversarial power per chain and network size");
    add_out(c_table6, common);

    Fig1Args fig1;
    auto* c_fig1 = app.add_subcommand("fig1", "security probability against network size");
    c_fig1->add_option("--chain", fig1.chain, "chain whose delay fit is used")->capture_default_str();
    c_fig1->add_option("--rho", fig1.params.rho)->capture_default_str();
    c_fig1->add_option("--p-star", fig1.params.p_star)->capture_default_str();
    c_fig1->add_option("--nt", fig1.params.nt_s, "adversarial delay (s)")->capture_default_str();
    c_fig1->add_option("--e", fig1.params.e)->capture_default_str();
    c_fig1->add_option("--n-lo", fig1.params.n_lo)->capture_default_str();
    c_fig1->add_option("--n-hi", fig1.params.n_hi)->capture_default_str();
    c_fig1->add_option("--ppd", fig1.params.points_per_decade, "grid points per decade")
        ->capture_default_str();
    add_out(c_fig1, common);

    FrontierArgs frontier;
    auto* c_frontier = app.add_subcommand("frontier", "largest delay keeping P(E_sec) above a target");
    c_frontier->add_option("--chains", frontier.chains)->delimiter(',');
    c_frontier->add_option("--p-stars", frontier.p_stars)->delimiter(',');
    c_frontier->add_option("--n-lo", frontier.n_lo)->capture_default_str();
    c_frontier->add_option("--n-hi", frontier.n_hi)->capture_default_str();
    c_frontier->add_option("--ppd", frontier.ppd)->capture_default_str();
    c_frontier->add_option("--target", frontier.target)->capture_default_str();
    c_frontier->add_option("--e", frontier.e)->capture_default_str();
    add_out(c_frontier, common);

    ScenarioSource validate_src;
    auto* c_validate = app.add_subcommand("validate-config", "check a scenario file");
    add_source(c_validate, validate_src);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_analyze->parsed()) return cmd_analyze(analyze, common, out);
        if (c_sim->parsed()) return cmd_simulate(sim, common, out);
        if (c_sweep->parsed()) return cmd_sweep(sweep, common, out);
        if (c_fit->parsed()) return cmd_fit(fit_input, common, out);
        if (c_table6->parsed()) return cmd_table6(common, out);
        if (c_fig1->parsed()) return cmd_fig1(fig1, common, out);
        if (c_frontier->parsed()) return cmd_frontier(frontier, common, out);
        if (c_validate->parsed()) return cmd_validate(validate_src, out);
    } catch (const UsageError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const ConfigError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const DomainError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        fmt::print(err, "internal error: {}\n", e.what());
        return kExitInternal;
    }
    return kExitUsage;
}

}  // namespace nakasim::cli
