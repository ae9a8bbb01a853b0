#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "nakasim/experiments.hpp"
#include "reference_table.hpp"

using namespace nakasim;
namespace ex = nakasim::experiments;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("nakasim_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

ScenarioConfig small_base() {
    auto cfg = preset(Chain::Bitcoin);
    cfg.num_blocks = 10;
    return cfg;
}

}  // namespace

TEST_CASE("log regression recovers an exact line") {
    std::vector<std::pair<double, double>> pts;
    for (double n : {10.0, 100.0, 1e3, 1e4}) pts.emplace_back(n, 0.4 * std::log(n) - 1.5);
    const auto f = ex::fit_log_regression(pts);
    CHECK(f.a == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(f.b == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.points.size() == 4);
}

TEST_CASE("log regression under noise") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 40; ++k) {
        const double n = std::pow(10.0, 2.0 + 3.0 * k / 39.0);
        pts.emplace_back(n, 0.1 * std::log(n) + 0.3 + noise(rng));
    }
    const auto f = ex::fit_log_regression(pts);
    CHECK(std::abs(f.a - 0.1) < 0.02);
    CHECK(f.r_squared > 0.8);
}

TEST_CASE("log regression rejects degenerate input") {
    using P = std::vector<std::pair<double, double>>;
    CHECK_THROWS_AS(ex::fit_log_regression(P{{10, 1}, {100, 2}}), DomainError);
    CHECK_THROWS_AS(ex::fit_log_regression(P{{10, 1}, {10, 2}, {10, 3}}), DomainError);
    CHECK_THROWS_AS(ex::fit_log_regression(P{{1, 1}, {10, 2}, {100, 3}}), DomainError);
    const auto flat = ex::fit_log_regression(P{{10, 2}, {100, 2}, {1000, 2}});
    CHECK(flat.a == doctest::Approx(0.0));
    CHECK(flat.r_squared == 1.0);
}

TEST_CASE("parallel_for visits every index once") {
    for (unsigned jobs : {0u, 1u, 3u, 16u}) {
        std::vector<int> hits(37, 0);
        ex::parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i] += 1; });
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
    ex::parallel_for(0, 4, [](std::size_t) { FAIL("called on empty range"); });
}

TEST_CASE("sweep axes") {
    for (auto a : {ex::SweepAxis::N, ex::SweepAxis::NZp, ex::SweepAxis::Protocol, ex::SweepAxis::PHat,
                   ex::SweepAxis::PCon, ex::SweepAxis::NtDelay, ex::SweepAxis::Overlay}) {
        CHECK(ex::sweep_axis_from_string(ex::to_string(a)) == a);
    }
    CHECK_THROWS_AS(ex::sweep_axis_from_string("bogus"), ConfigError);

    ex::SweepSpec spec{small_base(), {200}, {1}, ex::SweepAxis::PHat, {"0.1"}, 1};
    CHECK_THROWS_AS(spec.validate(), ConfigError);  // adversary disabled
    spec.base.adversary.enabled = true;
    CHECK_NOTHROW(spec.validate());
    spec.values = {"abc"};
    CHECK_THROWS_AS(ex::expand_sweep(spec), ConfigError);
}

TEST_CASE("sweep expansion and aggregation") {
    ex::SweepSpec spec{small_base(), {100, 200, 400}, {1, 2, 3, 4, 5}, ex::SweepAxis::N, {}, 2};
    const auto points = ex::expand_sweep(spec);
    REQUIRE(points.size() == 3);
    CHECK(points[2].config.n_val == 400);

    const auto result = ex::run_sweep(spec);
    CHECK(result.rows.size() == 15);
    CHECK(result.aggregates.size() == 3);
    CHECK_FALSE(result.any_failed());
    for (const auto& agg : result.aggregates) {
        CHECK(agg.completed == 5);
        double sum = 0;
        for (const auto& row : result.rows) {
            if (row.point == agg.point) sum += row.metrics.delta_max_s;
        }
        CHECK(agg.mean.delta_max_s == doctest::Approx(sum / 5));
    }

    std::stringstream csv;
    ex::write_sweep_csv(csv, result);
    const auto text = csv.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 15 + 3);
    CHECK(text.find("\nmean,0,100,0,compact_blocks_low,0,0,0,0,,") != std::string::npos);

    const auto fits = ex::fit_sweep_csv(csv);
    REQUIRE(fits.size() == 2);
    CHECK(fits[0].group == "all");
    CHECK(fits[0].fit.points.size() == 3);  // mean rows only
}

TEST_CASE("sweep results do not depend on the job count") {
    ex::SweepSpec spec{
        small_base(), {150, 300}, {1, 2}, ex::SweepAxis::Protocol, {"direct_push", "advertisement_based"}, 1};
    const auto a = ex::run_sweep(spec);
    spec.jobs = 4;
    const auto b = ex::run_sweep(spec);
    std::stringstream sa, sb;
    ex::write_sweep_csv(sa, a);
    ex::write_sweep_csv(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(a.points[1].config.protocol == Protocol::AdvertisementBased);
}

TEST_CASE("zero-power axis keeps n_val fixed") {
    ex::SweepSpec spec{small_base(), {100}, {1}, ex::SweepAxis::NZp, {"0", "100", "300"}, 1};
    const auto result = ex::run_sweep(spec);
    REQUIRE(result.points.size() == 3);
    CHECK(result.points[2].config.n_val == 100);
    CHECK(result.points[2].config.n_zp == 300);
    CHECK_FALSE(result.any_failed());
}

TEST_CASE("failed runs become error rows") {
    // A single outbound link per node rarely yields a connected graph.
    auto base = small_base();
    base.d_out = 1;
    ex::SweepSpec spec{base, {5000}, {1, 2}, ex::SweepAxis::N, {}, 1};
    const auto result = ex::run_sweep(spec);
    CHECK(result.any_failed());
    std::stringstream csv;
    ex::write_sweep_csv(csv, result);
    CHECK(csv.str().find("connected topology") != std::string::npos);
    CHECK(csv.str().find("all runs failed") != std::string::npos);
}

TEST_CASE("fits from hand-written CSV are grouped by varying columns") {
    std::stringstream csv;
    csv << "n_val,protocol,n_zp,delta_max_s,delta_avg_s\n";
    for (double n : {100.0, 1000.0, 10000.0}) {
        csv << n << ",direct_push,0," << 0.5 * std::log(n) << "," << 0.2 * std::log(n) << "\n";
        csv << n << ",hybrid_push,0," << 0.3 * std::log(n) + 1 << "," << 0.1 * std::log(n) << "\n";
    }
    const auto fits = ex::fit_sweep_csv(csv);
    REQUIRE(fits.size() == 4);
    CHECK(fits[0].group == "direct_push");
    CHECK(fits[0].metric == "delta_max_s");
    CHECK(fits[0].fit.a == doctest::Approx(0.5));
    CHECK(fits[2].group == "hybrid_push");
    CHECK(fits[2].fit.b == doctest::Approx(1.0));

    std::stringstream out;
    ex::write_fits_csv(out, fits);
    CHECK(out.str().rfind("group,metric,a,b,r_squared,points\ndirect_push,delta_max_s,", 0) == 0);

    std::stringstream bad("seed,delta_max_s\n1,2\n");
    CHECK_THROWS_AS(ex::fit_sweep_csv(bad), ConfigError);
}

TEST_CASE("overlay never slows propagation") {
    auto cfg = preset(Chain::Cardano);
    cfg.n_val = 500;
    cfg.num_blocks = 20;
    const auto topo = build_topology(cfg, 3);
    const auto off = run(cfg, topo, 3);
    cfg.network.high_speed_overlay = true;
    const auto on = run(cfg, build_topology(cfg, 3), 3);
    CHECK(on.summary.delta_max_s <= off.summary.delta_max_s);
    CHECK(on.summary.delta_avg_s < off.summary.delta_avg_s);
}

TEST_CASE("table of tolerable adversarial power") {
    const auto cells = ex::reproduce_table6();
    REQUIRE(cells.size() == 48);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CAPTURE(to_string(cells[i].chain));
        CAPTURE(cells[i].delayed_blocks);
        CAPTURE(cells[i].n);
        CHECK(std::abs(cells[i].beta_max - kPublishedBetaMax[i / 4][i % 4]) <= 0.005);
    }
    CHECK(cells[8].nt_s == 3000.0);

    std::stringstream md, csv;
    ex::write_table6_markdown(md, cells);
    ex::write_table6_csv(csv, cells);
    const auto md_text = md.str(), csv_text = csv.str();
    CHECK(std::count(md_text.begin(), md_text.end(), '\n') == 14);
    CHECK(md_text.find("| cardano | 0 s (no attack) | 0.4935 | 0.3935 | 0.2820 | 0.2135 |") !=
          std::string::npos);
    CHECK(std::count(csv_text.begin(), csv_text.end(), '\n') == 49);
}

TEST_CASE("security probability curve and turnaround") {
    const auto r = ex::reproduce_fig1();
    CHECK(r.curve.size() == 239);
    CHECK(r.probes[0].probability == doctest::Approx(0.638898).epsilon(1e-5));
    CHECK(r.n_star >= 10'000);
    CHECK(r.n_star <= 40'000);
    CHECK(r.p_star_peak > 0.99);
    CHECK(r.probes[2].probability < 0.01);
    for (const auto& p : r.curve) {
        CHECK(p.nakamoto == static_cast<std::uint64_t>(std::floor(p.beta_max * static_cast<double>(p.n))));
    }

    std::stringstream csv;
    ex::write_curve_csv(csv, r.curve);
    CHECK(csv.str().rfind("n_val,delta_s,beta_max,nakamoto_coefficient,security_probability\n10,", 0) == 0);
}

TEST_CASE("delay frontier") {
    ex::FrontierSpec spec;
    spec.chains = {Chain::Cardano};
    spec.p_stars = {0.0, 0.1, 0.2};
    const auto rows = ex::max_delay_frontier(spec);
    CHECK(rows.size() == 3 * spec.n_values.size());
    // p* = 0: any finite delay keeps the probability at 1.
    CHECK(rows[0].tolerable.status == secmath::TolerableDelay::Status::Unbounded);
    // For fixed n, a more corrupt population tolerates less delay.
    const std::size_t k = spec.n_values.size();
    for (std::size_t i = 0; i < k; ++i) {
        const auto& lo = rows[k + i].tolerable;
        const auto& hi = rows[2 * k + i].tolerable;
        if (lo.status == secmath::TolerableDelay::Status::Bounded &&
            hi.status == secmath::TolerableDelay::Status::Bounded) {
            CHECK(hi.delta_s <= lo.delta_s + 1e-3);
        }
    }
    CHECK(rows[5].one_block_delta_s == doctest::Approx(rows[5].benign_delta_s + 20.0));

    std::stringstream csv;
    ex::write_frontier_csv(csv, rows);
    CHECK(csv.str().find("cardano,0,10,unbounded,inf,") != std::string::npos);
    spec.chains.clear();
    CHECK_THROWS_AS(ex::max_delay_frontier(spec), ConfigError);
}

TEST_CASE("svg and manifest artifacts") {
    const auto dir = scratch_dir("artifacts");
    const std::vector<ex::Series> series{{"a<b", {{10, 1}, {100, 2}, {1000, 3}}},
                                         {"flat", {{10, 0}, {1e4, 0}}}};
    ex::write_svg_plot(dir / "plot.svg", "Delay & size", "n", "seconds", series);
    const auto svg = slurp(dir / "plot.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("a&lt;b") != std::string::npos);
    CHECK(svg.find("Delay &amp; size") != std::string::npos);
    CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
    CHECK(svg.find("</svg>") != std::string::npos);

    const auto cfg = preset(Chain::Monero);
    const auto h = ex::config_hash(cfg);
    CHECK(h.size() == 16);
    CHECK(h == ex::config_hash(preset(Chain::Monero)));
    CHECK(h != ex::config_hash(preset(Chain::Cardano)));

    ex::write_manifest(dir, {"simulate", {"--preset", "monero"}, h, {1, 2}, {"summary.csv"}});
    const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(j["tool"] == "nakasim");
    CHECK(j["command"] == "simulate");
    CHECK(j["config_hash"] == h);
    CHECK(j["seeds"] == nlohmann::json::array({1, 2}));
    CHECK(j["artifacts"][0] == "summary.csv");
    CHECK(j["created_utc"].get<std::string>().size() == 20);
    std::filesystem::remove_all(dir);
}
