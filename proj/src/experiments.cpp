#include "nakasim/experiments.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "nakasim/config_io.hpp"
#include "nakasim/netmodel.hpp"

namespace nakasim::experiments {

RegressionFit fit_log_regression(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw DomainError("log regression needs at least 3 points");
    double sx = 0.0, sy = 0.0;
    for (const auto& [n, d] : points) {
        if (!(std::isfinite(n) && n >= 2.0)) throw DomainError("log regression needs n >= 2");
        if (!std::isfinite(d)) throw DomainError("log regression needs finite delays");
        sx += std::log(n);
        sy += d;
    }
    const double k = static_cast<double>(points.size());
    const double mx = sx / k, my = sy / k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [n, d] : points) {
        const double dx = std::log(n) - mx, dy = d - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 1e-12 * k) throw DomainError("log regression needs at least two distinct n");

    RegressionFit fit;
    fit.a = sxy / sxx;
    fit.b = my - fit.a * mx;
    double ss_res = 0.0;
    for (const auto& [n, d] : points) {
        const double r = d - (fit.a * std::log(n) + fit.b);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.points.assign(points.begin(), points.end());
    return fit;
}

secmath::DelayFit published_max_fit(Chain c) {
    switch (c) {
        case Chain::Bitcoin: return {0.1, -0.04};
        case Chain::Cardano: return {3.65, -7.37};
        case Chain::Monero: return {1.18, -2.24};
        case Chain::EthereumClassic: return {2.6, -8.71};
    }
    return {};
}

secmath::DelayFit published_avg_fit(Chain c) {
    switch (c) {
        case Chain::Bitcoin: return {0.04, 0.03};
        case Chain::Cardano: return {0.41, 1.3};
        case Chain::Monero: return {0.43, 0.26};
        case Chain::EthereumClassic: return {0.42, 0.3};
    }
    return {};
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
    };
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
}

// ---- sweeps ----

std::string_view to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::N: return "n";
        case SweepAxis::NZp: return "n_zp";
        case SweepAxis::Protocol: return "protocol";
        case SweepAxis::PHat: return "p_hat";
        case SweepAxis::PCon: return "p_con";
        case SweepAxis::NtDelay: return "nt_delay_ms";
        case SweepAxis::Overlay: return "overlay";
    }
    return "n";
}

SweepAxis sweep_axis_from_string(std::string_view name) {
    for (auto a : {SweepAxis::N, SweepAxis::NZp, SweepAxis::Protocol, SweepAxis::PHat, SweepAxis::PCon,
                   SweepAxis::NtDelay, SweepAxis::Overlay}) {
        if (to_string(a) == name) return a;
    }
    throw ConfigError("unknown sweep axis '" + std::string(name) +
                      "' (expected n, n_zp, protocol, p_hat, p_con, nt_delay_ms or overlay)");
}

namespace {

template <class T>
T parse_number(const std::string& text, std::string_view what) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("bad " + std::string(what) + " value '" + text + "'");
    }
    return value;
}

bool parse_flag(const std::string& text) {
    if (text == "true" || text == "on" || text == "1") return true;
    if (text == "false" || text == "off" || text == "0") return false;
    throw ConfigError("bad overlay value '" + text + "' (expected on/off)");
}

void apply_axis(ScenarioConfig& cfg, SweepAxis axis, const std::string& value) {
    switch (axis) {
        case SweepAxis::N: break;
        case SweepAxis::NZp: cfg.n_zp = parse_number<std::uint32_t>(value, "n_zp"); break;
        case SweepAxis::Protocol: cfg.protocol = protocol_from_string(value); break;
        case SweepAxis::PHat: cfg.adversary.p_hat = parse_number<double>(value, "p_hat"); break;
        case SweepAxis::PCon: cfg.adversary.p_con = parse_number<double>(value, "p_con"); break;
        case SweepAxis::NtDelay:
            cfg.adversary.nt_delay_ms = parse_number<SimTimeMs>(value, "nt_delay_ms");
            break;
        case SweepAxis::Overlay: cfg.network.high_speed_overlay = parse_flag(value); break;
    }
}

}  // namespace

void SweepSpec::validate() const {
    if (n_values.empty()) throw ConfigError("sweep needs at least one n value");
    if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
    if (vary != SweepAxis::N && values.empty()) {
        throw ConfigError("sweep over " + std::string(to_string(vary)) + " needs at least one value");
    }
    const bool adversarial = vary == SweepAxis::PHat || vary == SweepAxis::PCon || vary == SweepAxis::NtDelay;
    if (adversarial && !base.adversary.enabled) {
        throw ConfigError("sweeping " + std::string(to_string(vary)) +
                          " needs adversary.enabled in the base config");
    }
}

std::vector<SweepPoint> expand_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepPoint> out;
    const std::vector<std::string> single{""};
    const auto& values = spec.vary == SweepAxis::N ? single : spec.values;
    for (std::uint32_t n : spec.n_values) {
        for (const auto& v : values) {
            SweepPoint p;
            p.index = out.size();
            p.config = spec.base;
            p.config.n_val = n;
            apply_axis(p.config, spec.vary, v);
            p.config.validate();
            out.push_back(std::move(p));
        }
    }
    return out;
}

bool SweepResult::any_partial() const {
    return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.partial; });
}

bool SweepResult::any_failed() const {
    return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
}

SweepResult run_sweep(const SweepSpec& spec) {
    SweepResult result;
    result.points = expand_sweep(spec);
    const std::size_t per_point = spec.seeds.size();
    result.rows.resize(result.points.size() * per_point);

    parallel_for(result.rows.size(), spec.jobs, [&](std::size_t i) {
        auto& row = result.rows[i];
        row.point = i / per_point;
        row.seed = spec.seeds[i % per_point];
        try {
            const auto& cfg = result.points[row.point].config;
            const Topology topo = build_topology(cfg, row.seed);
            const RunMetrics m = run(cfg, topo, row.seed);
            row.metrics = m.summary;
            row.partial = m.partial;
            row.trace_hash = m.trace_hash;
        } catch (const std::exception& err) {
            row.error = err.what();
        }
    });

    for (const auto& p : result.points) {
        SweepAggregate agg;
        agg.point = p.index;
        std::vector<MetricsSummary> ok;
        for (std::size_t s = 0; s < per_point; ++s) {
            const auto& row = result.rows[p.index * per_point + s];
            if (!row.error.empty()) {
                ++agg.failed;
                continue;
            }
            ok.push_back(row.metrics);
            agg.partial = agg.partial || row.partial;
        }
        agg.completed = ok.size();
        agg.mean = mean_metrics(ok);
        result.aggregates.push_back(agg);
    }
    return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "kind,point,n_val,n_zp,protocol,p_hat,p_con,nt_delay_ms,overlay,seed,delta_max_s,delta_avg_s,"
          "delta_p90_s,stale_rate,partial,trace_hash,error\n";
    auto prefix = [&](std::string_view kind, const SweepPoint& p) {
        const auto& c = p.config;
        fmt::print(os, "{},{},{},{},{},{},{},{},{},", kind, p.index, c.n_val, c.n_zp, to_string(c.protocol),
                   c.adversary.enabled ? c.adversary.p_hat : 0.0,
                   c.adversary.enabled ? c.adversary.p_con : 0.0,
                   c.adversary.enabled ? c.adversary.nt_delay_ms : 0, c.network.high_speed_overlay ? 1 : 0);
    };
    auto metrics = [&](const MetricsSummary& m) {
        fmt::print(os, "{:.3f},{:.6f},{:.3f},{:.6f},", m.delta_max_s, m.delta_avg_s, m.delta_p90_s,
                   m.stale_rate);
    };
    for (const auto& row : result.rows) {
        prefix("run", result.points[row.point]);
        fmt::print(os, "{},", row.seed);
        if (row.error.empty()) {
            metrics(row.metrics);
            fmt::print(os, "{},{:016x},\n", row.partial ? 1 : 0, row.trace_hash);
        } else {
            std::string msg = row.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            fmt::print(os, ",,,,,,{}\n", msg);
        }
    }
    for (const auto& agg : result.aggregates) {
        prefix("mean", result.points[agg.point]);
        os << ',';
        if (agg.completed == 0) {
            os << ",,,,,,all runs failed\n";
            continue;
        }
        metrics(agg.mean);
        fmt::print(os, "{},,{}\n", agg.partial ? 1 : 0,
                   agg.failed ? fmt::format("{} runs failed", agg.failed) : "");
    }
}

// ---- fits from sweep output ----

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::vector<GroupFit> fit_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto n_col = column("n_val");
    if (!n_col) throw ConfigError("CSV input needs an n_val column");
    std::vector<std::pair<std::string, std::size_t>> metric_cols;
    for (std::string_view m : {"delta_max_s", "delta_avg_s"}) {
        if (auto c = column(m)) metric_cols.emplace_back(std::string(m), *c);
    }
    if (metric_cols.empty()) throw ConfigError("CSV input needs delta_max_s or delta_avg_s");
    const auto kind_col = column("kind");
    std::vector<std::pair<std::string, std::size_t>> key_cols;
    for (std::string_view k : {"protocol", "n_zp", "p_hat", "p_con", "nt_delay_ms", "overlay"}) {
        if (auto c = column(k)) key_cols.emplace_back(std::string(k), *c);
    }

    std::vector<std::vector<std::string>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() < header.size()) cells.resize(header.size());
        rows.push_back(std::move(cells));
    }
    const bool have_means = kind_col && std::any_of(rows.begin(), rows.end(),
                                                    [&](const auto& r) { return r[*kind_col] == "mean"; });
    if (have_means) {
        std::erase_if(rows, [&](const auto& r) { return r[*kind_col] != "mean"; });
    }

    // Label groups only by the descriptor columns that actually vary.
    std::vector<std::pair<std::string, std::size_t>> varying;
    for (const auto& kc : key_cols) {
        std::set<std::string> seen;
        for (const auto& r : rows) seen.insert(r[kc.second]);
        if (seen.size() > 1) varying.push_back(kc);
    }
    std::map<std::string, std::vector<const std::vector<std::string>*>> groups;
    for (const auto& r : rows) {
        std::string label;
        for (const auto& [name, idx] : varying) {
            label += (label.empty() ? "" : ";") + (name == "protocol" ? r[idx] : name + "=" + r[idx]);
        }
        groups[label.empty() ? "all" : label].push_back(&r);
    }

    std::vector<GroupFit> out;
    for (const auto& [label, members] : groups) {
        for (const auto& [metric, idx] : metric_cols) {
            std::vector<std::pair<double, double>> pts;
            for (const auto* r : members) {
                if ((*r)[idx].empty()) continue;  // failed run
                pts.emplace_back(parse_number<double>((*r)[*n_col], "n_val"),
                                 parse_number<double>((*r)[idx], metric));
            }
            try {
                out.push_back({label, metric, fit_log_regression(pts)});
            } catch (const DomainError& err) {
                throw DomainError("group " + label + ", " + metric + ": " + err.what());
            }
        }
    }
    return out;
}

void write_fits_csv(std::ostream& os, std::span<const GroupFit> fits) {
    os << "group,metric,a,b,r_squared,points\n";
    for (const auto& f : fits) {
        fmt::print(os, "{},{},{:.6f},{:.6f},{:.6f},{}\n", f.group, f.metric, f.fit.a, f.fit.b,
                   f.fit.r_squared, f.fit.points.size());
    }
}

// ---- analytical tables ----

std::vector<Table6Cell> reproduce_table6() {
    std::vector<Table6Cell> cells;
    for (Chain chain : kAllChains) {
        const double interval = block_interval_s(chain);
        const auto fit = published_max_fit(chain);
        for (int blocks : kTable6Delays) {
            for (double n : kTable6N) {
                Table6Cell c;
                c.chain = chain;
                c.delayed_blocks = blocks;
                c.nt_s = blocks * interval;
                c.n = n;
                c.delta_s = secmath::adversarial_delay(n, fit, c.nt_s);
                c.beta_max = secmath::beta_max(1.0 / interval, c.delta_s, 1.0);
                cells.push_back(c);
            }
        }
    }
    return cells;
}

void write_table6_csv(std::ostream& os, std::span<const Table6Cell> cells) {
    os << "chain,delayed_blocks,nt_delay_s,n_val,delta_s,beta_max\n";
    for (const auto& c : cells) {
        fmt::print(os, "{},{},{},{},{:.6f},{:.6f}\n", to_string(c.chain), c.delayed_blocks, c.nt_s, c.n,
                   c.delta_s, c.beta_max);
    }
}

void write_table6_markdown(std::ostream& os, std::span<const Table6Cell> cells) {
    os << "| Chain | Network delay | n = 10^1 | n = 10^3 | n = 10^6 | n = 10^9 |\n";
    os << "|---|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < cells.size();) {
        const auto& first = cells[i];
        const std::string label =
            first.delayed_blocks == 0
                ? std::string("0 s (no attack)")
                : fmt::format("{} s (~{} delayed block{})", first.nt_s, first.delayed_blocks,
                              first.delayed_blocks > 1 ? "s" : "");
        fmt::print(os, "| {} | {} |", to_string(first.chain), label);
        for (std::size_t k = 0; k < std::size(kTable6N) && i < cells.size(); ++k, ++i) {
            fmt::print(os, " {:.4f} |", cells[i].beta_max);
        }
        os << '\n';
    }
}

CurvePoint curve_point(std::uint64_t n, const Fig1Params& params) {
    CurvePoint p;
    p.n = n;
    p.delta_s = secmath::adversarial_delay(static_cast<double>(n), params.fit, params.nt_s);
    p.beta_max = secmath::beta_max(params.rho, p.delta_s, params.e);
    p.nakamoto = secmath::nakamoto_coefficient(n, params.rho, p.delta_s, params.e);
    p.probability = secmath::security_probability(n, params.p_star, params.rho, p.delta_s, params.e);
    return p;
}

Fig1Result reproduce_fig1(const Fig1Params& params) {
    Fig1Result out;
    for (std::uint64_t n : secmath::log_grid(params.n_lo, params.n_hi, params.points_per_decade)) {
        out.curve.push_back(curve_point(n, params));
        if (out.curve.back().probability >= out.p_star_peak) {
            out.p_star_peak = out.curve.back().probability;
            out.n_star = n;
        }
    }
    for (std::uint64_t n : {10ull, 20'000ull, 1'000'000ull}) out.probes.push_back(curve_point(n, params));
    return out;
}

void write_curve_csv(std::ostream& os, std::span<const CurvePoint> curve) {
    os << "n_val,delta_s,beta_max,nakamoto_coefficient,security_probability\n";
    for (const auto& p : curve) {
        fmt::print(os, "{},{:.6f},{:.6f},{},{:.9e}\n", p.n, p.delta_s, p.beta_max, p.nakamoto, p.probability);
    }
}

std::vector<FrontierRow> max_delay_frontier(const FrontierSpec& spec) {
    if (spec.chains.empty() || spec.p_stars.empty() || spec.n_values.empty()) {
        throw ConfigError("frontier needs chains, p* values and n values");
    }
    std::vector<FrontierRow> rows;
    for (Chain chain : spec.chains) {
        const double interval = block_interval_s(chain);
        const auto fit = published_max_fit(chain);
        for (double p : spec.p_stars) {
            for (std::uint64_t n : spec.n_values) {
                FrontierRow r;
                r.chain = chain;
                r.p_star = p;
                r.n = n;
                r.tolerable = secmath::max_tolerable_delay(n, p, 1.0 / interval, spec.e, spec.target);
                r.benign_delta_s = secmath::adversarial_delay(static_cast<double>(n), fit, 0.0);
                r.one_block_delta_s = secmath::adversarial_delay(static_cast<double>(n), fit, interval);
                rows.push_back(r);
            }
        }
    }
    return rows;
}

void write_frontier_csv(std::ostream& os, std::span<const FrontierRow> rows) {
    os << "chain,p_star,n_val,status,max_tolerable_delta_s,benign_delta_s,one_block_delta_s\n";
    for (const auto& r : rows) {
        std::string_view status = "bounded";
        std::string delta = fmt::format("{:.3f}", r.tolerable.delta_s);
        if (r.tolerable.status == secmath::TolerableDelay::Status::Unbounded) {
            status = "unbounded";
            delta = "inf";
        } else if (r.tolerable.status == secmath::TolerableDelay::Status::Unreachable) {
            status = "unreachable";
        }
        fmt::print(os, "{},{},{},{},{},{:.6f},{:.6f}\n", to_string(r.chain), r.p_star, r.n, status, delta,
                   r.benign_delta_s, r.one_block_delta_s);
    }
}

// ---- artifacts ----

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, std::span<const Series> series) {
    constexpr double W = 760, H = 460, L = 80, R = 180, T = 40, B = 60;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = 0.0, y1 = -x0;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0) || !std::isfinite(y)) continue;
            x0 = std::min(x0, std::log10(x));
            x1 = std::max(x1, std::log10(x));
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1;
    if (x1 - x0 < 1e-9) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    x0 = std::floor(x0), x1 = std::ceil(x1);
    const double pw = W - L - R, ph = H - T - B;
    auto px = [&](double x) { return L + (std::log10(x) - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return T + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    fmt::print(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n",
        W, H);
    fmt::print(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    fmt::print(out, "<text x=\"{}\" y=\"22\" font-size=\"15\">{}</text>\n", L, xml_escape(title));
    fmt::print(out, "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
               L, T, pw, ph);
    for (int d = static_cast<int>(x0); d <= static_cast<int>(x1); ++d) {
        const double x = L + (d - x0) / (x1 - x0) * pw;
        fmt::print(out, "<line x1=\"{0:.1f}\" y1=\"{1}\" x2=\"{0:.1f}\" y2=\"{2}\" stroke=\"#ddd\"/>\n", x, T,
                   T + ph);
        fmt::print(out, "<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">1e{}</text>\n", x, T + ph + 18,
                   d);
    }
    for (int i = 0; i <= 5; ++i) {
        const double v = y0 + (y1 - y0) * i / 5.0;
        fmt::print(out, "<line x1=\"{}\" y1=\"{:.1f}\" x2=\"{}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n", L, py(v),
                   L + pw, py(v));
        fmt::print(out, "<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n", L - 6, py(v) + 4,
                   v);
    }
    fmt::print(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", L + pw / 2, H - 15,
               xml_escape(x_label));
    fmt::print(out,
               "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
               T + ph / 2, T + ph / 2, xml_escape(y_label));

    static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kColors[i % std::size(kColors)];
        std::string pts;
        for (const auto& [x, y] : series[i].points) {
            if (x > 0.0 && std::isfinite(y)) pts += fmt::format("{:.1f},{:.1f} ", px(x), py(y));
        }
        fmt::print(out, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
                   pts);
        const double ly = T + 14 + 18.0 * static_cast<double>(i);
        fmt::print(out,
                   "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                   L + pw + 12, ly, L + pw + 32, color);
        fmt::print(out, "<text x=\"{}\" y=\"{}\">{}</text>\n", L + pw + 38, ly + 4,
                   xml_escape(series[i].name));
    }
    out << "</svg>\n";
}

std::string config_hash(const ScenarioConfig& cfg) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump_scenario(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return fmt::format("{:016x}", h);
}

void write_manifest(const std::filesystem::path& dir, const Manifest& m) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

    nlohmann::ordered_json j;
    j["tool"] = "nakasim";
    j["version"] = NAKASIM_VERSION;
    j["command"] = m.command;
    j["arguments"] = m.arguments;
    j["config_hash"] =
        m.config_hash ? nlohmann::ordered_json(*m.config_hash) : nlohmann::ordered_json(nullptr);
    j["seeds"] = m.seeds;
    j["artifacts"] = m.artifacts;
    j["created_utc"] = stamp;
    std::ofstream out(dir / "manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
    out << j.dump(2) << '\n';
}

}  // namespace nakasim::experiments
