#include "nakasim/config_io.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "nakasim/netmodel.hpp"

namespace nakasim {

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

class Reader {
public:
    // dotted key -> line where it was written
    std::map<std::string, int> lines;

    template <class T>
    T scalar(const YAML::Node& n, const std::string& field, std::string_view expected) {
        if (!n.IsScalar())
            throw ConfigError(field + ": expected " + std::string(expected), line_of(n), field);
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError(field + ": expected " + std::string(expected) + ", got '" + n.Scalar() + "'",
                              line_of(n), field);
        }
    }

    double real(const YAML::Node& n, const std::string& field) {
        return scalar<double>(n, field, "a number");
    }
    bool boolean(const YAML::Node& n, const std::string& field) {
        return scalar<bool>(n, field, "true or false");
    }
    std::string text(const YAML::Node& n, const std::string& field) {
        return scalar<std::string>(n, field, "a string");
    }

    std::uint64_t uint(const YAML::Node& n, const std::string& field,
                       std::uint64_t max = std::numeric_limits<std::uint64_t>::max()) {
        if (n.IsScalar() && !n.Scalar().empty() && n.Scalar()[0] == '-') {
            throw ConfigError(field + " must be a non-negative integer", line_of(n), field);
        }
        const auto v = scalar<std::uint64_t>(n, field, "a non-negative integer");
        if (v > max) throw ConfigError(field + " is out of range", line_of(n), field);
        return v;
    }
    std::uint32_t u32(const YAML::Node& n, const std::string& field) {
        return static_cast<std::uint32_t>(uint(n, field, std::numeric_limits<std::uint32_t>::max()));
    }
    SimTimeMs ms(const YAML::Node& n, const std::string& field) {
        return static_cast<SimTimeMs>(uint(n, field, std::numeric_limits<std::int64_t>::max()));
    }

    std::vector<double> reals(const YAML::Node& n, const std::string& field) {
        if (!n.IsSequence()) throw ConfigError(field + ": expected a list of numbers", line_of(n), field);
        std::vector<double> out;
        for (const auto& item : n) out.push_back(real(item, field));
        return out;
    }

    // Calls fn(key, value, dotted) for every entry; rejects keys outside `allowed`.
    template <class Fn>
    void each(const YAML::Node& map, const std::string& section,
              std::initializer_list<std::string_view> allowed, Fn&& fn) {
        if (!map.IsMap()) {
            throw ConfigError((section.empty() ? std::string("document") : section) + " must be a mapping",
                              line_of(map), section);
        }
        for (const auto& kv : map) {
            const auto key = kv.first.as<std::string>();
            const std::string dotted = section.empty() ? key : section + "." + key;
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                throw ConfigError("unknown key '" + dotted + "'", line_of(kv.first), dotted);
            }
            lines[dotted] = line_of(kv.first);
            fn(key, kv.second, dotted);
        }
    }

    std::optional<int> locate(const std::string& field) const {
        for (std::string f = field; !f.empty();) {
            if (auto it = lines.find(f); it != lines.end()) return it->second;
            const auto dot = f.rfind('.');
            if (dot == std::string::npos) break;
            f.resize(dot);
        }
        return std::nullopt;
    }
};

void read_security(Reader& r, const YAML::Node& node, SecurityParams& s) {
    bool have_p_star = false;
    bool have_characterization = false;
    r.each(node, "security", {"rho", "e", "p_star", "characterization"},
           [&](const std::string& key, const YAML::Node& v, const std::string& f) {
               if (key == "rho") {
                   s.rho = r.real(v, f);
               } else if (key == "e") {
                   s.e = r.real(v, f);
               } else if (key == "p_star") {
                   have_p_star = true;
                   s.corruption = Characterization::uniform(r.real(v, f));
               } else {
                   have_characterization = true;
                   if (!v.IsSequence() || v.size() == 0) {
                       throw ConfigError(f + ": expected a non-empty list of {q, c} entries", line_of(v), f);
                   }
                   Characterization ch;
                   for (const auto& item : v) {
                       Characterization::Entry entry;
                       bool q = false, c = false;
                       r.each(item, f, {"q", "c"},
                              [&](const std::string& k, const YAML::Node& x, const std::string& g) {
                                  (k == "q" ? entry.q : entry.c) = r.real(x, g);
                                  (k == "q" ? q : c) = true;
                              });
                       if (!q || !c) throw ConfigError(f + ": every entry needs q and c", line_of(item), f);
                       ch.entries.push_back(entry);
                   }
                   s.corruption = std::move(ch);
               }
           });
    if (have_p_star && have_characterization) {
        // point at whichever of the two came second
        const int line = std::max(r.lines["security.p_star"], r.lines["security.characterization"]);
        throw ConfigError("security: give either p_star or characterization, not both", line, "security");
    }
}

void read_network(Reader& r, const YAML::Node& node, NetworkConfig& net) {
    r.each(node, "network",
           {"regions", "latency_ms", "upload_Bps", "download_Bps", "region_weights", "verification_delay_ms",
            "high_speed_overlay"},
           [&](const std::string& key, const YAML::Node& v, const std::string& f) {
               if (key == "regions") {
                   if (!v.IsSequence()) throw ConfigError(f + ": expected a list of names", line_of(v), f);
                   net.regions.clear();
                   for (const auto& item : v) net.regions.push_back(r.text(item, f));
               } else if (key == "latency_ms") {
                   if (!v.IsSequence()) throw ConfigError(f + ": expected a list of rows", line_of(v), f);
                   net.latency_ms.clear();
                   for (const auto& row : v) net.latency_ms.push_back(r.reals(row, f));
               } else if (key == "upload_Bps") {
                   net.upload_Bps = r.reals(v, f);
               } else if (key == "download_Bps") {
                   net.download_Bps = r.reals(v, f);
               } else if (key == "region_weights") {
                   net.region_weights = r.reals(v, f);
               } else if (key == "verification_delay_ms") {
                   net.verification_delay_ms = r.ms(v, f);
               } else {
                   net.high_speed_overlay = r.boolean(v, f);
               }
           });
}

void read_adversary(Reader& r, const YAML::Node& node, AdversaryConfig& a) {
    r.each(node, "adversary", {"enabled", "p_hat", "p_con", "nt_delay_ms", "delay_all_messages"},
           [&](const std::string& key, const YAML::Node& v, const std::string& f) {
               if (key == "enabled")
                   a.enabled = r.boolean(v, f);
               else if (key == "p_hat")
                   a.p_hat = r.real(v, f);
               else if (key == "p_con")
                   a.p_con = r.real(v, f);
               else if (key == "nt_delay_ms")
                   a.nt_delay_ms = r.ms(v, f);
               else
                   a.delay_all_messages = r.boolean(v, f);
           });
}

void read_gossip(Reader& r, const YAML::Node& node, GossipConfig& g) {
    r.each(node, "gossip",
           {"request_timeout_ms", "compact_fraction", "missing_tx_probability", "missing_tx_fraction",
            "control_message_bytes"},
           [&](const std::string& key, const YAML::Node& v, const std::string& f) {
               if (key == "request_timeout_ms")
                   g.request_timeout_ms = r.ms(v, f);
               else if (key == "compact_fraction")
                   g.compact_fraction = r.real(v, f);
               else if (key == "missing_tx_probability")
                   g.missing_tx_probability = r.real(v, f);
               else if (key == "missing_tx_fraction")
                   g.missing_tx_fraction = r.real(v, f);
               else
                   g.control_message_bytes = r.uint(v, f);
           });
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& err) {
        throw ConfigError("malformed YAML: " + err.msg, err.mark.line + 1);
    }
    if (!root.IsMap()) throw ConfigError("scenario file must be a mapping of keys to values", 1);

    Reader r;
    ScenarioConfig cfg;
    if (const auto p = root["preset"]) {
        try {
            cfg = preset(r.text(p, "preset"));
        } catch (const ConfigError& err) {
            throw ConfigError(err.message(), line_of(p), "preset");
        }
    }

    r.each(root, "",
           {"preset", "name", "n_val", "n_zp", "protocol", "block_size_bytes", "d_out", "seed", "num_blocks",
            "runs", "security", "network", "adversary", "gossip"},
           [&](const std::string& key, const YAML::Node& v, const std::string& f) {
               if (key == "preset") return;
               if (key == "name")
                   cfg.name = r.text(v, f);
               else if (key == "n_val")
                   cfg.n_val = r.u32(v, f);
               else if (key == "n_zp")
                   cfg.n_zp = r.u32(v, f);
               else if (key == "protocol") {
                   try {
                       cfg.protocol = protocol_from_string(r.text(v, f));
                   } catch (const ConfigError& err) {
                       throw ConfigError(err.message() +
                                             " (expected advertisement_based, direct_push, hybrid_push or "
                                             "compact_blocks_low)",
                                         line_of(v), f);
                   }
               } else if (key == "block_size_bytes")
                   cfg.block_size_bytes = r.uint(v, f);
               else if (key == "d_out")
                   cfg.d_out = r.u32(v, f);
               else if (key == "seed")
                   cfg.seed = r.uint(v, f);
               else if (key == "num_blocks")
                   cfg.num_blocks = r.u32(v, f);
               else if (key == "runs")
                   cfg.runs = r.u32(v, f);
               else if (key == "security")
                   read_security(r, v, cfg.security);
               else if (key == "network")
                   read_network(r, v, cfg.network);
               else if (key == "adversary")
                   read_adversary(r, v, cfg.adversary);
               else
                   read_gossip(r, v, cfg.gossip);
           });

    try {
        cfg.validate();
    } catch (const ConfigError& err) {
        if (err.line()) throw;
        throw ConfigError(err.message(), r.locate(err.field()), err.field());
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

namespace {

// Shortest representation that reads back to the same double.
std::string num(double x) { return fmt::format("{}", x); }

std::string list(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + num(xs[i]);
    return out + "]";
}

std::string quoted(const std::string& s) {
    YAML::Emitter e;
    e << YAML::DoubleQuoted << s;
    return e.c_str();
}

}  // namespace

std::string dump_scenario(const ScenarioConfig& cfg) {
    std::string out;
    auto line = [&out](std::string s) { out += std::move(s) + "\n"; };
    line("name: " + quoted(cfg.name));
    line(fmt::format("n_val: {}", cfg.n_val));
    line(fmt::format("n_zp: {}", cfg.n_zp));
    line(fmt::format("protocol: {}", to_string(cfg.protocol)));
    line(fmt::format("block_size_bytes: {}", cfg.block_size_bytes));
    line(fmt::format("d_out: {}", cfg.d_out));
    line(fmt::format("seed: {}", cfg.seed));
    line(fmt::format("num_blocks: {}", cfg.num_blocks));
    line(fmt::format("runs: {}", cfg.runs));

    line("security:");
    line("  rho: " + num(cfg.security.rho));
    line("  e: " + num(cfg.security.e));
    const auto& entries = cfg.security.corruption.entries;
    if (entries.size() == 1 && entries[0].c == 1.0) {
        line("  p_star: " + num(entries[0].q));
    } else {
        line("  characterization:");
        for (const auto& en : entries) line("    - {q: " + num(en.q) + ", c: " + num(en.c) + "}");
    }

    const auto& net = cfg.network;
    line("network:");
    std::string regions = "  regions: [";
    for (std::size_t i = 0; i < net.regions.size(); ++i) regions += (i ? ", " : "") + quoted(net.regions[i]);
    line(regions + "]");
    line("  latency_ms:");
    for (const auto& row : net.latency_ms) line("    - " + list(row));
    line("  upload_Bps: " + list(net.upload_Bps));
    line("  download_Bps: " + list(net.download_Bps));
    line("  region_weights: " + list(net.region_weights));
    line(fmt::format("  verification_delay_ms: {}", net.verification_delay_ms));
    line(fmt::format("  high_speed_overlay: {}", net.high_speed_overlay));

    const auto& a = cfg.adversary;
    line("adversary:");
    line(fmt::format("  enabled: {}", a.enabled));
    line("  p_hat: " + num(a.p_hat));
    line("  p_con: " + num(a.p_con));
    line(fmt::format("  nt_delay_ms: {}", a.nt_delay_ms));
    line(fmt::format("  delay_all_messages: {}", a.delay_all_messages));

    const auto& g = cfg.gossip;
    line("gossip:");
    line(fmt::format("  request_timeout_ms: {}", g.request_timeout_ms));
    line("  compact_fraction: " + num(g.compact_fraction));
    line("  missing_tx_probability: " + num(g.missing_tx_probability));
    line("  missing_tx_fraction: " + num(g.missing_tx_fraction));
    line(fmt::format("  control_message_bytes: {}", g.control_message_bytes));
    return out;
}

}  // namespace nakasim
