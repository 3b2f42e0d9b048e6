#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "qlink/errors.hpp"
#include "qlink/params.hpp"
#include "qlink/protocol_config.hpp"
#include "qlink/simulate.hpp"

namespace qlink {

inline constexpr int kConfigSchemaVersion = 1;

/// Everything a run needs. Defaults reproduce the bundled experiments; a
/// config file overrides defaults; command-line flags override the file.
struct Config {
    NetworkParams params;
    ProtocolConfig proto;
    std::optional<double> distance_km;  // no default: must come from file or flag
    SimSettings sim;

    bool operator==(const Config&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a number");
    }
}

inline std::int64_t parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as an integer");
    }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a boolean");
}

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);  // round-trips exactly
    return buf;
}

}  // namespace detail

/// Apply one key = value assignment. Shared by the file parser and by CLI
/// overrides so precedence is just application order.
inline void apply_config_entry(Config& cfg, const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    if (key == "p_out") cfg.params.p_out = parse_double(key, value);
    else if (key == "p_fc") cfg.params.p_fc = parse_double(key, value);
    else if (key == "alpha_db_per_km") cfg.params.alpha_db_per_km = parse_double(key, value);
    else if (key == "t_eg_us") cfg.params.t_eg = microseconds(parse_double(key, value));
    else if (key == "t_sg_us") cfg.params.t_sg = microseconds(parse_double(key, value));
    else if (key == "c_fiber_m_per_s") cfg.params.c_fiber = parse_double(key, value);
    else if (key == "distance_km") cfg.distance_km = parse_double(key, value);
    else if (key == "protocol") {
        auto p = parse_protocol(value);
        if (!p) throw ConfigError("config key 'protocol': expected mbk, mepl or mps, got '" + value + "'");
        cfg.proto.protocol = *p;
    } else if (key == "n_qubits") cfg.proto.n_qubits = static_cast<int>(parse_int(key, value));
    else if (key == "p_em") cfg.proto.p_em = parse_double(key, value);
    else if (key == "cutoff") {
        if (value == "unlimited") cfg.proto.cutoff.reset();
        else cfg.proto.cutoff = parse_int(key, value);
    } else if (key == "epl_locc_delay") cfg.proto.epl_locc_delay = parse_bool(key, value);
    else if (key == "seed") cfg.sim.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "replications") cfg.sim.replications = static_cast<int>(parse_int(key, value));
    else if (key == "successes_per_replication") cfg.sim.successes_per_replication = parse_int(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

/// Parse `key = value` lines; '#' starts a comment; blank lines are fine.
/// Every key has a default, so an empty stream is a valid config.
inline Config parse_config(std::istream& in, Config base = {}) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        try {
            apply_config_entry(base, key, value);
        } catch (const ConfigError& ex) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return base;
}

inline Config load_config_file(const std::string& path, Config base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

/// Effective configuration as a config file. parse_config(dump_config(c))
/// reproduces c exactly.
inline std::string dump_config(const Config& cfg) {
    using detail::fmt_double;
    std::ostringstream out;
    out << "# schema version " << kConfigSchemaVersion << "\n";
    out << "p_out = " << fmt_double(cfg.params.p_out) << "\n";
    out << "p_fc = " << fmt_double(cfg.params.p_fc) << "\n";
    out << "alpha_db_per_km = " << fmt_double(cfg.params.alpha_db_per_km) << "\n";
    out << "t_eg_us = " << fmt_double(cfg.params.t_eg / 1e-6) << "\n";
    out << "t_sg_us = " << fmt_double(cfg.params.t_sg / 1e-6) << "\n";
    out << "c_fiber_m_per_s = " << fmt_double(cfg.params.c_fiber) << "\n";
    if (cfg.distance_km) out << "distance_km = " << fmt_double(*cfg.distance_km) << "\n";
    out << "protocol = " << to_string(cfg.proto.protocol) << "\n";
    out << "n_qubits = " << cfg.proto.n_qubits << "\n";
    out << "p_em = " << fmt_double(cfg.proto.p_em) << "\n";
    out << "cutoff = " << (cfg.proto.cutoff ? std::to_string(*cfg.proto.cutoff) : std::string("unlimited")) << "\n";
    out << "epl_locc_delay = " << (cfg.proto.epl_locc_delay ? "on" : "off") << "\n";
    out << "seed = " << cfg.sim.seed << "\n";
    out << "replications = " << cfg.sim.replications << "\n";
    out << "successes_per_replication = " << cfg.sim.successes_per_replication << "\n";
    return out.str();
}

/// FNV-1a over the canonical dump; identifies a configuration in outputs.
inline std::uint64_t config_hash(const Config& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump_config(cfg)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace qlink
