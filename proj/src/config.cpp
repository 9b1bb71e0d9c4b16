#include "hwlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace hwlab {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"model", {"q", "p", "v", "vy", "d", "L", "N"}},
        {"solver",
         {"rho", "tau0", "max_iters", "tol_residual", "tol_energy", "precondition", "multistart",
          "spread_kinetic_tol", "spread_energy_tol", "spread_window", "polish_iters",
          "pohozaev_delta"}},
        {"scan", {"rhos", "bracket_lo", "bracket_hi", "tol_rho", "bisect", "zero_branch_tol"}},
        {"evolve", {"dt", "t_final", "save_stride", "scheme", "rho", "field"}},
        {"stability",
         {"rho", "deltas", "shapes", "horizon", "dt", "save_stride", "seed", "kick_kappa",
          "dilation_lambda", "noise_bandwidth", "rho0_hi"}},
        {"output", {"root", "prefix"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated section header '" + t + "'");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
            c.sections_[section];
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value, got '" +
                              t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key +
                              "' outside any [section]");
        c.sections_[section][key] = val;
    }
    c.validate_schema();
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
}

void Config::validate_schema() const {
    for (const auto& [section, kv] : sections_) {
        auto it = schema().find(section);
        if (it == schema().end()) throw ConfigError("unknown config section '" + section + "'");
        for (const auto& [key, _] : kv)
            if (!it->second.count(key))
                throw ConfigError("unknown config key '" + section + "::" + key + "'");
    }
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw ConfigError("config key '" + section + "::" + key + "': not a number: '" + v + "'");
    }
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    try {
        std::size_t pos = 0;
        int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (...) {
        throw ConfigError("config key '" + section + "::" + key + "': not an integer: '" + v + "'");
    }
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = get(section, key, "");
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigError("config key '" + section + "::" + key + "': not a boolean: '" + v + "'");
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    std::vector<double> out;
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw ConfigError("config key '" + section + "::" + key + "': bad list entry '" + tok +
                              "'");
        }
    }
    if (out.empty())
        throw ConfigError("config key '" + section + "::" + key + "': empty list");
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

std::string Config::serialize() const {
    std::ostringstream os;
    for (const auto& [section, kv] : sections_) {
        os << "[" << section << "]\n";
        for (const auto& [key, val] : kv) os << key << " = " << val << "\n";
        os << "\n";
    }
    return os.str();
}

ModelParams model_from(const Config& c) {
    ModelParams m;
    m.d = c.get_int("model", "d", 1);
    m.q = c.get_double("model", "q", 1.5);
    m.p = c.get_double("model", "p", 1.8);
    m.v[0] = c.get_double("model", "v", 0.0);
    m.v[1] = c.get_double("model", "vy", 0.0);
    m.L = c.get_double("model", "L", m.d == 1 ? 80.0 : 80.0 * std::sqrt(2.0));
    m.N = c.get_int("model", "N", m.d == 1 ? 1024 : 256);
    m.validate();
    return m;
}

SolveConfig solve_from(const Config& c) {
    SolveConfig s;
    s.tau0 = c.get_double("solver", "tau0", s.tau0);
    s.max_iters = c.get_int("solver", "max_iters", s.max_iters);
    s.tol_residual = c.get_double("solver", "tol_residual", s.tol_residual);
    s.tol_energy = c.get_double("solver", "tol_energy", s.tol_energy);
    s.precondition = c.get_bool("solver", "precondition", s.precondition);
    s.spread_kinetic_tol = c.get_double("solver", "spread_kinetic_tol", s.spread_kinetic_tol);
    s.spread_energy_tol = c.get_double("solver", "spread_energy_tol", s.spread_energy_tol);
    s.spread_window = c.get_int("solver", "spread_window", s.spread_window);
    s.polish_iters = c.get_int("solver", "polish_iters", s.polish_iters);
    s.pohozaev_delta = c.get_double("solver", "pohozaev_delta", s.pohozaev_delta);
    if (c.has("solver", "multistart")) {
        s.multistart.clear();
        std::istringstream is(c.get("solver", "multistart", ""));
        std::string tok;
        while (std::getline(is, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            auto colon = tok.find(':');
            std::string kind = tok.substr(0, colon);
            if (kind == "flat") {
                s.multistart.push_back(Initializer::flat());
            } else if (colon != std::string::npos && (kind == "gauss" || kind == "gaussian")) {
                s.multistart.push_back(Initializer::gaussian(std::stod(tok.substr(colon + 1))));
            } else if (colon != std::string::npos && kind == "witness") {
                s.multistart.push_back(Initializer::witness(std::stod(tok.substr(colon + 1))));
            } else {
                throw ConfigError("config key 'solver::multistart': bad entry '" + tok + "'");
            }
        }
        if (s.multistart.empty()) throw ConfigError("config key 'solver::multistart': empty list");
    }
    return s;
}

ScanConfig scan_config_from(const Config& c) {
    ScanConfig sc;
    sc.solve = solve_from(c);
    sc.zero_branch_tol = c.get_double("scan", "zero_branch_tol", sc.zero_branch_tol);
    return sc;
}

EvolveConfig evolve_from(const Config& c) {
    EvolveConfig e;
    e.dt = c.get_double("evolve", "dt", e.dt);
    e.t_final = c.get_double("evolve", "t_final", e.t_final);
    e.save_stride = c.get_int("evolve", "save_stride", e.save_stride);
    std::string scheme = c.get("evolve", "scheme", "strang");
    if (scheme == "strang") e.scheme = SplitScheme::strang;
    else if (scheme == "lie") e.scheme = SplitScheme::lie;
    else throw ConfigError("config key 'evolve::scheme': expected strang or lie, got '" + scheme + "'");
    return e;
}

StabilityConfig stability_from(const Config& c) {
    StabilityConfig s;
    s.horizon = c.get_double("stability", "horizon", s.horizon);
    s.dt = c.get_double("stability", "dt", s.dt);
    s.save_stride = c.get_int("stability", "save_stride", s.save_stride);
    s.seed = static_cast<std::uint64_t>(c.get_int("stability", "seed", 1));
    s.kick_kappa = c.get_double("stability", "kick_kappa", s.kick_kappa);
    s.dilation_lambda = c.get_double("stability", "dilation_lambda", s.dilation_lambda);
    s.noise_bandwidth = c.get_double("stability", "noise_bandwidth", s.noise_bandwidth);
    return s;
}

}  // namespace hwlab
