#include "sisdde/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sisdde {

namespace {

const std::set<std::string> kModelKeys = {"alpha", "d", "mu", "gamma", "beta", "tau",
                                          "omega", "d1",  "d2", "d3",    "l"};

const std::set<std::string> kSimKeys = {
    "grid_points", "dt", "t_end", "record_every", "scheme",
    "init_S_const", "init_S_amp", "init_S_mode",
    "init_I_const", "init_I_amp", "init_I_mode",
    "init_y_const", "init_y_amp", "init_y_mode",
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

} // namespace

bool KeyValueConfig::has(const std::string& key) const { return values.count(key) > 0; }

double KeyValueConfig::get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw std::invalid_argument("missing config key: " + key);
    return it->second;
}

double KeyValueConfig::get_or(const std::string& key, double def) const {
    auto it = values.find(key);
    return it == values.end() ? def : it->second;
}

KeyValueConfig parse_config(const std::string& text, const std::string& origin) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                        ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key or value");
        if (!kModelKeys.count(key) && !kSimKeys.count(key))
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (key == "scheme") {
            if (val != "semi_implicit" && val != "explicit")
                throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                            ": bad value for key 'scheme': '" + val +
                                            "' (expected semi_implicit or explicit)");
            cfg.strings[key] = val;
            continue;
        }
        try {
            std::size_t used = 0;
            const double x = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
            cfg.values[key] = x;
        } catch (const std::exception&) {
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": bad value for key '" +
                                        key + "': '" + val + "'");
        }
    }
    return cfg;
}

KeyValueConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str(), path);
}

ModelParams params_from_config(const KeyValueConfig& cfg) {
    ModelParams p;
    p.alpha = cfg.get("alpha");
    p.d = cfg.get("d");
    p.mu = cfg.get("mu");
    p.gamma = cfg.get("gamma");
    p.beta = cfg.get("beta");
    p.tau = cfg.get("tau");
    p.omega = cfg.get("omega");
    p.d1 = cfg.get("d1");
    p.d2 = cfg.get("d2");
    p.d3 = cfg.get("d3");
    p.l = cfg.get("l");
    require_valid(p);
    return p;
}

SimConfig sim_from_config(const KeyValueConfig& cfg, const ModelParams& p) {
    SimConfig s;
    s.grid_points = int(cfg.get_or("grid_points", 192));
    s.dt = cfg.get_or("dt", 0.0);
    s.t_end = cfg.get_or("t_end", 500.0);
    s.record_every = int(cfg.get_or("record_every", 50));
    if (auto it = cfg.strings.find("scheme"); it != cfg.strings.end()) {
        if (it->second == "semi_implicit")
            s.scheme = Scheme::semi_implicit;
        else if (it->second == "explicit")
            s.scheme = Scheme::explicit_rk2;
        else
            throw std::invalid_argument("unknown scheme '" + it->second +
                                        "' (expected semi_implicit or explicit)");
    }
    const auto eq = equilibria(p);
    const State base = eq.E2 ? *eq.E2 : eq.E1;
    const char* names[3] = {"S", "I", "y"};
    for (int i = 0; i < 3; ++i) {
        const std::string pre = std::string("init_") + names[i] + "_";
        s.initial[std::size_t(i)].offset = cfg.get_or(pre + "const", base[std::size_t(i)]);
        s.initial[std::size_t(i)].amplitude = cfg.get_or(pre + "amp", 0.0);
        s.initial[std::size_t(i)].wavenumber = cfg.get_or(pre + "mode", 0.0);
    }
    return s;
}

} // namespace sisdde
