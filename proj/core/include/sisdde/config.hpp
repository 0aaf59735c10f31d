#pragma once

#include "sisdde/model.hpp"
#include "sisdde/simulator.hpp"

#include <map>
#include <string>

namespace sisdde {

/// Flat key-value config file: one `key = value` per line, `#` comments.
/// Unknown keys are rejected with a diagnostic naming the key.
struct KeyValueConfig {
    std::map<std::string, double> values;
    std::map<std::string, std::string> strings; ///< non-numeric entries (e.g. scheme)

    bool has(const std::string& key) const;
    double get(const std::string& key) const;               ///< throws if missing
    double get_or(const std::string& key, double def) const;
};

KeyValueConfig load_config(const std::string& path);
KeyValueConfig parse_config(const std::string& text, const std::string& origin = "<string>");

/// Model keys: alpha d mu gamma beta tau omega d1 d2 d3 l (all required).
ModelParams params_from_config(const KeyValueConfig& cfg);

/// Simulator keys (all optional): grid_points dt t_end record_every scheme,
/// and init_{S,I,y}_{const,amp,mode} for the profiles c_i + a_i cos(k_i x).
/// Missing init constants default to the endemic equilibrium (disease-free
/// when R0 <= 1).
SimConfig sim_from_config(const KeyValueConfig& cfg, const ModelParams& p);

} // namespace sisdde
