#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "usma/config.hpp"

namespace usma {

inline SwapRule swap_rule_from_string(const std::string& s) {
    if (s == "sum_rate") return SwapRule::SumRate;
    if (s == "pareto") return SwapRule::Pareto;
    throw ConfigError("swap_rule: expected \"sum_rate\" or \"pareto\", got \"" + s + "\"");
}

inline std::string to_string(SwapRule r) {
    return r == SwapRule::SumRate ? "sum_rate" : "pareto";
}

// Overlay JSON fields onto cfg; unknown keys are rejected so typos fail
// loudly. Does not validate ranges, call validate() afterwards.
inline void apply_json(ScenarioConfig& cfg, const nlohmann::json& j) {
    for (const auto& [key, val] : j.items()) {
        try {
            if (key == "n_users") cfg.n_users = val.get<int>();
            else if (key == "n_subchannels") cfg.n_subchannels = val.get<int>();
            else if (key == "d_v") cfg.d_v = val.get<int>();
            else if (key == "d_f") cfg.d_f = val.get<int>();
            else if (key == "area_side") cfg.area_side = val.get<double>();
            else if (key == "carrier_freq") cfg.carrier_freq = val.get<double>();
            else if (key == "bs_height") cfg.bs_height = val.get<double>();
            else if (key == "ms_height") cfg.ms_height = val.get<double>();
            else if (key == "user_tx_power") cfg.user_tx_power = val.get<double>();
            else if (key == "noise_power") cfg.noise_power = val.get<double>();
            else if (key == "fading") cfg.fading = val.get<bool>();
            else if (key == "swap_rule") cfg.swap_rule = swap_rule_from_string(val.get<std::string>());
            else if (key == "swap_epsilon") cfg.swap_epsilon = val.get<double>();
            else if (key == "max_iterations") cfg.max_iterations = val.get<int>();
            else if (key == "min_rate_threshold") cfg.min_rate_threshold = val.get<double>();
            else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
            else throw ConfigError("unknown config key: " + key);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(key + ": " + e.what());
        }
    }
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    ScenarioConfig cfg;
    apply_json(cfg, j);
    return cfg;
}

}  // namespace usma
