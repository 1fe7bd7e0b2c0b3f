#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace usma {

// Swap acceptance rule used by the matching loop.
enum class SwapRule {
    SumRate,  // accept if total sum-rate improves by more than swap_epsilon
    Pareto,   // accept if all four involved players are non-worse and one improves
};

// All problem parameters for one scenario instance.
struct ScenarioConfig {
    int n_users = 100;
    int n_subchannels = 10;
    int d_v = 3;  // max subchannels per user
    int d_f = 5;  // max users per subchannel

    double area_side = 350.0;    // meters
    double carrier_freq = 900.0; // MHz, Hata validity 150..1500
    double bs_height = 30.0;     // meters
    double ms_height = 1.5;      // meters

    double user_tx_power = 0.2;  // watts, total per-user budget
    double noise_power = 1e-14;  // watts
    bool fading = true;          // unit-mean exponential power fading; off = path loss only

    SwapRule swap_rule = SwapRule::SumRate;
    double swap_epsilon = 1e-9;
    int max_iterations = 0;      // 0 = default 10 * n_users * n_subchannels
    double min_rate_threshold = 0.0;  // scheduled-user rate floor (bit/s/Hz)

    std::uint64_t seed = 1;

    int effective_max_iterations() const {
        return max_iterations > 0 ? max_iterations : 10 * n_users * n_subchannels;
    }
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Throws ConfigError naming the offending field.
inline void validate(const ScenarioConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (cfg.n_users < 1) fail("n_users: must be >= 1");
    if (cfg.n_subchannels < 1) fail("n_subchannels: must be >= 1");
    if (cfg.d_v < 1 || cfg.d_v > cfg.n_subchannels)
        fail("d_v: must satisfy 1 <= d_v <= n_subchannels");
    if (cfg.d_f < 1 || cfg.d_f > cfg.n_users)
        fail("d_f: must satisfy 1 <= d_f <= n_users");
    if (!(cfg.area_side > 0.0)) fail("area_side: must be > 0");
    if (cfg.carrier_freq < 150.0 || cfg.carrier_freq > 1500.0)
        fail("carrier_freq: outside Hata validity range [150, 1500] MHz");
    if (!(cfg.bs_height > 0.0)) fail("bs_height: must be > 0");
    if (!(cfg.ms_height > 0.0)) fail("ms_height: must be > 0");
    if (!(cfg.user_tx_power > 0.0)) fail("user_tx_power: must be > 0");
    if (!(cfg.noise_power > 0.0)) fail("noise_power: must be > 0");
    if (cfg.swap_epsilon < 0.0) fail("swap_epsilon: must be >= 0");
    if (cfg.max_iterations < 0) fail("max_iterations: must be >= 0");
    if (cfg.min_rate_threshold < 0.0) fail("min_rate_threshold: must be >= 0");
}

// splitmix64 finalizer, used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(base ^ (a * 0x9e3779b97f4a7c15ULL)) ^ b);
}

}  // namespace usma
