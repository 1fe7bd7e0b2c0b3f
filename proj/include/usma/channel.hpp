#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "usma/config.hpp"

namespace usma {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

// Per-(subchannel, user) linear power gains plus the user layout behind them.
struct ChannelState {
    std::vector<Position> positions;          // one per user
    std::vector<std::vector<double>> gains;   // [subchannel][user], |h_kj|^2

    int n_subchannels() const { return static_cast<int>(gains.size()); }
    int n_users() const { return static_cast<int>(positions.size()); }
};

// Okumura-Hata urban (medium city) path loss in dB.
// Distances below 1 m are clamped to 1 m.
inline double hata_path_loss(double distance_m, const ScenarioConfig& cfg) {
    if (cfg.carrier_freq < 150.0 || cfg.carrier_freq > 1500.0)
        throw ConfigError("carrier_freq: outside Hata validity range [150, 1500] MHz");
    const double d_km = std::max(distance_m, 1.0) / 1000.0;
    const double lf = std::log10(cfg.carrier_freq);
    const double lhb = std::log10(cfg.bs_height);
    const double a_hm = (1.1 * lf - 0.7) * cfg.ms_height - (1.56 * lf - 0.8);
    return 69.55 + 26.16 * lf - 13.82 * lhb - a_hm +
           (44.9 - 6.55 * lhb) * std::log10(d_km);
}

// Uniform user placement over the square [0, area_side]^2.
inline std::vector<Position> place_users(const ScenarioConfig& cfg, std::mt19937_64& rng) {
    validate(cfg);
    std::uniform_real_distribution<double> coord(0.0, cfg.area_side);
    std::vector<Position> pos(cfg.n_users);
    for (auto& p : pos) {
        p.x = coord(rng);
        p.y = coord(rng);
    }
    return pos;
}

// Base station sits at the square center.
inline double distance_to_bs(const Position& p, const ScenarioConfig& cfg) {
    const double c = cfg.area_side / 2.0;
    return std::hypot(p.x - c, p.y - c);
}

// gains[k][j] = 10^(-L(d_j)/10) * x_kj, with x_kj unit-mean exponential
// fading (independent per link) unless cfg.fading is off.
inline ChannelState build_channel(const ScenarioConfig& cfg, std::mt19937_64& rng) {
    validate(cfg);
    ChannelState ch;
    ch.positions = place_users(cfg, rng);

    std::vector<double> base_gain(cfg.n_users);
    for (int j = 0; j < cfg.n_users; ++j) {
        const double loss_db = hata_path_loss(distance_to_bs(ch.positions[j], cfg), cfg);
        base_gain[j] = std::pow(10.0, -loss_db / 10.0);
    }

    std::exponential_distribution<double> fade(1.0);
    ch.gains.assign(cfg.n_subchannels, std::vector<double>(cfg.n_users));
    for (int k = 0; k < cfg.n_subchannels; ++k)
        for (int j = 0; j < cfg.n_users; ++j)
            ch.gains[k][j] = base_gain[j] * (cfg.fading ? fade(rng) : 1.0);
    return ch;
}

}  // namespace usma
