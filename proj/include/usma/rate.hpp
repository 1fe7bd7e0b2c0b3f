#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "usma/channel.hpp"
#include "usma/config.hpp"
#include "usma/matching.hpp"

namespace usma {

// Per-(subchannel, user) transmit powers in watts. Zero off-matching.
struct PowerAllocation {
    std::vector<std::vector<double>> p;  // [subchannel][user]
};

struct RateReport {
    std::vector<std::vector<double>> link_rate;  // [subchannel][user], bit/s/Hz
    std::vector<double> user_rate;
    std::vector<double> sub_rate;
    double sum_rate = 0.0;
    int scheduled_users = 0;
};

// p[k][j] = P / |Psi(N_j)| on matched pairs, 0 elsewhere.
inline PowerAllocation equal_power_split(const Matching& m, const ScenarioConfig& cfg) {
    PowerAllocation pa;
    pa.p.assign(m.n_subchannels(), std::vector<double>(m.n_users(), 0.0));
    for (int j = 0; j < m.n_users(); ++j) {
        const auto& subs = m.subs_of(j);
        if (subs.empty()) continue;
        const double share = cfg.user_tx_power / static_cast<double>(subs.size());
        for (int k : subs) pa.p[k][j] = share;
    }
    return pa;
}

namespace detail {

// Decode order on one subchannel: descending gain, ties by lower user
// index first. A user is interfered by everyone decoded after it.
inline std::vector<int> decode_order(const std::vector<int>& users,
                                     const std::vector<double>& gains_k) {
    std::vector<int> order = users;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (gains_k[a] != gains_k[b]) return gains_k[a] > gains_k[b];
        return a < b;
    });
    return order;
}

}  // namespace detail

// SIC interference seen by user j on subchannel k: received power of every
// co-user decoded after j.
inline double interference(int k, int j, const Matching& m, const PowerAllocation& pa,
                           const ChannelState& ch) {
    if (!m.contains(k, j))
        throw std::invalid_argument("interference: (subchannel, user) not matched");
    const auto order = detail::decode_order(m.users_of(k), ch.gains[k]);
    double acc = 0.0;
    bool after_j = false;
    for (int u : order) {
        if (after_j) acc += pa.p[k][u] * ch.gains[k][u];
        if (u == j) after_j = true;
    }
    return acc;
}

// Rates for one subchannel's user set under the SIC decode order.
// Walking the order back-to-front accumulates each user's interference.
inline double subchannel_rate(int k, const std::vector<int>& users,
                              const PowerAllocation& pa, const ChannelState& ch,
                              const ScenarioConfig& cfg,
                              std::vector<std::pair<int, double>>* per_user = nullptr) {
    const auto order = detail::decode_order(users, ch.gains[k]);
    double rate = 0.0;
    double interf = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int u = *it;
        const double rx = pa.p[k][u] * ch.gains[k][u];
        const double r = std::log2(1.0 + rx / (cfg.noise_power + interf));
        rate += r;
        if (per_user) per_user->emplace_back(u, r);
        interf += rx;
    }
    return rate;
}

// Full rate report for a matching under a given power allocation.
inline RateReport evaluate(const Matching& m, const PowerAllocation& pa,
                           const ChannelState& ch, const ScenarioConfig& cfg) {
    RateReport rep;
    const int K = m.n_subchannels();
    const int N = m.n_users();
    rep.link_rate.assign(K, std::vector<double>(N, 0.0));
    rep.user_rate.assign(N, 0.0);
    rep.sub_rate.assign(K, 0.0);

    std::vector<std::pair<int, double>> links;
    for (int k = 0; k < K; ++k) {
        links.clear();
        rep.sub_rate[k] = subchannel_rate(k, m.users_of(k), pa, ch, cfg, &links);
        for (auto [u, r] : links) {
            rep.link_rate[k][u] = r;
            rep.user_rate[u] += r;
        }
        rep.sum_rate += rep.sub_rate[k];
    }
    for (int j = 0; j < N; ++j)
        if (!m.subs_of(j).empty() && rep.user_rate[j] >= cfg.min_rate_threshold)
            ++rep.scheduled_users;
    return rep;
}

inline double sum_rate(const Matching& m, const ChannelState& ch, const ScenarioConfig& cfg) {
    const auto pa = equal_power_split(m, cfg);
    double total = 0.0;
    for (int k = 0; k < m.n_subchannels(); ++k)
        total += subchannel_rate(k, m.users_of(k), pa, ch, cfg);
    return total;
}

}  // namespace usma
