#pragma once

#include <random>
#include <utility>
#include <vector>

#include "usma/channel.hpp"
#include "usma/config.hpp"
#include "usma/matching.hpp"
#include "usma/rate.hpp"

namespace usma {

struct RunStats {
    int iterations = 0;      // full candidate sweeps
    int swaps_executed = 0;
    std::vector<double> sum_rate_trajectory;  // after each executed swap
    bool converged = false;
    double initial_sum_rate = 0.0;
    RateReport final_report;
};

// Effect of one hypothetical swap. Only subchannels p and q change: the
// swap preserves both users' degrees, so the equal power split is
// unchanged apart from which subchannel carries each share.
struct SwapEffect {
    double delta_sum = 0.0;  // sum-rate change
    double user_i_before = 0.0, user_i_after = 0.0;
    double user_j_before = 0.0, user_j_after = 0.0;
    double sub_p_before = 0.0, sub_p_after = 0.0;
    double sub_q_before = 0.0, sub_q_after = 0.0;
};

namespace detail {

inline double sub_rate_with(int k, const std::vector<int>& users, int drop, int add,
                            double add_power, const PowerAllocation& pa,
                            const ChannelState& ch, const ScenarioConfig& cfg,
                            std::vector<std::pair<int, double>>& links) {
    thread_local std::vector<int> tmp;
    tmp.clear();
    for (int u : users)
        if (u != drop) tmp.push_back(u);
    tmp.insert(std::lower_bound(tmp.begin(), tmp.end(), add), add);
    links.clear();
    // decode order + rates, with add's power supplied explicitly
    const auto order = decode_order(tmp, ch.gains[k]);
    double rate = 0.0;
    double interf = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int u = *it;
        const double pw = (u == add) ? add_power : pa.p[k][u];
        const double rx = pw * ch.gains[k][u];
        const double r = std::log2(1.0 + rx / (cfg.noise_power + interf));
        rate += r;
        links.emplace_back(u, r);
        interf += rx;
    }
    return rate;
}

}  // namespace detail

// Evaluate a swap against cached per-sweep state (power split and full
// rate report of the current matching).
inline SwapEffect evaluate_swap(const SwapSpec& s, const Matching& m,
                                const PowerAllocation& pa, const RateReport& rep,
                                const ChannelState& ch, const ScenarioConfig& cfg) {
    SwapEffect e;
    const double share_i = cfg.user_tx_power / static_cast<double>(m.subs_of(s.user_i).size());
    const double share_j = cfg.user_tx_power / static_cast<double>(m.subs_of(s.user_j).size());

    e.sub_p_before = rep.sub_rate[s.sub_p];
    e.sub_q_before = rep.sub_rate[s.sub_q];
    e.user_i_before = rep.user_rate[s.user_i];
    e.user_j_before = rep.user_rate[s.user_j];

    std::vector<std::pair<int, double>> links_p, links_q;
    e.sub_p_after = detail::sub_rate_with(s.sub_p, m.users_of(s.sub_p), s.user_i,
                                          s.user_j, share_j, pa, ch, cfg, links_p);
    e.sub_q_after = detail::sub_rate_with(s.sub_q, m.users_of(s.sub_q), s.user_j,
                                          s.user_i, share_i, pa, ch, cfg, links_q);
    e.delta_sum = (e.sub_p_after + e.sub_q_after) - (e.sub_p_before + e.sub_q_before);

    // user utilities change only through their links on p and q
    e.user_i_after = e.user_i_before - rep.link_rate[s.sub_p][s.user_i];
    e.user_j_after = e.user_j_before - rep.link_rate[s.sub_q][s.user_j];
    for (auto [u, r] : links_p)
        if (u == s.user_j) e.user_j_after += r - rep.link_rate[s.sub_p][u];
    for (auto [u, r] : links_q)
        if (u == s.user_i) e.user_i_after += r - rep.link_rate[s.sub_q][u];
    return e;
}

inline bool accepts(const SwapEffect& e, const ScenarioConfig& cfg) {
    if (cfg.swap_rule == SwapRule::SumRate)
        return e.delta_sum > cfg.swap_epsilon;
    // Pareto: no involved player worse off, at least one strictly better
    if (e.user_i_after < e.user_i_before || e.user_j_after < e.user_j_before ||
        e.sub_p_after < e.sub_p_before || e.sub_q_after < e.sub_q_before)
        return false;
    const double eps = cfg.swap_epsilon;
    return e.user_i_after > e.user_i_before + eps || e.user_j_after > e.user_j_before + eps ||
           e.sub_p_after > e.sub_p_before + eps || e.sub_q_after > e.sub_q_before + eps;
}

// Pure predicate: does this exchange form a swap-blocking pair under the
// configured rule?
inline bool is_swap_blocking(const SwapSpec& s, const Matching& m,
                             const ChannelState& ch, const ScenarioConfig& cfg) {
    check_swap(m, s);
    const auto pa = equal_power_split(m, cfg);
    const auto rep = evaluate(m, pa, ch, cfg);
    return accepts(evaluate_swap(s, m, pa, rep, ch, cfg), cfg);
}

// Main loop: random init, then first-improvement sweeps over the
// canonical candidate order until a full sweep finds no blocking pair or
// the sweep budget runs out.
inline std::pair<Matching, RunStats> run(const ChannelState& ch, const ScenarioConfig& cfg,
                                         std::mt19937_64& rng) {
    validate(cfg);
    Matching m = init_random(cfg, rng);
    RunStats stats;

    auto pa = equal_power_split(m, cfg);
    auto rep = evaluate(m, pa, ch, cfg);
    stats.initial_sum_rate = rep.sum_rate;
    double cur_sum = rep.sum_rate;

    const int max_sweeps = cfg.effective_max_iterations();
    while (stats.iterations < max_sweeps) {
        ++stats.iterations;
        bool swapped = false;
        for (const auto& s : enumerate_swap_candidates(m)) {
            const auto e = evaluate_swap(s, m, pa, rep, ch, cfg);
            if (!accepts(e, cfg)) continue;
            m = apply_swap(m, s);
            cur_sum += e.delta_sum;
            ++stats.swaps_executed;
            stats.sum_rate_trajectory.push_back(cur_sum);
            pa = equal_power_split(m, cfg);
            rep = evaluate(m, pa, ch, cfg);
            swapped = true;
            break;
        }
        if (!swapped) {
            stats.converged = true;
            break;
        }
    }
    stats.final_report = std::move(rep);
    return {std::move(m), std::move(stats)};
}

}  // namespace usma
