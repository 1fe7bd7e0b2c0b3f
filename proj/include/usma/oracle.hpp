#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "usma/config.hpp"
#include "usma/matching.hpp"
#include "usma/rate.hpp"
#include "usma/usma.hpp"

namespace usma::oracle {

struct InstanceTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void check_size_guard(const ScenarioConfig& cfg) {
    if (cfg.n_users * cfg.n_subchannels > 20)
        throw InstanceTooLarge("instance too large: n_users * n_subchannels must be <= 20");
}

struct OracleReport {
    std::int64_t n_feasible = 0;
    Matching best_matching{0, 0};
    double best_sum_rate = 0.0;
    std::optional<double> usma_gap;  // (best - usma) / best, when supplied
};

// Every binary K x N assignment matrix satisfying both degree caps,
// including the empty matching. Full 2^(K*N) scan behind the size guard.
inline std::vector<Matching> enumerate_matchings(const ScenarioConfig& cfg) {
    validate(cfg);
    check_size_guard(cfg);
    const int N = cfg.n_users;
    const int K = cfg.n_subchannels;
    const int bits = N * K;
    std::vector<Matching> out;
    for (std::uint64_t mask = 0; mask < (1ULL << bits); ++mask) {
        std::vector<int> user_deg(N, 0), sub_deg(K, 0);
        bool ok = true;
        for (int b = 0; b < bits && ok; ++b) {
            if (!(mask >> b & 1)) continue;
            const int k = b / N;
            const int j = b % N;
            ok = ++user_deg[j] <= cfg.d_v && ++sub_deg[k] <= cfg.d_f;
        }
        if (!ok) continue;
        Matching m(N, K);
        for (int b = 0; b < bits; ++b)
            if (mask >> b & 1) m.assign(b / N, b % N);
        out.push_back(std::move(m));
    }
    return out;
}

// Exhaustive optimum over feasible matchings under equal power split.
// Ties keep the first matching in enumeration order. Pass the USMA
// result's sum-rate to get the relative optimality gap.
inline OracleReport optimal(const ChannelState& ch, const ScenarioConfig& cfg,
                            std::optional<double> usma_sum_rate = std::nullopt) {
    OracleReport rep;
    rep.best_matching = Matching(cfg.n_users, cfg.n_subchannels);
    for (auto& m : enumerate_matchings(cfg)) {
        ++rep.n_feasible;
        const double r = sum_rate(m, ch, cfg);
        if (r > rep.best_sum_rate) {
            rep.best_sum_rate = r;
            rep.best_matching = std::move(m);
        }
    }
    if (usma_sum_rate && rep.best_sum_rate > 0.0)
        rep.usma_gap = (rep.best_sum_rate - *usma_sum_rate) / rep.best_sum_rate;
    return rep;
}

// Exhaustive stability check, independent of the run loop's sweep code.
inline bool certify_stable(const Matching& m, const ChannelState& ch,
                           const ScenarioConfig& cfg) {
    for (const auto& s : enumerate_swap_candidates(m))
        if (is_swap_blocking(s, m, ch, cfg)) return false;
    return true;
}

}  // namespace usma::oracle
