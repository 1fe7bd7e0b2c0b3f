#pragma once

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "usma/config.hpp"

namespace usma {

struct SwapError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Proposed exchange: user_i gives sub_p to user_j and takes sub_q in return.
struct SwapSpec {
    int user_i = -1;
    int sub_p = -1;
    int user_j = -1;
    int sub_q = -1;
};

// Degree-constrained bipartite multi-assignment between users and
// subchannels, kept consistent from both sides. Assignment sets stay
// sorted ascending.
class Matching {
public:
    Matching(int n_users, int n_subchannels)
        : user_to_subs_(n_users), sub_to_users_(n_subchannels) {}

    int n_users() const { return static_cast<int>(user_to_subs_.size()); }
    int n_subchannels() const { return static_cast<int>(sub_to_users_.size()); }

    const std::vector<int>& subs_of(int user) const { return user_to_subs_[user]; }
    const std::vector<int>& users_of(int sub) const { return sub_to_users_[sub]; }

    bool contains(int sub, int user) const {
        const auto& s = user_to_subs_[user];
        return std::binary_search(s.begin(), s.end(), sub);
    }

    int total_assignments() const {
        int n = 0;
        for (const auto& s : user_to_subs_) n += static_cast<int>(s.size());
        return n;
    }

    void assign(int sub, int user) {
        insert_sorted(user_to_subs_[user], sub);
        insert_sorted(sub_to_users_[sub], user);
    }

    void unassign(int sub, int user) {
        erase_value(user_to_subs_[user], sub);
        erase_value(sub_to_users_[sub], user);
    }

    bool operator==(const Matching&) const = default;

private:
    static void insert_sorted(std::vector<int>& v, int x) {
        v.insert(std::lower_bound(v.begin(), v.end(), x), x);
    }
    static void erase_value(std::vector<int>& v, int x) {
        v.erase(std::lower_bound(v.begin(), v.end(), x));
    }

    std::vector<std::vector<int>> user_to_subs_;
    std::vector<std::vector<int>> sub_to_users_;
};

inline void check_swap(const Matching& m, const SwapSpec& s) {
    if (s.user_i == s.user_j) throw SwapError("swap: user_i == user_j");
    if (s.sub_p == s.sub_q) throw SwapError("swap: sub_p == sub_q");
    if (!m.contains(s.sub_p, s.user_i)) throw SwapError("swap: sub_p not held by user_i");
    if (!m.contains(s.sub_q, s.user_j)) throw SwapError("swap: sub_q not held by user_j");
    if (m.contains(s.sub_q, s.user_i)) throw SwapError("swap: user_i already holds sub_q");
    if (m.contains(s.sub_p, s.user_j)) throw SwapError("swap: user_j already holds sub_p");
}

// Exchange sub_p and sub_q between the two users. Degree counts are
// unchanged; applying the same spec again restores the original matching.
inline Matching apply_swap(const Matching& m, const SwapSpec& s) {
    check_swap(m, s);
    Matching out = m;
    out.unassign(s.sub_p, s.user_i);
    out.unassign(s.sub_q, s.user_j);
    out.assign(s.sub_q, s.user_i);
    out.assign(s.sub_p, s.user_j);
    return out;
}

// Random initial matching: users visited in shuffled order, each taking
// min(d_v, available) distinct subchannels drawn uniformly from those
// with spare d_f capacity. Later users may get fewer or none.
inline Matching init_random(const ScenarioConfig& cfg, std::mt19937_64& rng) {
    validate(cfg);
    Matching m(cfg.n_users, cfg.n_subchannels);

    std::vector<int> order(cfg.n_users);
    for (int j = 0; j < cfg.n_users; ++j) order[j] = j;
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<int> spare(cfg.n_subchannels, cfg.d_f);
    std::vector<int> open;
    for (int user : order) {
        open.clear();
        for (int k = 0; k < cfg.n_subchannels; ++k)
            if (spare[k] > 0) open.push_back(k);
        const int take = std::min<int>(cfg.d_v, static_cast<int>(open.size()));
        // draw without replacement so the user's subchannels are distinct
        for (int t = 0; t < take; ++t) {
            std::uniform_int_distribution<int> pick(t, static_cast<int>(open.size()) - 1);
            std::swap(open[t], open[pick(rng)]);
            const int k = open[t];
            m.assign(k, user);
            --spare[k];
        }
    }
    return m;
}

// All swap candidates in canonical order: ascending (user_i, user_j, sub_p,
// sub_q), user_i < user_j. Each unordered exchange appears exactly once.
inline std::vector<SwapSpec> enumerate_swap_candidates(const Matching& m) {
    std::vector<SwapSpec> out;
    const int n = m.n_users();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int p : m.subs_of(i)) {
                if (m.contains(p, j)) continue;
                for (int q : m.subs_of(j)) {
                    if (q == p || m.contains(q, i)) continue;
                    out.push_back({i, p, j, q});
                }
            }
        }
    }
    return out;
}

}  // namespace usma
