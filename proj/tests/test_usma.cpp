#include <doctest.h>

#include <random>

#include "usma/oracle.hpp"
#include "usma/usma.hpp"

using namespace usma;

namespace {

ScenarioConfig cfg_for(int n, int k, int dv, int df) {
    ScenarioConfig cfg;
    cfg.n_users = n;
    cfg.n_subchannels = k;
    cfg.d_v = dv;
    cfg.d_f = df;
    return cfg;
}

ChannelState channel_with(std::vector<std::vector<double>> gains) {
    ChannelState ch;
    ch.gains = std::move(gains);
    ch.positions.resize(ch.gains[0].size());
    return ch;
}

}  // namespace

TEST_CASE("symmetric swap is never blocking") {
    auto cfg = cfg_for(2, 2, 1, 1);
    Matching m(2, 2);
    m.assign(0, 0);
    m.assign(1, 1);
    const auto ch = channel_with({{1.0, 1.0}, {1.0, 1.0}});
    for (auto rule : {SwapRule::SumRate, SwapRule::Pareto}) {
        cfg.swap_rule = rule;
        CHECK(!is_swap_blocking({0, 0, 1, 1}, m, ch, cfg));
    }
}

TEST_CASE("crossed gains make the crossed assignment swap-blocking") {
    // each user is strong on the other's subchannel; rate oracle confirms
    // the exchange strictly improves both users
    auto cfg = cfg_for(2, 2, 1, 1);
    cfg.user_tx_power = 1.0;
    cfg.noise_power = 1.0;
    Matching crossed(2, 2);
    crossed.assign(1, 0);  // user 0 on sub 1 where it is weak
    crossed.assign(0, 1);
    const auto ch = channel_with({{10.0, 0.1}, {0.1, 10.0}});
    const SwapSpec s{0, 1, 1, 0};
    for (auto rule : {SwapRule::SumRate, SwapRule::Pareto}) {
        cfg.swap_rule = rule;
        CHECK(is_swap_blocking(s, crossed, ch, cfg));
    }
    // and after the swap the good assignment is stable
    const auto good = apply_swap(crossed, s);
    CHECK(oracle::certify_stable(good, ch, cfg));
}

TEST_CASE("is_swap_blocking does not mutate the matching") {
    auto cfg = cfg_for(2, 2, 1, 1);
    Matching m(2, 2);
    m.assign(1, 0);
    m.assign(0, 1);
    const auto ch = channel_with({{10.0, 0.1}, {0.1, 10.0}});
    const Matching copy = m;
    (void)is_swap_blocking({0, 1, 1, 0}, m, ch, cfg);
    CHECK(m == copy);
}

TEST_CASE("swap evaluation delta agrees with full re-evaluation") {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> g(0.05, 4.0);
    for (int rep = 0; rep < 300; ++rep) {
        auto cfg = cfg_for(5, 3, 2, 2);
        ChannelState ch;
        ch.positions.resize(5);
        ch.gains.assign(3, std::vector<double>(5));
        for (auto& row : ch.gains)
            for (auto& v : row) v = g(rng);
        const auto m = init_random(cfg, rng);
        const auto cands = enumerate_swap_candidates(m);
        if (cands.empty()) continue;
        const auto& s = cands[rng() % cands.size()];
        const auto pa = equal_power_split(m, cfg);
        const auto rep0 = evaluate(m, pa, ch, cfg);
        const auto e = evaluate_swap(s, m, pa, rep0, ch, cfg);
        const auto m2 = apply_swap(m, s);
        const double full = sum_rate(m2, ch, cfg);
        CHECK(rep0.sum_rate + e.delta_sum == doctest::Approx(full).epsilon(1e-9));
        // per-player utilities also match the full report
        const auto rep1 = evaluate(m2, equal_power_split(m2, cfg), ch, cfg);
        CHECK(e.user_i_after == doctest::Approx(rep1.user_rate[s.user_i]).epsilon(1e-9));
        CHECK(e.user_j_after == doctest::Approx(rep1.user_rate[s.user_j]).epsilon(1e-9));
        CHECK(e.sub_p_after == doctest::Approx(rep1.sub_rate[s.sub_p]).epsilon(1e-9));
        CHECK(e.sub_q_after == doctest::Approx(rep1.sub_rate[s.sub_q]).epsilon(1e-9));
    }
}

TEST_CASE("degenerate instances converge with zero swaps") {
    for (auto [n, k, df] : {std::tuple{1, 3, 1}, {3, 1, 1}}) {
        auto cfg = cfg_for(n, k, 1, df);
        cfg.seed = 8;
        std::mt19937_64 rng(cfg.seed);
        const auto ch = build_channel(cfg, rng);
        const auto [m, stats] = run(ch, cfg, rng);
        CHECK(stats.swaps_executed == 0);
        CHECK(stats.converged);
        CHECK(stats.iterations == 1);
    }
}

TEST_CASE("run is deterministic for fixed seed and config") {
    auto cfg = cfg_for(12, 4, 2, 3);
    cfg.seed = 555;
    std::mt19937_64 r1(cfg.seed), r2(cfg.seed);
    const auto ch1 = build_channel(cfg, r1);
    const auto ch2 = build_channel(cfg, r2);
    const auto [m1, s1] = run(ch1, cfg, r1);
    const auto [m2, s2] = run(ch2, cfg, r2);
    CHECK(m1 == m2);
    CHECK(s1.swaps_executed == s2.swaps_executed);
    CHECK(s1.iterations == s2.iterations);
    CHECK(s1.sum_rate_trajectory == s2.sum_rate_trajectory);
}

TEST_CASE("trajectory improves monotonically and ends stable") {
    std::mt19937_64 meta(2718);
    for (int rep = 0; rep < 50; ++rep) {
        auto cfg = cfg_for(3, 2, 1, 2);
        cfg.fading = rep % 2 == 0;
        cfg.seed = meta();
        std::mt19937_64 rng(cfg.seed);
        const auto ch = build_channel(cfg, rng);
        const auto [m, stats] = run(ch, cfg, rng);
        REQUIRE(stats.converged);
        double prev = stats.initial_sum_rate;
        for (double v : stats.sum_rate_trajectory) {
            CHECK(v > prev + cfg.swap_epsilon);
            prev = v;
        }
        CHECK(stats.final_report.sum_rate >= stats.initial_sum_rate - 1e-12);
        CHECK(oracle::certify_stable(m, ch, cfg));
    }
}

TEST_CASE("pareto mode also improves and terminates") {
    std::mt19937_64 meta(31337);
    for (int rep = 0; rep < 25; ++rep) {
        auto cfg = cfg_for(4, 2, 1, 2);
        cfg.swap_rule = SwapRule::Pareto;
        cfg.seed = meta();
        std::mt19937_64 rng(cfg.seed);
        const auto ch = build_channel(cfg, rng);
        const auto [m, stats] = run(ch, cfg, rng);
        CHECK(stats.converged);
        CHECK(stats.final_report.sum_rate >= stats.initial_sum_rate - 1e-12);
        CHECK(oracle::certify_stable(m, ch, cfg));
    }
}

TEST_CASE("sum rate is invariant under user relabeling") {
    auto cfg = cfg_for(5, 3, 2, 2);
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> g(0.1, 3.0);
    ChannelState ch;
    ch.positions.resize(5);
    ch.gains.assign(3, std::vector<double>(5));
    for (auto& row : ch.gains)
        for (auto& v : row) v = g(rng);
    const auto m = init_random(cfg, rng);
    const double base = sum_rate(m, ch, cfg);

    const std::vector<int> perm{2, 0, 4, 1, 3};
    ChannelState chp;
    chp.positions.resize(5);
    chp.gains.assign(3, std::vector<double>(5));
    Matching mp(5, 3);
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 5; ++j) chp.gains[k][perm[j]] = ch.gains[k][j];
    for (int j = 0; j < 5; ++j)
        for (int k : m.subs_of(j)) mp.assign(k, perm[j]);
    CHECK(sum_rate(mp, chp, cfg) == doctest::Approx(base).epsilon(1e-12));
}
