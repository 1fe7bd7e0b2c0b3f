// Command line front end: single runs, Monte Carlo sweeps, brute-force
// optimality reports and a randomized invariant checker.

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "usma/channel.hpp"
#include "usma/config.hpp"
#include "usma/config_json.hpp"
#include "usma/harness.hpp"
#include "usma/matching.hpp"
#include "usma/oracle.hpp"
#include "usma/rate.hpp"
#include "usma/usma.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitInvariant = 3;

struct CfgFlags {
    std::string config_path;
    std::optional<int> n_users, n_subchannels, d_v, d_f, max_iterations;
    std::optional<double> area_side, carrier_freq, user_tx_power, noise_power, swap_epsilon;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> swap_rule;
    std::optional<bool> fading;
};

void add_cfg_flags(CLI::App* app, CfgFlags& f) {
    app->add_option("--config", f.config_path, "JSON config file");
    app->add_option("--n-users", f.n_users, "number of users N");
    app->add_option("--n-subchannels", f.n_subchannels, "number of subchannels K");
    app->add_option("--d-v", f.d_v, "max subchannels per user");
    app->add_option("--d-f", f.d_f, "max users per subchannel");
    app->add_option("--area-side", f.area_side, "square side in meters");
    app->add_option("--carrier-freq", f.carrier_freq, "carrier frequency in MHz");
    app->add_option("--tx-power", f.user_tx_power, "per-user power budget in watts");
    app->add_option("--noise-power", f.noise_power, "noise power in watts");
    app->add_option("--swap-rule", f.swap_rule, "sum_rate or pareto");
    app->add_option("--swap-epsilon", f.swap_epsilon, "swap improvement threshold");
    app->add_option("--max-iterations", f.max_iterations, "sweep budget (0 = default)");
    app->add_option("--fading", f.fading, "enable small-scale fading (default on)");
    app->add_option("--seed", f.seed, "RNG seed");
}

// File values first, CLI flags override.
usma::ScenarioConfig build_config(const CfgFlags& f) {
    usma::ScenarioConfig cfg;
    if (!f.config_path.empty()) cfg = usma::load_config(f.config_path);
    if (f.n_users) cfg.n_users = *f.n_users;
    if (f.n_subchannels) cfg.n_subchannels = *f.n_subchannels;
    if (f.d_v) cfg.d_v = *f.d_v;
    if (f.d_f) cfg.d_f = *f.d_f;
    if (f.area_side) cfg.area_side = *f.area_side;
    if (f.carrier_freq) cfg.carrier_freq = *f.carrier_freq;
    if (f.user_tx_power) cfg.user_tx_power = *f.user_tx_power;
    if (f.noise_power) cfg.noise_power = *f.noise_power;
    if (f.swap_rule) cfg.swap_rule = usma::swap_rule_from_string(*f.swap_rule);
    if (f.swap_epsilon) cfg.swap_epsilon = *f.swap_epsilon;
    if (f.max_iterations) cfg.max_iterations = *f.max_iterations;
    if (f.fading) cfg.fading = *f.fading;
    if (f.seed) cfg.seed = *f.seed;
    usma::validate(cfg);
    return cfg;
}

int cmd_run(const CfgFlags& flags) {
    const auto cfg = build_config(flags);
    std::mt19937_64 rng(cfg.seed);
    const auto ch = usma::build_channel(cfg, rng);
    const auto [m, stats] = usma::run(ch, cfg, rng);
    const auto [bm, brep] = usma::harness::ofdma_baseline(ch, cfg);

    std::printf("scenario: N=%d K=%d d_v=%d d_f=%d seed=%llu rule=%s\n", cfg.n_users,
                cfg.n_subchannels, cfg.d_v, cfg.d_f,
                static_cast<unsigned long long>(cfg.seed),
                usma::to_string(cfg.swap_rule).c_str());
    std::printf("initial sum-rate:  %.6f bit/s/Hz\n", stats.initial_sum_rate);
    std::printf("final sum-rate:    %.6f bit/s/Hz\n", stats.final_report.sum_rate);
    std::printf("scheduled users:   %d / %d\n", stats.final_report.scheduled_users, cfg.n_users);
    std::printf("swaps executed:    %d\n", stats.swaps_executed);
    std::printf("sweeps:            %d\n", stats.iterations);
    std::printf("converged:         %s\n", stats.converged ? "yes" : "no");
    std::printf("ofdma baseline:    %.6f bit/s/Hz, %d scheduled\n", brep.sum_rate,
                brep.scheduled_users);
    return kExitOk;
}

int cmd_sweep(const CfgFlags& flags, int n_min, int n_max, int n_step, int trials,
              int threads, const std::string& out_prefix, bool charts) {
    const auto cfg = build_config(flags);
    std::vector<int> n_values;
    for (int n = n_min; n <= n_max; n += n_step) n_values.push_back(n);
    const auto res = usma::harness::sweep(cfg, n_values, trials, threads);
    const auto files = usma::harness::emit(res, out_prefix, charts);
    for (const auto& r : res.rows)
        std::printf("N=%3d  scheduled %g/%g/%g  rate %.3f/%.3f/%.3f  conv %.2f\n", r.n_users,
                    r.sched_min, r.sched_avg, r.sched_max, r.rate_min, r.rate_avg, r.rate_max,
                    r.converged_frac);
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
    return kExitOk;
}

int cmd_oracle(const CfgFlags& flags) {
    const auto cfg = build_config(flags);
    std::mt19937_64 rng(cfg.seed);
    const auto ch = usma::build_channel(cfg, rng);
    const auto [m, stats] = usma::run(ch, cfg, rng);
    const auto rep = usma::oracle::optimal(ch, cfg, stats.final_report.sum_rate);

    std::printf("feasible matchings: %lld\n", static_cast<long long>(rep.n_feasible));
    std::printf("optimal sum-rate:   %.9f bit/s/Hz\n", rep.best_sum_rate);
    std::printf("usma sum-rate:      %.9f bit/s/Hz\n", stats.final_report.sum_rate);
    std::printf("relative gap:       %.3e\n", rep.usma_gap.value_or(0.0));
    std::printf("usma stable:        %s\n",
                usma::oracle::certify_stable(m, ch, cfg) ? "yes" : "no");
    return kExitOk;
}

int cmd_check(std::uint64_t seed, int instances) {
    std::mt19937_64 meta(seed);
    int checked = 0;
    for (int it = 0; it < instances; ++it) {
        usma::ScenarioConfig cfg;
        std::uniform_int_distribution<int> nd(1, 6), kd(1, 3);
        cfg.n_users = nd(meta);
        cfg.n_subchannels = kd(meta);
        cfg.d_v = std::uniform_int_distribution<int>(1, std::min(2, cfg.n_subchannels))(meta);
        cfg.d_f = std::uniform_int_distribution<int>(1, std::min(2, cfg.n_users))(meta);
        cfg.seed = meta();
        cfg.fading = it % 2 == 0;

        std::mt19937_64 rng(cfg.seed);
        const auto ch = usma::build_channel(cfg, rng);
        const auto [m, stats] = usma::run(ch, cfg, rng);

        for (int j = 0; j < cfg.n_users; ++j)
            if (static_cast<int>(m.subs_of(j).size()) > cfg.d_v) {
                std::fprintf(stderr, "invariant violation: user degree cap (instance %d)\n", it);
                return kExitInvariant;
            }
        for (int k = 0; k < cfg.n_subchannels; ++k)
            if (static_cast<int>(m.users_of(k).size()) > cfg.d_f) {
                std::fprintf(stderr, "invariant violation: subchannel degree cap (instance %d)\n", it);
                return kExitInvariant;
            }
        double prev = stats.initial_sum_rate;
        for (double v : stats.sum_rate_trajectory) {
            if (!(v > prev + cfg.swap_epsilon) && cfg.swap_rule == usma::SwapRule::SumRate) {
                std::fprintf(stderr, "invariant violation: non-improving swap (instance %d)\n", it);
                return kExitInvariant;
            }
            prev = v;
        }
        if (stats.converged && !usma::oracle::certify_stable(m, ch, cfg)) {
            std::fprintf(stderr, "invariant violation: converged but unstable (instance %d)\n", it);
            return kExitInvariant;
        }
        ++checked;
    }
    std::printf("check: %d randomized instances, all invariants hold\n", checked);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"USMA uplink NOMA resource allocation simulator"};
    app.require_subcommand(1);

    CfgFlags run_flags, sweep_flags, oracle_flags;
    auto* run_cmd = app.add_subcommand("run", "run one scenario and print its stats");
    add_cfg_flags(run_cmd, run_flags);

    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over user counts");
    add_cfg_flags(sweep_cmd, sweep_flags);
    int n_min = 10, n_max = 100, n_step = 10, trials = 50, threads = 1;
    std::string out_prefix = "sweep";
    bool charts = false, ci = false;
    sweep_cmd->add_option("--n-min", n_min, "smallest user count");
    sweep_cmd->add_option("--n-max", n_max, "largest user count");
    sweep_cmd->add_option("--n-step", n_step, "user count step");
    sweep_cmd->add_option("--trials", trials, "trials per user count");
    sweep_cmd->add_option("--threads", threads, "worker threads");
    sweep_cmd->add_option("--out", out_prefix, "output file prefix");
    sweep_cmd->add_flag("--charts", charts, "also write SVG charts");
    sweep_cmd->add_flag("--ci", ci, "CI mode: an explicit --seed is required");

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force optimality gap on a tiny instance");
    add_cfg_flags(oracle_cmd, oracle_flags);

    auto* check_cmd = app.add_subcommand("check", "randomized invariant suite");
    std::uint64_t check_seed = 1;
    int check_instances = 200;
    check_cmd->add_option("--seed", check_seed, "RNG seed");
    check_cmd->add_option("--instances", check_instances, "number of random instances");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_flags);
        if (sweep_cmd->parsed()) {
            if (ci && !sweep_flags.seed) {
                std::fprintf(stderr, "error: --seed is required with --ci\n");
                return kExitValidation;
            }
            return cmd_sweep(sweep_flags, n_min, n_max, n_step, trials, threads, out_prefix,
                             charts);
        }
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_flags);
        if (check_cmd->parsed()) return cmd_check(check_seed, check_instances);
    } catch (const usma::harness::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitOk;
}
