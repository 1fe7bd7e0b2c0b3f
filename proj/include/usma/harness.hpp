#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "usma/channel.hpp"
#include "usma/config.hpp"
#include "usma/matching.hpp"
#include "usma/rate.hpp"
#include "usma/usma.hpp"

namespace usma::harness {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One seeded end-to-end scenario: channel build followed by the swap loop.
inline std::pair<Matching, RunStats> run_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    std::mt19937_64 rng(cfg.seed);
    const ChannelState ch = build_channel(cfg, rng);
    return run(ch, cfg, rng);
}

// OFDMA-style baseline: one-to-one matching, greedy by gain. Stands in
// for an orthogonal-access comparison point.
inline std::pair<Matching, RateReport> ofdma_baseline(const ChannelState& ch,
                                                      const ScenarioConfig& cfg) {
    struct Link {
        double gain;
        int k, j;
    };
    std::vector<Link> links;
    for (int k = 0; k < ch.n_subchannels(); ++k)
        for (int j = 0; j < ch.n_users(); ++j)
            links.push_back({ch.gains[k][j], k, j});
    std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
        if (a.gain != b.gain) return a.gain > b.gain;
        return std::pair{a.k, a.j} < std::pair{b.k, b.j};
    });
    Matching m(ch.n_users(), ch.n_subchannels());
    std::vector<bool> user_used(ch.n_users(), false), sub_used(ch.n_subchannels(), false);
    for (const auto& l : links) {
        if (user_used[l.j] || sub_used[l.k]) continue;
        m.assign(l.k, l.j);
        user_used[l.j] = sub_used[l.k] = true;
    }
    const auto pa = equal_power_split(m, cfg);
    return {m, evaluate(m, pa, ch, cfg)};
}

struct TrialRow {
    int n_users = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    int scheduled = 0;
    double sum_rate = 0.0;
    int swaps = 0;
    int iterations = 0;
    bool converged = false;
};

struct SweepRow {
    int n_users = 0;
    int trials = 0;
    double sched_min = 0, sched_avg = 0, sched_max = 0;
    double rate_min = 0, rate_avg = 0, rate_max = 0;
    double avg_swaps = 0, avg_iters = 0;
    double converged_frac = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;     // one per N value
    std::vector<TrialRow> trials;   // raw per-trial data, deterministic order
};

// Monte Carlo sweep over user counts. Per-trial seeds are derived from the
// base seed so results are identical regardless of worker count.
inline SweepResult sweep(const ScenarioConfig& base_cfg, const std::vector<int>& n_values,
                         int trials, int n_threads = 1) {
    if (trials < 1) throw ConfigError("trials: must be >= 1");
    if (n_threads < 1) n_threads = 1;

    SweepResult res;
    res.trials.resize(n_values.size() * static_cast<std::size_t>(trials));

    auto worker = [&](std::size_t begin, std::size_t step) {
        for (std::size_t idx = begin; idx < res.trials.size(); idx += step) {
            const int ni = static_cast<int>(idx) / trials;
            const int t = static_cast<int>(idx) % trials;
            ScenarioConfig cfg = base_cfg;
            cfg.n_users = n_values[ni];
            cfg.d_f = std::min(cfg.d_f, cfg.n_users);
            cfg.seed = derive_seed(base_cfg.seed, static_cast<std::uint64_t>(cfg.n_users),
                                   static_cast<std::uint64_t>(t));
            validate(cfg);
            auto [m, stats] = run_scenario(cfg);
            TrialRow& row = res.trials[idx];
            row.n_users = cfg.n_users;
            row.trial = t;
            row.seed = cfg.seed;
            row.scheduled = stats.final_report.scheduled_users;
            row.sum_rate = stats.final_report.sum_rate;
            row.swaps = stats.swaps_executed;
            row.iterations = stats.iterations;
            row.converged = stats.converged;
        }
    };

    if (n_threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_threads; ++w)
            pool.emplace_back(worker, static_cast<std::size_t>(w), static_cast<std::size_t>(n_threads));
        for (auto& th : pool) th.join();
    }

    for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
        SweepRow row;
        row.n_users = n_values[ni];
        row.trials = trials;
        row.sched_min = row.rate_min = std::numeric_limits<double>::infinity();
        row.sched_max = row.rate_max = -std::numeric_limits<double>::infinity();
        for (int t = 0; t < trials; ++t) {
            const TrialRow& tr = res.trials[ni * trials + t];
            row.sched_min = std::min(row.sched_min, double(tr.scheduled));
            row.sched_max = std::max(row.sched_max, double(tr.scheduled));
            row.sched_avg += tr.scheduled;
            row.rate_min = std::min(row.rate_min, tr.sum_rate);
            row.rate_max = std::max(row.rate_max, tr.sum_rate);
            row.rate_avg += tr.sum_rate;
            row.avg_swaps += tr.swaps;
            row.avg_iters += tr.iterations;
            row.converged_frac += tr.converged ? 1.0 : 0.0;
        }
        row.sched_avg /= trials;
        row.rate_avg /= trials;
        row.avg_swaps /= trials;
        row.avg_iters /= trials;
        row.converged_frac /= trials;
        res.rows.push_back(row);
    }
    return res;
}

// Locale-independent shortest round-trip formatting.
inline std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

inline std::string sweep_csv(const SweepResult& res) {
    std::string out =
        "n_users,trials,sched_min,sched_avg,sched_max,rate_min,rate_avg,rate_max,"
        "avg_swaps,avg_iters,converged_frac\n";
    for (const auto& r : res.rows) {
        out += std::to_string(r.n_users) + ',' + std::to_string(r.trials) + ',' +
               fmt(r.sched_min) + ',' + fmt(r.sched_avg) + ',' + fmt(r.sched_max) + ',' +
               fmt(r.rate_min) + ',' + fmt(r.rate_avg) + ',' + fmt(r.rate_max) + ',' +
               fmt(r.avg_swaps) + ',' + fmt(r.avg_iters) + ',' + fmt(r.converged_frac) + '\n';
    }
    return out;
}

inline std::string trials_csv(const SweepResult& res) {
    std::string out = "n_users,trial,seed,scheduled,sum_rate,swaps,iterations,converged\n";
    for (const auto& t : res.trials) {
        out += std::to_string(t.n_users) + ',' + std::to_string(t.trial) + ',' +
               std::to_string(t.seed) + ',' + std::to_string(t.scheduled) + ',' +
               fmt(t.sum_rate) + ',' + std::to_string(t.swaps) + ',' +
               std::to_string(t.iterations) + ',' + (t.converged ? "1" : "0") + '\n';
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << content;
    if (!f) throw IoError("write failed: " + path);
}

namespace detail {

struct Series {
    std::string label;
    std::string color;
    std::vector<double> y;
};

// Minimal self-contained SVG line chart.
inline std::string svg_chart(const std::string& x_label, const std::string& y_label,
                             const std::vector<double>& x, const std::vector<Series>& series) {
    const double W = 640, H = 480, ml = 70, mr = 20, mt = 20, mb = 55;
    double xmin = x.front(), xmax = x.back();
    double ymin = 0.0, ymax = 1.0;
    for (const auto& s : series)
        for (double v : s.y) ymax = std::max(ymax, v);
    ymax *= 1.05;
    auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (v - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\" font-family=\"sans-serif\" font-size=\"13\">\n";
    s += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    s += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(H - mb) + "\" x2=\"" + fmt(W - mr) +
         "\" y2=\"" + fmt(H - mb) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(ml) + "\" y2=\"" +
         fmt(H - mb) + "\" stroke=\"black\"/>\n";
    for (double v : x) {
        s += "<text x=\"" + fmt(px(v)) + "\" y=\"" + fmt(H - mb + 18) +
             "\" text-anchor=\"middle\">" + fmt(v) + "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double v = ymin + (ymax - ymin) * i / 5.0;
        s += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(py(v) + 4) +
             "\" text-anchor=\"end\">" + fmt(std::round(v * 10) / 10) + "</text>\n";
    }
    s += "<text x=\"" + fmt((ml + W - mr) / 2) + "\" y=\"" + fmt(H - 12) +
         "\" text-anchor=\"middle\">" + x_label + "</text>\n";
    s += "<text x=\"18\" y=\"" + fmt((mt + H - mb) / 2) + "\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " + fmt((mt + H - mb) / 2) + ")\">" + y_label + "</text>\n";
    double ly = mt + 10;
    for (const auto& se : series) {
        std::string pts;
        for (std::size_t i = 0; i < x.size(); ++i)
            pts += fmt(px(x[i])) + ',' + fmt(py(se.y[i])) + ' ';
        s += "<polyline fill=\"none\" stroke=\"" + se.color + "\" stroke-width=\"2\" points=\"" +
             pts + "\"/>\n";
        s += "<line x1=\"" + fmt(W - mr - 150) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
             fmt(W - mr - 120) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + se.color +
             "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + fmt(W - mr - 112) + "\" y=\"" + fmt(ly + 4) + "\">" + se.label +
             "</text>\n";
        ly += 18;
    }
    s += "</svg>\n";
    return s;
}

}  // namespace detail

// Writes <prefix>.csv (aggregates), <prefix>_trials.csv (raw rows) and,
// when charts are requested, SVG plots of scheduled users and sum-rate
// against the user count.
inline std::vector<std::string> emit(const SweepResult& res, const std::string& prefix,
                                     bool charts = false) {
    std::vector<std::string> written;
    write_file(prefix + ".csv", sweep_csv(res));
    written.push_back(prefix + ".csv");
    write_file(prefix + "_trials.csv", trials_csv(res));
    written.push_back(prefix + "_trials.csv");
    if (charts && !res.rows.empty()) {
        std::vector<double> x;
        detail::Series smin{"min", "#888888", {}}, savg{"average", "#1f5fbf", {}},
            smax{"max", "#c03030", {}};
        detail::Series rmin{"min", "#888888", {}}, ravg{"average", "#1f8f4f", {}},
            rmax{"max", "#c03030", {}};
        for (const auto& r : res.rows) {
            x.push_back(r.n_users);
            smin.y.push_back(r.sched_min);
            savg.y.push_back(r.sched_avg);
            smax.y.push_back(r.sched_max);
            rmin.y.push_back(r.rate_min);
            ravg.y.push_back(r.rate_avg);
            rmax.y.push_back(r.rate_max);
        }
        write_file(prefix + "_scheduled.svg",
                   detail::svg_chart("number of users", "scheduled users", x,
                                     {smin, savg, smax}));
        written.push_back(prefix + "_scheduled.svg");
        write_file(prefix + "_rate.svg",
                   detail::svg_chart("number of users", "sum-rate (bit/s/Hz)", x,
                                     {rmin, ravg, rmax}));
        written.push_back(prefix + "_rate.svg");
    }
    return written;
}

}  // namespace usma::harness
