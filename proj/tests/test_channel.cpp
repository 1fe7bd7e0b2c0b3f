#include <doctest.h>

#include <cmath>
#include <random>

#include "usma/channel.hpp"

using namespace usma;

namespace {
ScenarioConfig default_cfg() {
    ScenarioConfig cfg;
    cfg.n_users = 100;
    cfg.n_subchannels = 10;
    return cfg;
}
}  // namespace

TEST_CASE("hata matches independent hand evaluation at default parameters") {
    // 69.55 + 26.16 log10(900) - 13.82 log10(30) - a(1.5)
    //   + (44.9 - 6.55 log10(30)) log10(0.350), evaluated separately
    const ScenarioConfig cfg = default_cfg();
    CHECK(hata_path_loss(350.0, cfg) == doctest::Approx(110.34314909687936).epsilon(1e-12));
    CHECK(hata_path_loss(100.0, cfg) == doctest::Approx(91.17843069927125).epsilon(1e-12));
}

TEST_CASE("hata is strictly increasing in distance") {
    const ScenarioConfig cfg = default_cfg();
    double prev = hata_path_loss(2.0, cfg);
    for (double d = 10.0; d <= 5000.0; d *= 1.7) {
        const double cur = hata_path_loss(d, cfg);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("doubling the distance adds the fixed slope term") {
    const ScenarioConfig cfg = default_cfg();
    const double slope = (44.9 - 6.55 * std::log10(cfg.bs_height)) * std::log10(2.0);
    CHECK(hata_path_loss(700.0, cfg) - hata_path_loss(350.0, cfg) ==
          doctest::Approx(slope).epsilon(1e-12));
}

TEST_CASE("hata rejects out-of-range carrier frequency") {
    ScenarioConfig cfg = default_cfg();
    cfg.carrier_freq = 2400.0;
    CHECK_THROWS_AS(hata_path_loss(100.0, cfg), ConfigError);
}

TEST_CASE("sub-meter distances are clamped to the 1 m floor") {
    const ScenarioConfig cfg = default_cfg();
    CHECK(hata_path_loss(0.0, cfg) == hata_path_loss(1.0, cfg));
    CHECK(std::isfinite(hata_path_loss(0.0, cfg)));
}

TEST_CASE("place_users stays inside the square and is seed-deterministic") {
    ScenarioConfig cfg = default_cfg();
    cfg.area_side = 350.0;
    std::mt19937_64 rng(42);
    const auto pos = place_users(cfg, rng);
    REQUIRE(pos.size() == 100);
    for (const auto& p : pos) {
        CHECK(p.x >= 0.0);
        CHECK(p.x <= 350.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y <= 350.0);
    }
    std::mt19937_64 rng2(42);
    const auto pos2 = place_users(cfg, rng2);
    for (std::size_t i = 0; i < pos.size(); ++i) {
        CHECK(pos[i].x == pos2[i].x);
        CHECK(pos[i].y == pos2[i].y);
    }
}

TEST_CASE("single user placement") {
    ScenarioConfig cfg = default_cfg();
    cfg.n_users = 1;
    cfg.d_f = 1;
    std::mt19937_64 rng(1);
    CHECK(place_users(cfg, rng).size() == 1);
}

TEST_CASE("build_channel gains are positive, finite and seed-deterministic") {
    const ScenarioConfig cfg = default_cfg();
    std::mt19937_64 rng(7);
    const auto ch = build_channel(cfg, rng);
    REQUIRE(ch.n_subchannels() == 10);
    REQUIRE(ch.n_users() == 100);
    for (const auto& row : ch.gains)
        for (double g : row) {
            CHECK(g > 0.0);
            CHECK(std::isfinite(g));
        }
    std::mt19937_64 rng2(7);
    const auto ch2 = build_channel(cfg, rng2);
    CHECK(ch.gains == ch2.gains);
}

TEST_CASE("without fading all subchannel rows of a user are equal") {
    ScenarioConfig cfg = default_cfg();
    cfg.fading = false;
    std::mt19937_64 rng(3);
    const auto ch = build_channel(cfg, rng);
    for (int j = 0; j < cfg.n_users; ++j)
        for (int k = 1; k < cfg.n_subchannels; ++k)
            CHECK(ch.gains[k][j] == ch.gains[0][j]);
}

TEST_CASE("fading is unit mean") {
    // gains / deterministic gains recovers the fading draws
    ScenarioConfig cfg = default_cfg();
    cfg.n_users = 100;
    cfg.n_subchannels = 10;
    std::mt19937_64 rng(11);
    double acc = 0.0;
    long n = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto ch = build_channel(cfg, rng);
        ScenarioConfig flat = cfg;
        flat.fading = false;
        for (int j = 0; j < cfg.n_users; ++j) {
            const double base =
                std::pow(10.0, -hata_path_loss(distance_to_bs(ch.positions[j], cfg), cfg) / 10.0);
            for (int k = 0; k < cfg.n_subchannels; ++k) {
                acc += ch.gains[k][j] / base;
                ++n;
            }
        }
    }
    CHECK(n == 100000);
    CHECK(acc / n == doctest::Approx(1.0).epsilon(0.02));
}
