// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "vlcirs/agents.hpp"
#include "vlcirs/env.hpp"

using namespace vlcirs;

namespace {

Scene scene_with_mirrors(std::size_t rows, std::size_t cols) {
    SceneConfig config;
    config.mirrors.rows = rows;
    config.mirrors.cols = cols;
    return build_scene(config);
}

/// One user, one mirror, direct path blocked by a tall cylinder on the
/// AP->user segment. The IRS path is the only way to any rate.
Environment frozen_blocked_env(std::uint64_t seed, EnvConfig base = {}) {
    base.num_users = 1;
    base.fixed_user_positions = {{1.2, 3.0, 0.85}};
    base.blockage_mode = BlockageMode::None;
    base.irs_path_blockage = false;
    Environment env(scene_with_mirrors(1, 1), base, seed);
    env.reset(seed);
    env.set_blockages({{1.94, 2.715, 0.5, 2.6}});
    return env;
}

} // namespace

TEST_CASE("observation dimension follows 4K + 2M") {
    EnvConfig config;
    config.num_users = 5;
    Environment env(scene_with_mirrors(7, 7), config, 1);
    CHECK(env.observation_size() == 118);
    CHECK(env.action_size() == 98);
    CHECK(env.reset(3).size() == 118);
}

TEST_CASE("zero users is a configuration error") {
    EnvConfig config;
    config.num_users = 0;
    CHECK_THROWS_AS(Environment(scene_with_mirrors(1, 1), config, 1), ConfigError);
}

TEST_CASE("same seed twice gives identical observations and trajectories") {
    EnvConfig config;
    config.num_users = 3;
    config.blockage_mode = BlockageMode::Mhcp;
    config.blockage.intensity_per_m2 = 0.1;
    Environment env(scene_with_mirrors(2, 2), config, 17);

    const std::vector<double> obs1 = env.reset(99);
    std::vector<double> action(env.action_size(), 0.25);
    const StepOutcome step1 = env.step(action);

    const std::vector<double> obs2 = env.reset(99);
    const StepOutcome step2 = env.step(action);

    CHECK(obs1 == obs2);
    CHECK(step1.observation == step2.observation);
    CHECK(step1.reward == step2.reward);
    CHECK(step1.per_user_rates == step2.per_user_rates);
}

TEST_CASE("no-op actions on a static scene leave rates unchanged") {
    EnvConfig config;
    config.num_users = 2;
    config.fixed_user_positions = {{1.0, 2.0, 0.85}, {3.5, 3.0, 0.85}};
    Environment env(scene_with_mirrors(2, 2), config, 5);
    env.reset(5);
    std::vector<double> action(env.action_size());
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& a : action) a = u(rng);
    const StepOutcome first = env.step(action);
    const StepOutcome second = env.step(action);
    CHECK(first.per_user_rates == second.per_user_rates);
    CHECK(first.reward == second.reward);
}

TEST_CASE("actions are clamped, never rejected for range") {
    EnvConfig config;
    config.num_users = 1;
    Environment env(scene_with_mirrors(1, 1), config, 1);
    env.reset(1);
    std::vector<double> action = {1.5, -3.0};
    env.step(action);
    CHECK(env.mirrors()[0].yaw == doctest::Approx(std::numbers::pi / 2.0));
    CHECK(env.mirrors()[0].roll == doctest::Approx(-std::numbers::pi / 2.0));
    CHECK(env.angle_checks() >= 2);
    CHECK(env.angle_violations() == 0);
}

TEST_CASE("non-finite action components are rejected") {
    EnvConfig config;
    config.num_users = 1;
    Environment env(scene_with_mirrors(1, 1), config, 1);
    env.reset(1);
    std::vector<double> action = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_THROWS_AS(env.step(action), std::invalid_argument);
    std::vector<double> wrong_size = {0.0};
    CHECK_THROWS_AS(env.step(wrong_size), std::invalid_argument);
}

TEST_CASE("grid sweep through step matches the frozen-scene exhaustive search") {
    Environment env = frozen_blocked_env(11);
    REQUIRE(env.last_reports()[0].los_blocked);

    const std::size_t levels = 50;
    double best_rate = -1.0;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < levels; ++i) {
        for (std::size_t j = 0; j < levels; ++j) {
            const double yaw = -1.0 + 2.0 * static_cast<double>(i) / (levels - 1);
            const double roll = -1.0 + 2.0 * static_cast<double>(j) / (levels - 1);
            const StepOutcome out = env.step(std::vector<double>{yaw, roll});
            if (out.per_user_rates[0] > best_rate) {
                best_rate = out.per_user_rates[0];
                best_index = i * levels + j;
            }
        }
    }
    const SearchResult oracle = exhaustive_search(env, levels);
    CHECK(best_rate == doctest::Approx(oracle.sum_rate_bps).epsilon(1e-12));
    const double yaw = -1.0 + 2.0 * static_cast<double>(best_index / levels) / (levels - 1);
    const double roll = -1.0 + 2.0 * static_cast<double>(best_index % levels) / (levels - 1);
    CHECK(yaw == doctest::Approx(oracle.action[0]));
    CHECK(roll == doctest::Approx(oracle.action[1]));
    CHECK(best_rate > 0.0);
}

TEST_CASE("reward anchors") {
    SUBCASE("users exactly at target incur no penalty") {
        const std::vector<double> rates{1e6, 1e6};
        const std::vector<double> mins{1e6, 1e6};
        CHECK(compute_reward(rates, mins, 1e6, 1.0, false) == doctest::Approx(2.0));
    }
    SUBCASE("all-zero rates earn the full penalty") {
        const std::vector<double> rates(5, 0.0);
        const std::vector<double> mins(5, 1e6);
        CHECK(compute_reward(rates, mins, 1e6, 1.0, false) == doctest::Approx(-5.0));
    }
    SUBCASE("mixed example") {
        const std::vector<double> rates{2e6, 0.5e6};
        const std::vector<double> mins{1e6, 1e6};
        CHECK(compute_reward(rates, mins, 1e6, 1.0, false) == doctest::Approx(1.5));
    }
    SUBCASE("printed variant flips the indicator") {
        const std::vector<double> rates{2e6, 0.5e6};
        const std::vector<double> mins{1e6, 1e6};
        CHECK(compute_reward(rates, mins, 1e6, 1.0, true) == doctest::Approx(1.5));
        const std::vector<double> good{2e6, 2e6};
        CHECK(compute_reward(good, mins, 1e6, 1.0, true) == doctest::Approx(2.0));
    }
    SUBCASE("length mismatch is rejected") {
        const std::vector<double> rates{1.0};
        const std::vector<double> mins{1.0, 2.0};
        CHECK_THROWS_AS(compute_reward(rates, mins, 1e6, 1.0, false), std::invalid_argument);
    }
}

TEST_CASE("reward is monotone nondecreasing in every rate") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ur(0.0, 3e6);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> rates(4), mins(4, 1e6);
        for (double& r : rates) r = ur(rng);
        const double before = compute_reward(rates, mins, 1e6, 1.0, false);
        const std::size_t k = trial % 4;
        rates[k] += ur(rng);
        const double after = compute_reward(rates, mins, 1e6, 1.0, false);
        CHECK(after >= before);
    }
}

TEST_CASE("observation codecs invert to 1e-9 relative") {
    EnvConfig config;
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double pos = u01(rng) * 5.0;
        CHECK(ObsCodec::decode_position(ObsCodec::encode_position(pos, 5.0), 5.0) ==
              doctest::Approx(pos).epsilon(1e-9));
        const double gain = std::pow(10.0, -12.0 + 10.0 * u01(rng));
        CHECK(ObsCodec::decode_gain(ObsCodec::encode_gain(gain, config), config) ==
              doctest::Approx(gain).epsilon(1e-9));
        const double angle = (u01(rng) * 2.0 - 1.0) * std::numbers::pi / 2.0;
        CHECK(ObsCodec::decode_angle(ObsCodec::encode_angle(angle)) ==
              doctest::Approx(angle).epsilon(1e-9));
        const double rate = u01(rng) * 1e7;
        CHECK(ObsCodec::decode_min_rate(ObsCodec::encode_min_rate(rate, config), config) ==
              doctest::Approx(rate).epsilon(1e-9));
    }
}

TEST_CASE("every observation component lies in [-1, 1]") {
    EnvConfig config;
    config.num_users = 4;
    config.blockage_mode = BlockageMode::FixedCount;
    config.blockage_count = 2;
    Environment env(scene_with_mirrors(3, 3), config, 23);
    std::vector<double> obs = env.reset(23);
    Rng rng(29);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        for (double v : obs) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
        std::vector<double> action(env.action_size());
        for (double& a : action) a = u(rng);
        obs = env.step(action).observation;
    }
}

TEST_CASE("blocked user with back-facing mirror earns the full penalty") {
    Environment env = frozen_blocked_env(31);
    // rest angles: the orientation cosine toward the user is negative
    const StepOutcome out = env.step(std::vector<double>{0.0, 0.0});
    CHECK(out.per_user_rates[0] == 0.0);
    CHECK(out.reward == doctest::Approx(-1.0)); // -w_p * K with K = 1
    CHECK(out.qos_violations == 1);
}

TEST_CASE("episodes end on the step budget") {
    EnvConfig config;
    config.num_users = 1;
    config.episode_steps = 3;
    config.fixed_user_positions = {{1.2, 3.0, 0.85}};
    config.min_rate_bps = 1e12; // unreachable: only the budget can end it
    Environment env(scene_with_mirrors(1, 1), config, 7);
    env.reset(7);
    const std::vector<double> action(env.action_size(), 0.0);
    CHECK_FALSE(env.step(action).done);
    CHECK_FALSE(env.step(action).done);
    CHECK(env.step(action).done);
}

TEST_CASE("episodes end when every user meets its target") {
    EnvConfig config;
    config.num_users = 1;
    config.min_rate_bps = 10.0; // LoS easily clears this
    config.fixed_user_positions = {{2.5, 2.5, 0.85}};
    Environment env(scene_with_mirrors(1, 1), config, 7);
    env.reset(7);
    const StepOutcome out = env.step(std::vector<double>(env.action_size(), 0.0));
    CHECK(out.qos_violations == 0);
    CHECK(out.done);

    // with the switch off, the budget is the only terminator
    config.terminate_when_qos_met = false;
    Environment env2(scene_with_mirrors(1, 1), config, 7);
    env2.reset(7);
    CHECK_FALSE(env2.step(std::vector<double>(env2.action_size(), 0.0)).done);
}

TEST_CASE("static geometry never mutates across steps") {
    EnvConfig config;
    config.num_users = 2;
    Environment env(scene_with_mirrors(2, 3), config, 3);
    env.reset(3);
    const std::vector<Vec3> centers_before = env.scene().mirror_centers;
    Rng rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> action(env.action_size());
        for (double& a : action) a = u(rng);
        env.step(action);
    }
    CHECK(env.scene().mirror_centers == centers_before);
}
