// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "vlcirs/config.hpp"
#include "vlcirs/csv.hpp"
#include "vlcirs/harness.hpp"

using namespace vlcirs;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

SimConfig fast_sim() {
    SimConfig sim = default_sim_config();
    sim.scene.mirrors.rows = 1;
    sim.scene.mirrors.cols = 2;
    sim.env.num_users = 2;
    sim.env.episode_steps = 8;
    sim.ddpg.actor_hidden1 = 16;
    sim.ddpg.actor_hidden2 = 8;
    sim.ddpg.critic_hidden1 = 16;
    sim.ddpg.critic_hidden2 = 8;
    sim.ddpg.batch_size = 4;
    sim.dql.hidden1 = 16;
    sim.dql.hidden2 = 8;
    sim.dql.batch_size = 4;
    return sim;
}

} // namespace

TEST_CASE("double formatting round-trips exactly") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 30));
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(parse_double(format_double(0.0)) == 0.0);
    CHECK(parse_double(format_double(1e-300)) == 1e-300);
    CHECK_THROWS(parse_double("1.2.3"));
}

TEST_CASE("one row makes a two-line file") {
    const auto dir = fresh_dir("vlcirs_csv_one");
    CsvWriter csv({"a", "b"});
    csv.add_row({"1", "2"});
    csv.write(dir / "t.csv");
    const std::string text = slurp(dir / "t.csv");
    CHECK(text == "a,b\n1,2\n");
}

TEST_CASE("csv rejects malformed rows and cells") {
    CsvWriter csv({"a", "b"});
    CHECK_THROWS_AS(csv.add_row({"only-one"}), std::invalid_argument);
    CHECK_THROWS_AS(csv.add_row({"x,y", "z"}), std::invalid_argument);
    CHECK_THROWS_AS(csv.write(std::filesystem::temp_directory_path() / "empty.csv"),
                    std::invalid_argument);
}

TEST_CASE("large tables round-trip byte-identically") {
    const auto dir = fresh_dir("vlcirs_csv_big");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e9, 1e9);
    CsvWriter csv({"idx", "value"});
    for (int i = 0; i < 10000; ++i) csv.add_row({std::to_string(i), format_double(u(rng))});
    csv.write(dir / "big.csv");
    const std::string first = slurp(dir / "big.csv");

    const CsvData data = read_csv(dir / "big.csv");
    REQUIRE(data.columns == std::vector<std::string>{"idx", "value"});
    REQUIRE(data.rows.size() == 10000);
    CsvWriter rewrite(data.columns);
    for (const auto& row : data.rows) rewrite.add_row(row);
    rewrite.write(dir / "big2.csv");
    CHECK(slurp(dir / "big2.csv") == first);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config round-trips through its own dump") {
    const SimConfig base = default_sim_config();
    const std::string text = dump_sim_config(base);
    const SimConfig parsed = parse_sim_config(text);
    CHECK(parsed.scene.room.ap_position == base.scene.room.ap_position);
    CHECK(parsed.scene.led.half_power_semiangle ==
          doctest::Approx(base.scene.led.half_power_semiangle).epsilon(1e-12));
    CHECK(parsed.scene.mirrors.rows == base.scene.mirrors.rows);
    CHECK(parsed.env.noise.total_variance_a2 == base.env.noise.total_variance_a2);
    CHECK(parsed.ddpg.critic_lr == base.ddpg.critic_lr);
    CHECK(parsed.dql.levels == base.dql.levels);
}

TEST_CASE("config rejects unknown keys by name") {
    CHECK_THROWS_WITH_AS(parse_sim_config(R"({"room": {"width_m": 4}})"),
                         doctest::Contains("room.width_m"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_sim_config(R"({"typo_section": {}})"),
                         doctest::Contains("typo_section"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_sim_config(R"({"users": {"init": "corner"}})"),
                         doctest::Contains("users.init"), ConfigError);
}

TEST_CASE("config applies defaults for absent keys and derives the AP centre") {
    const SimConfig parsed = parse_sim_config(R"({"room": {"width_x_m": 4.0}})");
    CHECK(parsed.scene.room.width_x == 4.0);
    CHECK(parsed.scene.room.ap_position.x == 2.0); // centre of the resized ceiling
    CHECK(parsed.scene.room.ap_position.z == 3.0);
    CHECK(parsed.env.num_users == 5);
}

TEST_CASE("evaluation metrics are reproducible and permutation invariant") {
    SimConfig sim = fast_sim();
    const Scene scene = build_scene(sim.scene);
    Environment env(scene, sim.env, 3);
    RandomOrientationEvalPolicy policy(scene.mirror_count());

    const std::vector<std::uint64_t> seeds{4, 9, 2};
    const EvalMetrics a = evaluate_policy(policy, env, 20, seeds);
    const EvalMetrics b = evaluate_policy(policy, env, 20, seeds);
    CHECK(a.per_seed_sum_rate_bps == b.per_seed_sum_rate_bps);
    CHECK(a.mean_ber == b.mean_ber);

    const std::vector<std::uint64_t> permuted{2, 4, 9};
    const EvalMetrics c = evaluate_policy(policy, env, 20, permuted);
    CHECK(a.mean_sum_rate_bps == c.mean_sum_rate_bps);
    CHECK(a.std_sum_rate_bps == c.std_sum_rate_bps);
    CHECK(a.mean_qos_violation_fraction == c.mean_qos_violation_fraction);
}

TEST_CASE("a random policy cannot beat the frozen-scene optimum") {
    SimConfig sim = fast_sim();
    sim.scene.mirrors.cols = 1; // one mirror: cheap exhaustive grid
    sim.env.num_users = 2;
    // fixed off-axis users the mirror can actually reach
    sim.env.fixed_user_positions = {{1.0, 2.5, 0.85}, {4.2, 1.2, 0.85}};
    const Scene scene = build_scene(sim.scene);

    Environment env(scene, sim.env, 31);
    RandomOrientationEvalPolicy policy(scene.mirror_count());
    const std::vector<std::uint64_t> seeds{11, 12, 13, 14};
    const EvalMetrics metrics = evaluate_policy(policy, env, 10, seeds);

    Environment frozen(scene, sim.env, 31);
    frozen.reset(seeds[0]);
    const SearchResult best = exhaustive_search(frozen, 41);
    CHECK(best.sum_rate_bps >
          std::accumulate(frozen.last_reports().begin(), frozen.last_reports().end(), 0.0,
                          [](double acc, const ChannelReport& r) { return acc + r.rate_bps; }));
    CHECK(metrics.mean_sum_rate_bps < best.sum_rate_bps);
    for (double rate : metrics.per_seed_sum_rate_bps) CHECK(rate <= best.sum_rate_bps + 1e-9);
}

TEST_CASE("experiment validation fires before any work") {
    ExperimentConfig config;
    config.sim = fast_sim();
    config.output_dir = fresh_dir("vlcirs_exp_invalid");
    config.seeds = {};
    CHECK_THROWS_WITH_AS(run_experiment(config), doctest::Contains("seeds"), ConfigError);
    config.seeds = {1, 1};
    CHECK_THROWS_WITH_AS(run_experiment(config), doctest::Contains("distinct"), ConfigError);
    config.seeds = {1};
    config.algorithm = "sarsa";
    CHECK_THROWS_AS(run_experiment(config), ConfigError);
    CHECK_FALSE(std::filesystem::exists(config.output_dir / "results.csv"));
    std::filesystem::remove_all(config.output_dir);
}

TEST_CASE("experiments are byte-deterministic for a fixed seed list") {
    ExperimentConfig config;
    config.sim = fast_sim();
    config.algorithm = "random";
    config.seeds = {1, 2};
    config.eval_horizon = 12;
    config.power_sweep_w = {1.0, 2.0};
    config.workers = 2;

    config.output_dir = fresh_dir("vlcirs_exp_a");
    run_experiment(config);
    const std::string first = slurp(config.output_dir / "results.csv");

    config.output_dir = fresh_dir("vlcirs_exp_b");
    run_experiment(config);
    CHECK(slurp(config.output_dir / "results.csv") == first);

    const CsvData data = read_csv(config.output_dir / "results.csv");
    CHECK(data.columns.size() == 9);
    // 2 sweep points x (2 seeds x 3 metrics + 6 aggregate rows)
    CHECK(data.rows.size() == 24);
    std::filesystem::remove_all(config.output_dir);
}

TEST_CASE("ddpg task runs end to end with safe actions") {
    SimConfig sim = fast_sim();
    const TaskOutput out = run_single("ddpg", sim, 5, 2, 10);
    CHECK(out.train.episodes() == 2);
    CHECK(std::isfinite(out.metrics.mean_sum_rate_bps));
    CHECK(out.metrics.mean_ber >= 0.0);
    CHECK(out.metrics.mean_ber <= 0.5);
    CHECK(out.angle_checks > 0);
    CHECK(out.angle_violations == 0);
}

TEST_CASE("episode traces carry one row per user-step and the angle columns") {
    SimConfig sim = fast_sim();
    const Scene scene = build_scene(sim.scene);
    Environment env(scene, sim.env, 7);
    RandomOrientationEvalPolicy policy(scene.mirror_count());
    const auto dir = fresh_dir("vlcirs_trace");
    write_episode_trace(env, policy, 2, 7, dir / "trace.csv");

    const CsvData data = read_csv(dir / "trace.csv");
    CHECK(data.columns.size() == 8 + 2 * scene.mirror_count());
    CHECK(data.columns[0] == "episode");
    CHECK(data.columns[8] == "phi_0");
    // every row has K entries per step; steps may end early on QoS
    CHECK(data.rows.size() % sim.env.num_users == 0);
    CHECK(!data.rows.empty());
    std::filesystem::remove_all(dir);
}
