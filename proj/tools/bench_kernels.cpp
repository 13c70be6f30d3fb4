// SPDX-License-Identifier: Apache-2.0
//
// Times the OpenMP kernels against their serial reference paths and
// verifies that both produce bit-identical results: channel evaluation,
// exhaustive orientation search and the per-sample minibatch gradients.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "vlcirs/agents.hpp"
#include "vlcirs/channel.hpp"
#include "vlcirs/config.hpp"
#include "vlcirs/env.hpp"

using namespace vlcirs;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %8.3f ms   omp %8.3f ms   speedup %5.2fx   identical %s\n", name,
                serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s, identical ? "yes" : "NO");
}

void bench_channel(std::size_t num_users, int iterations) {
    SimConfig sim = default_sim_config();
    sim.scene.mirrors.rows = 10;
    sim.scene.mirrors.cols = 10;
    const Scene scene = build_scene(sim.scene);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(0.2, scene.room.width_x - 0.2);
    std::uniform_real_distribution<double> uy(0.2, scene.room.depth_y - 0.2);
    std::uniform_real_distribution<double> ua(-1.0, 1.0);

    std::vector<MirrorState> mirrors = scene.initial_mirror_states();
    for (MirrorState& m : mirrors) {
        m.yaw = ua(rng) * 1.5;
        m.roll = ua(rng) * 1.5;
    }
    std::vector<Vec3> users(num_users);
    for (Vec3& u : users) u = {ux(rng), uy(rng), scene.room.receiver_height};
    std::vector<char> clear(num_users, 1);

    ChannelEvalInput in;
    in.scene = &scene;
    in.mirrors = mirrors;
    in.user_positions = users;
    in.los_clear = clear;
    in.noise = sim.env.noise;

    std::vector<ChannelReport> serial_out, parallel_out;
    evaluate_channels_serial(in, serial_out); // warm up
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < iterations; ++i) evaluate_channels_serial(in, serial_out);
    const double serial_s = seconds_since(t0) / iterations;

    evaluate_channels(in, parallel_out, true);
    t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < iterations; ++i) evaluate_channels(in, parallel_out, true);
    const double parallel_s = seconds_since(t0) / iterations;

    bool identical = true;
    for (std::size_t k = 0; k < num_users; ++k) {
        identical &= serial_out[k].sinr == parallel_out[k].sinr &&
                     serial_out[k].rate_bps == parallel_out[k].rate_bps &&
                     serial_out[k].irs_gains == parallel_out[k].irs_gains;
    }
    char name[64];
    std::snprintf(name, sizeof(name), "channel K=%zu M=100", num_users);
    report(name, serial_s, parallel_s, identical);
}

void bench_exhaustive() {
    SimConfig sim = default_sim_config();
    sim.scene.mirrors.rows = 1;
    sim.scene.mirrors.cols = 1;
    sim.env.num_users = 2;
    const Scene scene = build_scene(sim.scene);
    Environment env(scene, sim.env, 11);
    env.reset(11);

    auto t0 = std::chrono::steady_clock::now();
    const SearchResult serial = exhaustive_search_serial(env, 100);
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const SearchResult parallel = exhaustive_search(env, 100);
    const double parallel_s = seconds_since(t0);

    const bool identical =
        serial.action == parallel.action && serial.sum_rate_bps == parallel.sum_rate_bps;
    report("exhaustive 100x100 grid", serial_s, parallel_s, identical);
}

void fill_buffer(DdpgAgent& agent, std::size_t obs_dim, std::size_t act_dim) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 256; ++i) {
        Transition t;
        t.state.resize(obs_dim);
        t.next_state.resize(obs_dim);
        t.action.resize(act_dim);
        for (double& v : t.state) v = u(rng);
        for (double& v : t.next_state) v = u(rng);
        for (double& v : t.action) v = u(rng);
        t.reward = u(rng);
        t.done = false;
        agent.observe(std::move(t));
    }
}

void bench_ddpg_update(int iterations) {
    const std::size_t obs_dim = 26, act_dim = 18;
    DdpgConfig serial_cfg;
    serial_cfg.parallel_updates = false;
    DdpgConfig parallel_cfg;
    parallel_cfg.parallel_updates = true;

    DdpgAgent serial_agent(obs_dim, act_dim, serial_cfg, 3);
    DdpgAgent parallel_agent(obs_dim, act_dim, parallel_cfg, 3);
    fill_buffer(serial_agent, obs_dim, act_dim);
    fill_buffer(parallel_agent, obs_dim, act_dim);

    std::mt19937_64 pick_a(17), pick_b(17);
    const std::vector<const Transition*> batch_a =
        serial_agent.buffer().sample(serial_cfg.batch_size, pick_a);
    const std::vector<const Transition*> batch_b =
        parallel_agent.buffer().sample(parallel_cfg.batch_size, pick_b);

    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < iterations; ++i) serial_agent.update_with(batch_a);
    const double serial_s = seconds_since(t0) / iterations;

    t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < iterations; ++i) parallel_agent.update_with(batch_b);
    const double parallel_s = seconds_since(t0) / iterations;

    bool identical = true;
    const auto sp = serial_agent.actor().params();
    const auto pp = parallel_agent.actor().params();
    for (std::size_t i = 0; i < sp.size(); ++i) identical &= sp[i] == pp[i];
    const auto sc = serial_agent.critic().params();
    const auto pc = parallel_agent.critic().params();
    for (std::size_t i = 0; i < sc.size(); ++i) identical &= sc[i] == pc[i];

    report("ddpg update batch=32", serial_s, parallel_s, identical);
}

} // namespace

int main() {
    std::printf("threads available: %d\n", omp_get_max_threads());
    bench_channel(2, 2000);
    bench_channel(8, 1000);
    bench_channel(64, 200);
    bench_exhaustive();
    bench_ddpg_update(50);
    return 0;
}
