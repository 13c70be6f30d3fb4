// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vlcirs/env.hpp"
#include "vlcirs/mlp.hpp"
#include "vlcirs/replay.hpp"

namespace vlcirs {

struct DdpgConfig {
    double actor_lr = 1.0e-3;
    double critic_lr = 1.0e-2;
    double discount = 0.9;
    double tau = 0.01;
    std::size_t buffer_capacity = 10000;
    std::size_t batch_size = 32;
    // Gaussian action-noise scale, decayed multiplicatively per episode.
    double noise_initial = 0.995;
    double noise_decay = 0.995;
    double noise_floor = 1.0e-4;
    std::size_t actor_hidden1 = 128;
    std::size_t actor_hidden2 = 64;
    std::size_t critic_hidden1 = 256;
    std::size_t critic_hidden2 = 128;
    /// Per-sample OpenMP gradients; pays off only on wide machines or
    /// large batches (see bench_kernels), so the serial path is default.
    bool parallel_updates = false;
};

struct UpdateStats {
    double critic_loss = 0.0;
    double actor_objective = 0.0;
};

/// Deterministic-policy actor-critic with replay and soft target
/// updates. The actor emits 2M values in (-1, 1) through its tanh head;
/// the critic scores state (+) action concatenated at the input.
class DdpgAgent {
public:
    DdpgAgent(std::size_t obs_dim, std::size_t act_dim, DdpgConfig config, std::uint64_t seed);

    std::vector<double> select_action(std::span<const double> state, bool explore, Rng& rng);
    void observe(Transition t) { buffer_.push(std::move(t)); }
    bool ready() const { return buffer_.size() >= config_.batch_size; }

    /// Samples a minibatch and runs one critic step, one actor step and
    /// both soft target updates.
    UpdateStats update(Rng& rng);
    /// Same, on a caller-provided minibatch.
    UpdateStats update_with(const std::vector<const Transition*>& batch);

    double exploration_scale() const { return noise_scale_; }
    void decay_exploration();

    const Mlp& actor() const { return actor_; }
    const Mlp& critic() const { return critic_; }
    const Mlp& actor_target() const { return actor_target_; }
    const Mlp& critic_target() const { return critic_target_; }
    ReplayBuffer& buffer() { return buffer_; }
    const DdpgConfig& config() const { return config_; }
    std::size_t obs_dim() const { return obs_dim_; }
    std::size_t act_dim() const { return act_dim_; }

    void save(const std::filesystem::path& path) const;
    static DdpgAgent load(const std::filesystem::path& path);

private:
    std::size_t obs_dim_;
    std::size_t act_dim_;
    DdpgConfig config_;
    Mlp actor_, critic_, actor_target_, critic_target_;
    AdamState actor_adam_, critic_adam_;
    ReplayBuffer buffer_;
    double noise_scale_;

    // Reused per-sample gradient storage (summed in sample order so the
    // parallel path matches the serial one bitwise).
    std::vector<std::vector<double>> critic_sample_grads_;
};

struct DqlConfig {
    double lr = 1.0e-3;
    double discount = 0.9;
    double tau = 0.01;
    std::size_t buffer_capacity = 10000;
    std::size_t batch_size = 32;
    double epsilon_initial = 0.995;
    double epsilon_decay = 0.995;
    double epsilon_floor = 1.0e-4;
    std::size_t levels = 5; // quantization levels per angle
    std::size_t hidden1 = 256;
    std::size_t hidden2 = 128;
    bool parallel_updates = false;
};

/// Value-based baseline over quantized angles: one output head of
/// `levels` entries per angle, greedy action = per-head argmax.
class DqlAgent {
public:
    DqlAgent(std::size_t obs_dim, std::size_t act_dim, DqlConfig config, std::uint64_t seed);

    static double level_value(std::size_t level, std::size_t levels);
    static std::size_t value_level(double value, std::size_t levels);

    std::vector<double> select_action(std::span<const double> state, bool explore, Rng& rng);
    void observe(Transition t) { buffer_.push(std::move(t)); }
    bool ready() const { return buffer_.size() >= config_.batch_size; }
    UpdateStats update(Rng& rng);
    UpdateStats update_with(const std::vector<const Transition*>& batch);

    double exploration_scale() const { return epsilon_; }
    void decay_exploration();

    const Mlp& q_network() const { return q_; }
    const DqlConfig& config() const { return config_; }
    ReplayBuffer& buffer() { return buffer_; }

    void save(const std::filesystem::path& path) const;
    static DqlAgent load(const std::filesystem::path& path);

private:
    std::size_t obs_dim_;
    std::size_t act_dim_;
    DqlConfig config_;
    Mlp q_, q_target_;
    AdamState adam_;
    ReplayBuffer buffer_;
    double epsilon_;
    std::vector<std::vector<double>> sample_grads_;
};

/// Mean critic score J = (1/N) sum_i Q(s_i, mu(s_i)) and dJ/d(theta_mu),
/// chained through grad_a Q. Shared by the DDPG update and the gradient
/// tests.
std::pair<double, std::vector<double>> actor_objective_gradient(
    const Mlp& actor, const Mlp& critic, const std::vector<const Transition*>& batch,
    bool parallel);

/// Uniform random mirror orientation, drawn once and held for a whole
/// serving period.
std::vector<double> random_orientation_policy(std::size_t num_mirrors, Rng& rng);

struct SearchResult {
    std::vector<double> action;
    double sum_rate_bps = 0.0;
};

/// Evaluates the frozen scene's sum rate on a uniform grid over all 2M
/// angle dimensions and returns the best point (first in lexicographic
/// order on ties). Throws when levels^(2M) exceeds max_evaluations.
SearchResult exhaustive_search(const Environment& env, std::size_t grid_levels,
                               std::uint64_t max_evaluations = 10'000'000, bool parallel = true);
SearchResult exhaustive_search_serial(const Environment& env, std::size_t grid_levels,
                                      std::uint64_t max_evaluations = 10'000'000);

struct TrainReport {
    std::vector<double> episode_sum_rate_bps;       // mean instantaneous sum rate per episode
    std::vector<double> episode_reward;             // mean reward per step
    std::vector<double> episode_critic_loss;        // mean critic loss across updates
    std::vector<double> episode_qos_violations;     // mean violating users per step
    std::vector<double> episode_decision_latency_s; // mean action-selection wall time

    std::size_t episodes() const { return episode_sum_rate_bps.size(); }
};

/// Algorithm loop shared by both learners: act, step, store, sample,
/// update, soft-update targets; episodes end on QoS satisfaction or the
/// step budget. `rng` drives exploration and minibatch sampling.
TrainReport train(DdpgAgent& agent, Environment& env, std::size_t episodes, Rng& rng);
TrainReport train(DqlAgent& agent, Environment& env, std::size_t episodes, Rng& rng);

} // namespace vlcirs
