// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vlcirs/agents.hpp"
#include "vlcirs/config.hpp"
#include "vlcirs/csv.hpp"
#include "vlcirs/env.hpp"

namespace vlcirs {

/// Evaluation-time policy: begin_episode lets per-episode policies (the
/// static random orientation) redraw; act must not explore.
class EvalPolicy {
public:
    virtual ~EvalPolicy() = default;
    virtual void begin_episode(Rng&) {}
    virtual std::vector<double> act(std::span<const double> observation, Rng& rng) = 0;
};

class DdpgEvalPolicy : public EvalPolicy {
public:
    explicit DdpgEvalPolicy(DdpgAgent& agent) : agent_(&agent) {}
    std::vector<double> act(std::span<const double> observation, Rng& rng) override {
        return agent_->select_action(observation, false, rng);
    }

private:
    DdpgAgent* agent_;
};

class DqlEvalPolicy : public EvalPolicy {
public:
    explicit DqlEvalPolicy(DqlAgent& agent) : agent_(&agent) {}
    std::vector<double> act(std::span<const double> observation, Rng& rng) override {
        return agent_->select_action(observation, false, rng);
    }

private:
    DqlAgent* agent_;
};

/// Draws one uniform orientation per episode and holds it.
class RandomOrientationEvalPolicy : public EvalPolicy {
public:
    explicit RandomOrientationEvalPolicy(std::size_t num_mirrors) : num_mirrors_(num_mirrors) {}
    void begin_episode(Rng& rng) override { action_ = random_orientation_policy(num_mirrors_, rng); }
    std::vector<double> act(std::span<const double>, Rng&) override { return action_; }

private:
    std::size_t num_mirrors_;
    std::vector<double> action_;
};

struct EvalMetrics {
    double mean_sum_rate_bps = 0.0, std_sum_rate_bps = 0.0;
    double mean_ber = 0.0, std_ber = 0.0;
    double mean_reward = 0.0, std_reward = 0.0;
    double mean_qos_violation_fraction = 0.0, std_qos_violation_fraction = 0.0;
    double mean_latency_s = 0.0;
    std::vector<double> per_seed_sum_rate_bps;
    std::vector<double> per_seed_ber;
    std::vector<double> per_seed_reward;
    std::vector<double> per_seed_qos_violation_fraction;
    std::vector<double> per_seed_latency_s;
};

/// Runs the policy with exploration off for a fixed horizon per seed
/// (episode termination flags are ignored) and aggregates mean/std over
/// seeds. Aggregation sorts values first, so it is exactly permutation
/// invariant over the seed list.
EvalMetrics evaluate_policy(EvalPolicy& policy, Environment& env, std::size_t horizon,
                            std::span<const std::uint64_t> seeds);

/// Episode trace export: one row per (episode, step, user) with
/// position, rate, QoS flag, reward and all 2M applied angles.
void write_episode_trace(Environment& env, EvalPolicy& policy, std::size_t episodes,
                         std::uint64_t seed, const std::filesystem::path& file);

struct TaskOutput {
    EvalMetrics metrics;
    TrainReport train;
    std::uint64_t angle_checks = 0;
    std::uint64_t angle_violations = 0;
};

/// Trains (where the algorithm learns) and evaluates one scenario.
/// algorithm is one of "ddpg", "dql", "random".
TaskOutput run_single(const std::string& algorithm, const SimConfig& sim, std::uint64_t seed,
                      std::size_t train_episodes, std::size_t eval_horizon);

struct ExperimentConfig {
    SimConfig sim;
    std::string algorithm = "ddpg";
    std::vector<std::uint64_t> seeds{1};
    std::size_t train_episodes = 200;
    std::size_t eval_horizon = 500;
    /// Sweep axes; an empty axis keeps the base config's value.
    std::vector<double> power_sweep_w;
    std::vector<std::size_t> blockage_sweep;
    std::vector<std::pair<std::size_t, std::size_t>> irs_sweep;
    std::vector<double> velocity_sweep_mps;
    std::filesystem::path output_dir = "out";
    std::size_t workers = 1;
    bool write_timing = true;
    bool write_train_curves = false;
};

/// Full sweep: trains/evaluates every point x seed, writes results.csv
/// (plus timing.csv and optional per-task training curves). Deterministic
/// output for a fixed seed list regardless of worker count.
void run_experiment(const ExperimentConfig& config);

struct PresetOptions {
    std::filesystem::path output_dir = "out";
    std::size_t episodes = 120;
    std::size_t eval_horizon = 500;
    std::vector<std::uint64_t> seeds{1};
    std::size_t workers = 1;
    bool write_timing = true;
};

void run_preset_fig3(const PresetOptions& options);
void run_preset_fig4(const PresetOptions& options);
void run_preset_fig5(const PresetOptions& options);

} // namespace vlcirs
