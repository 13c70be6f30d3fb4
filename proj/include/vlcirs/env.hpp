// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "vlcirs/channel.hpp"
#include "vlcirs/dynamics.hpp"
#include "vlcirs/scene.hpp"

namespace vlcirs {

enum class BlockageMode { None, FixedCount, Mhcp };
enum class InitDistribution { Stationary, Uniform };

struct EnvConfig {
    std::size_t num_users = 5;
    double min_rate_bps = 1.0e6;
    MobilityConfig mobility;
    NoiseModel noise;

    BlockageMode blockage_mode = BlockageMode::None;
    std::size_t blockage_count = 0; // FixedCount mode
    BlockageConfig blockage;
    bool regenerate_blockages_each_reset = false;
    /// Also occlude mirror->user segments (off reproduces the
    /// direct-path-only blockage treatment).
    bool irs_path_blockage = true;

    std::size_t episode_steps = 200;
    double dt_s = 0.1;
    bool terminate_when_qos_met = true;

    double reward_norm_bps = 1.0e6;
    double penalty_weight = 1.0;
    /// Swap the penalty indicator direction (penalize users at or above
    /// their target instead of below it).
    bool printed_penalty_variant = false;

    // Observation scaling; gains are log-compressed before mapping to
    // [-1, 1] because they span many decades.
    double gain_log_floor = 1.0e-12;
    double gain_log_cap = 1.0e-2;
    double min_rate_obs_cap_bps = 1.0e7;
    InitDistribution init = InitDistribution::Stationary;

    /// Frozen-scene support: when nonempty (one entry per user), reset
    /// pins users here instead of drawing positions, and they never move.
    std::vector<Vec3> fixed_user_positions;

    bool parallel_kernels = true;
};

struct StepOutcome {
    std::vector<double> observation;
    double reward = 0.0;
    std::vector<double> per_user_rates;
    std::size_t qos_violations = 0;
    bool done = false;
};

/// Episode reward: normalized sum rate minus a weighted count of users
/// missing their rate target (or meeting it, under the printed variant).
double compute_reward(std::span<const double> per_user_rates, std::span<const double> min_rates,
                      double reward_norm_bps, double penalty_weight, bool printed_variant);

/// Observation component codecs, exposed so the normalization can be
/// checked as a bijection on the represented ranges.
struct ObsCodec {
    static double encode_position(double v, double extent);
    static double decode_position(double n, double extent);
    static double encode_gain(double g, const EnvConfig& cfg);
    static double decode_gain(double n, const EnvConfig& cfg);
    static double encode_angle(double radians);
    static double decode_angle(double n);
    static double encode_min_rate(double bps, const EnvConfig& cfg);
    static double decode_min_rate(double n, const EnvConfig& cfg);
};

/// The MDP wrapper around one scene: owns users, blockages, mirror
/// orientations and one RNG stream. Observation layout:
/// [2K normalized positions][K log-gains][2M angles][K min rates].
/// Actions are 2M values in [-1, 1], interleaved (yaw, roll) per mirror.
class Environment {
public:
    Environment(Scene scene, EnvConfig config, std::uint64_t seed);

    std::size_t observation_size() const { return 4 * config_.num_users + 2 * scene_.mirror_count(); }
    std::size_t action_size() const { return 2 * scene_.mirror_count(); }
    const Scene& scene() const { return scene_; }
    const EnvConfig& config() const { return config_; }

    std::vector<double> reset();
    std::vector<double> reset(std::uint64_t seed);
    StepOutcome step(std::span<const double> action);

    /// Per-user rates for a candidate action against the current frozen
    /// user/blockage state; does not advance or mutate the episode.
    std::vector<double> rates_for_action(std::span<const double> action) const;
    std::vector<ChannelReport> reports_for_action(std::span<const double> action) const;

    const std::vector<ChannelReport>& last_reports() const { return reports_; }
    const std::vector<UserState>& users() const { return users_; }
    const std::vector<MirrorState>& mirrors() const { return mirrors_; }
    const std::vector<BlockageCylinder>& blockages() const { return blockages_; }
    std::vector<double> min_rates() const;

    /// Freezes users in place (no motion, no RNG consumption).
    void pin_users(const std::vector<Vec3>& positions);
    void set_blockages(std::vector<BlockageCylinder> blockages);

    // Angle-range assertion counters (every applied action is checked).
    std::uint64_t angle_checks() const { return angle_checks_; }
    std::uint64_t angle_violations() const { return angle_violations_; }

    /// Process-wide totals across all environment instances.
    static std::uint64_t global_angle_checks();
    static std::uint64_t global_angle_violations();

private:
    Scene scene_;
    EnvConfig config_;
    Rng rng_;
    std::vector<UserState> users_;
    std::vector<MirrorState> mirrors_;
    std::vector<BlockageCylinder> blockages_;
    std::vector<char> los_clear_;
    std::vector<char> mirror_path_clear_;
    std::vector<ChannelReport> reports_;
    std::size_t step_count_ = 0;
    bool blockages_placed_ = false;
    std::uint64_t angle_checks_ = 0;
    std::uint64_t angle_violations_ = 0;

    void apply_action(std::span<const double> action);
    void refresh_blockage_flags();
    void evaluate();
    std::vector<double> observation() const;
};

} // namespace vlcirs
