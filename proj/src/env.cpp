// SPDX-License-Identifier: Apache-2.0
#include "vlcirs/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vlcirs/errors.hpp"

#include <atomic>

namespace vlcirs {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
std::atomic<std::uint64_t> g_angle_checks{0};
std::atomic<std::uint64_t> g_angle_violations{0};
}

std::uint64_t Environment::global_angle_checks() { return g_angle_checks.load(); }
std::uint64_t Environment::global_angle_violations() { return g_angle_violations.load(); }

double compute_reward(std::span<const double> per_user_rates, std::span<const double> min_rates,
                      double reward_norm_bps, double penalty_weight, bool printed_variant) {
    if (per_user_rates.size() != min_rates.size())
        throw std::invalid_argument("compute_reward: rate/target list length mismatch");
    double sum = 0.0;
    std::size_t flagged = 0;
    for (std::size_t k = 0; k < per_user_rates.size(); ++k) {
        sum += per_user_rates[k];
        const bool below = per_user_rates[k] < min_rates[k];
        if (printed_variant ? !below : below) ++flagged;
    }
    return sum / reward_norm_bps - penalty_weight * static_cast<double>(flagged);
}

double ObsCodec::encode_position(double v, double extent) { return 2.0 * v / extent - 1.0; }
double ObsCodec::decode_position(double n, double extent) { return (n + 1.0) / 2.0 * extent; }

double ObsCodec::encode_gain(double g, const EnvConfig& cfg) {
    const double lo = std::log10(cfg.gain_log_floor);
    const double hi = std::log10(cfg.gain_log_cap);
    const double u = std::log10(std::clamp(g, cfg.gain_log_floor, cfg.gain_log_cap));
    return 2.0 * (u - lo) / (hi - lo) - 1.0;
}

double ObsCodec::decode_gain(double n, const EnvConfig& cfg) {
    const double lo = std::log10(cfg.gain_log_floor);
    const double hi = std::log10(cfg.gain_log_cap);
    return std::pow(10.0, (n + 1.0) / 2.0 * (hi - lo) + lo);
}

double ObsCodec::encode_angle(double radians) { return radians / kHalfPi; }
double ObsCodec::decode_angle(double n) { return n * kHalfPi; }

double ObsCodec::encode_min_rate(double bps, const EnvConfig& cfg) {
    return 2.0 * std::min(bps, cfg.min_rate_obs_cap_bps) / cfg.min_rate_obs_cap_bps - 1.0;
}
double ObsCodec::decode_min_rate(double n, const EnvConfig& cfg) {
    return (n + 1.0) / 2.0 * cfg.min_rate_obs_cap_bps;
}

Environment::Environment(Scene scene, EnvConfig config, std::uint64_t seed)
    : scene_(std::move(scene)), config_(std::move(config)), rng_(seed) {
    if (config_.num_users == 0) throw ConfigError("env.num_users: must be >= 1");
    if (!(config_.dt_s > 0.0)) throw ConfigError("env.dt_s: must be > 0");
    if (config_.episode_steps == 0) throw ConfigError("env.episode_steps: must be >= 1");
    if (!(config_.reward_norm_bps > 0.0)) throw ConfigError("env.reward_norm_bps: must be > 0");
    if (!(config_.min_rate_bps > 0.0)) throw ConfigError("env.min_rate_bps: must be > 0");
    mirrors_ = scene_.initial_mirror_states();

    // Static blockages come from their own stream so that reset(seed)
    // reproduces identical trajectories regardless of env history.
    if (config_.blockage_mode != BlockageMode::None && !config_.regenerate_blockages_each_reset) {
        Rng blockage_rng(seed ^ 0x9e3779b97f4a7c15ULL);
        blockages_ = config_.blockage_mode == BlockageMode::FixedCount
                         ? place_blockages_fixed(scene_.room, config_.blockage,
                                                 config_.blockage_count, blockage_rng)
                         : place_blockages_mhcp(scene_.room, config_.blockage, blockage_rng);
        blockages_placed_ = true;
    }
}

std::vector<double> Environment::min_rates() const {
    std::vector<double> out(users_.size());
    for (std::size_t k = 0; k < users_.size(); ++k) out[k] = users_[k].min_rate_bps;
    return out;
}

std::vector<double> Environment::reset(std::uint64_t seed) {
    rng_.seed(seed);
    return reset();
}

std::vector<double> Environment::reset() {
    step_count_ = 0;
    for (MirrorState& m : mirrors_) {
        m.yaw = 0.0;
        m.roll = 0.0;
    }

    users_.assign(config_.num_users, UserState{});
    if (!config_.fixed_user_positions.empty()) {
        if (config_.fixed_user_positions.size() != config_.num_users)
            throw ConfigError("env.fixed_user_positions: one entry per user required");
        for (std::size_t k = 0; k < users_.size(); ++k) {
            users_[k].position = config_.fixed_user_positions[k];
            users_[k].waypoint = config_.fixed_user_positions[k];
            users_[k].velocity_mps = 0.0;
            users_[k].pause_remaining_s = std::numeric_limits<double>::infinity();
            users_[k].min_rate_bps = config_.min_rate_bps;
        }
    } else {
        std::uniform_real_distribution<double> ux(0.0, scene_.room.width_x);
        std::uniform_real_distribution<double> uy(0.0, scene_.room.depth_y);
        std::uniform_real_distribution<double> uv(config_.mobility.v_min_mps,
                                                  config_.mobility.v_max_mps);
        for (UserState& u : users_) {
            u.position = config_.init == InitDistribution::Stationary
                             ? sample_rwp_stationary(scene_.room, rng_)
                             : Vec3{ux(rng_), uy(rng_), scene_.room.receiver_height};
            u.waypoint = {ux(rng_), uy(rng_), scene_.room.receiver_height};
            u.velocity_mps = uv(rng_);
            u.pause_remaining_s = 0.0;
            u.min_rate_bps = config_.min_rate_bps;
        }
    }

    if (config_.blockage_mode != BlockageMode::None && config_.regenerate_blockages_each_reset) {
        blockages_ = config_.blockage_mode == BlockageMode::FixedCount
                         ? place_blockages_fixed(scene_.room, config_.blockage,
                                                 config_.blockage_count, rng_)
                         : place_blockages_mhcp(scene_.room, config_.blockage, rng_);
        blockages_placed_ = true;
    }

    refresh_blockage_flags();
    evaluate();
    return observation();
}

void Environment::pin_users(const std::vector<Vec3>& positions) {
    if (positions.size() != config_.num_users)
        throw std::invalid_argument("pin_users: position count mismatch");
    users_.assign(config_.num_users, UserState{});
    for (std::size_t k = 0; k < positions.size(); ++k) {
        users_[k].position = positions[k];
        users_[k].waypoint = positions[k];
        users_[k].velocity_mps = 0.0;
        users_[k].pause_remaining_s = std::numeric_limits<double>::infinity();
        users_[k].min_rate_bps = config_.min_rate_bps;
    }
    refresh_blockage_flags();
    evaluate();
}

void Environment::set_blockages(std::vector<BlockageCylinder> blockages) {
    blockages_ = std::move(blockages);
    blockages_placed_ = true;
    if (!users_.empty()) {
        refresh_blockage_flags();
        evaluate();
    }
}

void Environment::apply_action(std::span<const double> action) {
    if (action.size() != action_size())
        throw std::invalid_argument("step: action length must be 2M");
    for (double a : action)
        if (!std::isfinite(a)) throw std::invalid_argument("step: non-finite action component");

    const std::uint64_t violations_before = angle_violations_;
    for (std::size_t m = 0; m < mirrors_.size(); ++m) {
        const double yaw_cmd = std::clamp(action[2 * m], -1.0, 1.0);
        const double roll_cmd = std::clamp(action[2 * m + 1], -1.0, 1.0);
        mirrors_[m].yaw = ObsCodec::decode_angle(yaw_cmd);
        mirrors_[m].roll = ObsCodec::decode_angle(roll_cmd);
        angle_checks_ += 2;
        if (std::abs(mirrors_[m].yaw) > kHalfPi) ++angle_violations_;
        if (std::abs(mirrors_[m].roll) > kHalfPi) ++angle_violations_;
    }
    g_angle_checks.fetch_add(2 * mirrors_.size(), std::memory_order_relaxed);
    if (angle_violations_ != violations_before)
        g_angle_violations.fetch_add(angle_violations_ - violations_before,
                                     std::memory_order_relaxed);
}

void Environment::refresh_blockage_flags() {
    const std::size_t K = users_.size();
    const std::size_t M = mirrors_.size();
    los_clear_.assign(K, 1);
    mirror_path_clear_.assign(config_.irs_path_blockage ? K * M : 0, 1);
    if (blockages_.empty()) return;

    for (std::size_t k = 0; k < K; ++k) {
        los_clear_[k] =
            is_los_blocked(scene_.room.ap_position, users_[k].position, blockages_) ? 0 : 1;
        if (!config_.irs_path_blockage) continue;
        for (std::size_t m = 0; m < M; ++m) {
            mirror_path_clear_[k * M + m] =
                is_segment_blocked(mirrors_[m].center, users_[k].position, blockages_) ? 0 : 1;
        }
    }
}

void Environment::evaluate() {
    std::vector<Vec3> positions(users_.size());
    for (std::size_t k = 0; k < users_.size(); ++k) positions[k] = users_[k].position;
    ChannelEvalInput in;
    in.scene = &scene_;
    in.mirrors = mirrors_;
    in.user_positions = positions;
    in.los_clear = los_clear_;
    in.mirror_path_clear = mirror_path_clear_;
    in.noise = config_.noise;
    evaluate_channels(in, reports_, config_.parallel_kernels);
}

std::vector<double> Environment::observation() const {
    std::vector<double> obs;
    obs.reserve(observation_size());
    for (const UserState& u : users_) {
        obs.push_back(ObsCodec::encode_position(u.position.x, scene_.room.width_x));
        obs.push_back(ObsCodec::encode_position(u.position.y, scene_.room.depth_y));
    }
    for (const ChannelReport& r : reports_) obs.push_back(ObsCodec::encode_gain(r.aggregate_gain, config_));
    for (const MirrorState& m : mirrors_) {
        obs.push_back(ObsCodec::encode_angle(m.yaw));
        obs.push_back(ObsCodec::encode_angle(m.roll));
    }
    for (const UserState& u : users_) obs.push_back(ObsCodec::encode_min_rate(u.min_rate_bps, config_));
    return obs;
}

StepOutcome Environment::step(std::span<const double> action) {
    apply_action(action);
    for (UserState& u : users_) rwp_step(u, config_.dt_s, scene_.room, config_.mobility, rng_);
    refresh_blockage_flags();
    evaluate();

    StepOutcome out;
    out.per_user_rates.resize(users_.size());
    for (std::size_t k = 0; k < users_.size(); ++k) out.per_user_rates[k] = reports_[k].rate_bps;
    const std::vector<double> targets = min_rates();
    out.reward = compute_reward(out.per_user_rates, targets, config_.reward_norm_bps,
                                config_.penalty_weight, config_.printed_penalty_variant);
    out.qos_violations = 0;
    for (std::size_t k = 0; k < users_.size(); ++k)
        if (out.per_user_rates[k] < targets[k]) ++out.qos_violations;

    ++step_count_;
    out.done = step_count_ >= config_.episode_steps ||
               (config_.terminate_when_qos_met && out.qos_violations == 0);
    out.observation = observation();
    return out;
}

std::vector<ChannelReport> Environment::reports_for_action(std::span<const double> action) const {
    if (action.size() != action_size())
        throw std::invalid_argument("reports_for_action: action length must be 2M");
    std::vector<MirrorState> trial = mirrors_;
    for (std::size_t m = 0; m < trial.size(); ++m) {
        trial[m].yaw = ObsCodec::decode_angle(std::clamp(action[2 * m], -1.0, 1.0));
        trial[m].roll = ObsCodec::decode_angle(std::clamp(action[2 * m + 1], -1.0, 1.0));
    }
    std::vector<Vec3> positions(users_.size());
    for (std::size_t k = 0; k < users_.size(); ++k) positions[k] = users_[k].position;
    ChannelEvalInput in;
    in.scene = &scene_;
    in.mirrors = trial;
    in.user_positions = positions;
    in.los_clear = los_clear_;
    in.mirror_path_clear = mirror_path_clear_;
    in.noise = config_.noise;
    std::vector<ChannelReport> reports;
    evaluate_channels(in, reports, false);
    return reports;
}

std::vector<double> Environment::rates_for_action(std::span<const double> action) const {
    const std::vector<ChannelReport> reports = reports_for_action(action);
    std::vector<double> rates(reports.size());
    for (std::size_t k = 0; k < reports.size(); ++k) rates[k] = reports[k].rate_bps;
    return rates;
}

} // namespace vlcirs
