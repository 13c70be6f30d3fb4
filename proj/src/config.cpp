// SPDX-License-Identifier: Apache-2.0
#include "vlcirs/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "vlcirs/errors.hpp"

namespace vlcirs {

namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(section + ": expected an object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError(section + "." + item.key() + ": unknown key");
    }
}

template <typename T>
void get_if_present(const json& obj, const char* key, T& target) {
    if (const auto it = obj.find(key); it != obj.end()) target = it->get<T>();
}

void get_angle_deg(const json& obj, const char* key, double& target_rad) {
    if (const auto it = obj.find(key); it != obj.end()) target_rad = it->get<double>() * kDegToRad;
}

} // namespace

SimConfig default_sim_config() {
    SimConfig config;
    // struct defaults already carry the paper values; nothing to adjust
    return config;
}

SimConfig parse_sim_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    check_keys(root, "config",
               {"room", "led", "receiver", "mirrors", "noise", "users", "blockages", "episode",
                "reward", "observation", "runtime", "ddpg", "dql"});

    SimConfig config = default_sim_config();

    if (root.contains("room")) {
        const json& room = root["room"];
        check_keys(room, "room",
                   {"width_x_m", "depth_y_m", "height_z_m", "ap_x_m", "ap_y_m", "ap_z_m",
                    "receiver_height_m"});
        RoomConfig& r = config.scene.room;
        get_if_present(room, "width_x_m", r.width_x);
        get_if_present(room, "depth_y_m", r.depth_y);
        get_if_present(room, "height_z_m", r.height_z);
        // AP defaults to the centre of the (possibly resized) ceiling.
        r.ap_position = {r.width_x / 2.0, r.depth_y / 2.0, r.height_z};
        get_if_present(room, "ap_x_m", r.ap_position.x);
        get_if_present(room, "ap_y_m", r.ap_position.y);
        get_if_present(room, "ap_z_m", r.ap_position.z);
        get_if_present(room, "receiver_height_m", r.receiver_height);
    }

    if (root.contains("led")) {
        const json& led = root["led"];
        check_keys(led, "led", {"half_power_semiangle_deg", "transmit_power_w"});
        get_angle_deg(led, "half_power_semiangle_deg", config.scene.led.half_power_semiangle);
        get_if_present(led, "transmit_power_w", config.scene.led.transmit_power_w);
    }

    if (root.contains("receiver")) {
        const json& rx = root["receiver"];
        check_keys(rx, "receiver",
                   {"detector_area_m2", "fov_semiangle_deg", "responsivity_a_per_w", "bandwidth_hz",
                    "refractive_index", "filter_gain"});
        get_if_present(rx, "detector_area_m2", config.scene.receiver.detector_area_m2);
        get_angle_deg(rx, "fov_semiangle_deg", config.scene.receiver.fov_semiangle);
        get_if_present(rx, "responsivity_a_per_w", config.scene.receiver.responsivity);
        get_if_present(rx, "bandwidth_hz", config.scene.receiver.bandwidth_hz);
        get_if_present(rx, "refractive_index", config.scene.receiver.refractive_index);
        get_if_present(rx, "filter_gain", config.scene.receiver.filter_gain);
    }

    if (root.contains("mirrors")) {
        const json& mirrors = root["mirrors"];
        check_keys(mirrors, "mirrors",
                   {"rows", "cols", "mirror_height_m", "mirror_width_m", "gap_m", "reflectivity",
                    "extra_gain"});
        MirrorArrayConfig& m = config.scene.mirrors;
        get_if_present(mirrors, "rows", m.rows);
        get_if_present(mirrors, "cols", m.cols);
        get_if_present(mirrors, "mirror_height_m", m.mirror_height_m);
        get_if_present(mirrors, "mirror_width_m", m.mirror_width_m);
        get_if_present(mirrors, "gap_m", m.gap_m);
        get_if_present(mirrors, "reflectivity", m.reflectivity);
        get_if_present(mirrors, "extra_gain", m.extra_gain);
    }

    if (root.contains("noise")) {
        const json& noise = root["noise"];
        check_keys(noise, "noise", {"total_variance_a2", "residual_interference_a2"});
        get_if_present(noise, "total_variance_a2", config.env.noise.total_variance_a2);
        get_if_present(noise, "residual_interference_a2", config.env.noise.residual_interference_a2);
    }

    if (root.contains("users")) {
        const json& users = root["users"];
        check_keys(users, "users",
                   {"count", "min_rate_bps", "v_min_mps", "v_max_mps", "pause_s", "init"});
        get_if_present(users, "count", config.env.num_users);
        get_if_present(users, "min_rate_bps", config.env.min_rate_bps);
        get_if_present(users, "v_min_mps", config.env.mobility.v_min_mps);
        get_if_present(users, "v_max_mps", config.env.mobility.v_max_mps);
        get_if_present(users, "pause_s", config.env.mobility.pause_s);
        if (users.contains("init")) {
            const std::string init = users["init"];
            if (init == "stationary")
                config.env.init = InitDistribution::Stationary;
            else if (init == "uniform")
                config.env.init = InitDistribution::Uniform;
            else
                throw ConfigError("users.init: expected 'stationary' or 'uniform'");
        }
    }

    if (root.contains("blockages")) {
        const json& blockages = root["blockages"];
        check_keys(blockages, "blockages",
                   {"mode", "count", "intensity_per_m2", "hard_core_radius_m", "diameter_m",
                    "height_m", "regenerate_each_reset", "irs_path_blockage"});
        if (blockages.contains("mode")) {
            const std::string mode = blockages["mode"];
            if (mode == "none")
                config.env.blockage_mode = BlockageMode::None;
            else if (mode == "fixed_count")
                config.env.blockage_mode = BlockageMode::FixedCount;
            else if (mode == "mhcp")
                config.env.blockage_mode = BlockageMode::Mhcp;
            else
                throw ConfigError("blockages.mode: expected 'none', 'fixed_count' or 'mhcp'");
        }
        get_if_present(blockages, "count", config.env.blockage_count);
        get_if_present(blockages, "intensity_per_m2", config.env.blockage.intensity_per_m2);
        get_if_present(blockages, "hard_core_radius_m", config.env.blockage.hard_core_radius_m);
        get_if_present(blockages, "diameter_m", config.env.blockage.diameter_m);
        get_if_present(blockages, "height_m", config.env.blockage.height_m);
        get_if_present(blockages, "regenerate_each_reset", config.env.regenerate_blockages_each_reset);
        get_if_present(blockages, "irs_path_blockage", config.env.irs_path_blockage);
    }

    if (root.contains("episode")) {
        const json& episode = root["episode"];
        check_keys(episode, "episode", {"steps", "dt_s", "terminate_when_qos_met"});
        get_if_present(episode, "steps", config.env.episode_steps);
        get_if_present(episode, "dt_s", config.env.dt_s);
        get_if_present(episode, "terminate_when_qos_met", config.env.terminate_when_qos_met);
    }

    if (root.contains("reward")) {
        const json& reward = root["reward"];
        check_keys(reward, "reward", {"norm_bps", "penalty_weight", "printed_penalty_variant"});
        get_if_present(reward, "norm_bps", config.env.reward_norm_bps);
        get_if_present(reward, "penalty_weight", config.env.penalty_weight);
        get_if_present(reward, "printed_penalty_variant", config.env.printed_penalty_variant);
    }

    if (root.contains("observation")) {
        const json& obs = root["observation"];
        check_keys(obs, "observation", {"gain_log_floor", "gain_log_cap", "min_rate_cap_bps"});
        get_if_present(obs, "gain_log_floor", config.env.gain_log_floor);
        get_if_present(obs, "gain_log_cap", config.env.gain_log_cap);
        get_if_present(obs, "min_rate_cap_bps", config.env.min_rate_obs_cap_bps);
    }

    if (root.contains("runtime")) {
        const json& runtime = root["runtime"];
        check_keys(runtime, "runtime", {"parallel_kernels"});
        get_if_present(runtime, "parallel_kernels", config.env.parallel_kernels);
    }

    if (root.contains("ddpg")) {
        const json& ddpg = root["ddpg"];
        check_keys(ddpg, "ddpg",
                   {"actor_lr", "critic_lr", "discount", "tau", "buffer_capacity", "batch_size",
                    "noise_initial", "noise_decay", "noise_floor", "actor_hidden1", "actor_hidden2",
                    "critic_hidden1", "critic_hidden2", "parallel_updates"});
        DdpgConfig& d = config.ddpg;
        get_if_present(ddpg, "actor_lr", d.actor_lr);
        get_if_present(ddpg, "critic_lr", d.critic_lr);
        get_if_present(ddpg, "discount", d.discount);
        get_if_present(ddpg, "tau", d.tau);
        get_if_present(ddpg, "buffer_capacity", d.buffer_capacity);
        get_if_present(ddpg, "batch_size", d.batch_size);
        get_if_present(ddpg, "noise_initial", d.noise_initial);
        get_if_present(ddpg, "noise_decay", d.noise_decay);
        get_if_present(ddpg, "noise_floor", d.noise_floor);
        get_if_present(ddpg, "actor_hidden1", d.actor_hidden1);
        get_if_present(ddpg, "actor_hidden2", d.actor_hidden2);
        get_if_present(ddpg, "critic_hidden1", d.critic_hidden1);
        get_if_present(ddpg, "critic_hidden2", d.critic_hidden2);
        get_if_present(ddpg, "parallel_updates", d.parallel_updates);
    }

    if (root.contains("dql")) {
        const json& dql = root["dql"];
        check_keys(dql, "dql",
                   {"lr", "discount", "tau", "buffer_capacity", "batch_size", "epsilon_initial",
                    "epsilon_decay", "epsilon_floor", "levels", "hidden1", "hidden2",
                    "parallel_updates"});
        DqlConfig& d = config.dql;
        get_if_present(dql, "lr", d.lr);
        get_if_present(dql, "discount", d.discount);
        get_if_present(dql, "tau", d.tau);
        get_if_present(dql, "buffer_capacity", d.buffer_capacity);
        get_if_present(dql, "batch_size", d.batch_size);
        get_if_present(dql, "epsilon_initial", d.epsilon_initial);
        get_if_present(dql, "epsilon_decay", d.epsilon_decay);
        get_if_present(dql, "epsilon_floor", d.epsilon_floor);
        get_if_present(dql, "levels", d.levels);
        get_if_present(dql, "hidden1", d.hidden1);
        get_if_present(dql, "hidden2", d.hidden2);
        get_if_present(dql, "parallel_updates", d.parallel_updates);
    }

    return config;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_sim_config(buffer.str());
}

std::string dump_sim_config(const SimConfig& config) {
    const SceneConfig& s = config.scene;
    const EnvConfig& e = config.env;
    json root;
    root["room"] = {{"width_x_m", s.room.width_x},
                    {"depth_y_m", s.room.depth_y},
                    {"height_z_m", s.room.height_z},
                    {"ap_x_m", s.room.ap_position.x},
                    {"ap_y_m", s.room.ap_position.y},
                    {"ap_z_m", s.room.ap_position.z},
                    {"receiver_height_m", s.room.receiver_height}};
    root["led"] = {{"half_power_semiangle_deg", s.led.half_power_semiangle / kDegToRad},
                   {"transmit_power_w", s.led.transmit_power_w}};
    root["receiver"] = {{"detector_area_m2", s.receiver.detector_area_m2},
                        {"fov_semiangle_deg", s.receiver.fov_semiangle / kDegToRad},
                        {"responsivity_a_per_w", s.receiver.responsivity},
                        {"bandwidth_hz", s.receiver.bandwidth_hz},
                        {"refractive_index", s.receiver.refractive_index},
                        {"filter_gain", s.receiver.filter_gain}};
    root["mirrors"] = {{"rows", s.mirrors.rows},
                       {"cols", s.mirrors.cols},
                       {"mirror_height_m", s.mirrors.mirror_height_m},
                       {"mirror_width_m", s.mirrors.mirror_width_m},
                       {"gap_m", s.mirrors.gap_m},
                       {"reflectivity", s.mirrors.reflectivity},
                       {"extra_gain", s.mirrors.extra_gain}};
    root["noise"] = {{"total_variance_a2", e.noise.total_variance_a2},
                     {"residual_interference_a2", e.noise.residual_interference_a2}};
    root["users"] = {{"count", e.num_users},
                     {"min_rate_bps", e.min_rate_bps},
                     {"v_min_mps", e.mobility.v_min_mps},
                     {"v_max_mps", e.mobility.v_max_mps},
                     {"pause_s", e.mobility.pause_s},
                     {"init", e.init == InitDistribution::Stationary ? "stationary" : "uniform"}};
    const char* mode = e.blockage_mode == BlockageMode::None
                           ? "none"
                           : (e.blockage_mode == BlockageMode::FixedCount ? "fixed_count" : "mhcp");
    root["blockages"] = {{"mode", mode},
                         {"count", e.blockage_count},
                         {"intensity_per_m2", e.blockage.intensity_per_m2},
                         {"hard_core_radius_m", e.blockage.hard_core_radius_m},
                         {"diameter_m", e.blockage.diameter_m},
                         {"height_m", e.blockage.height_m},
                         {"regenerate_each_reset", e.regenerate_blockages_each_reset},
                         {"irs_path_blockage", e.irs_path_blockage}};
    root["episode"] = {{"steps", e.episode_steps},
                       {"dt_s", e.dt_s},
                       {"terminate_when_qos_met", e.terminate_when_qos_met}};
    root["reward"] = {{"norm_bps", e.reward_norm_bps},
                      {"penalty_weight", e.penalty_weight},
                      {"printed_penalty_variant", e.printed_penalty_variant}};
    root["observation"] = {{"gain_log_floor", e.gain_log_floor},
                           {"gain_log_cap", e.gain_log_cap},
                           {"min_rate_cap_bps", e.min_rate_obs_cap_bps}};
    root["runtime"] = {{"parallel_kernels", e.parallel_kernels}};
    root["ddpg"] = {{"actor_lr", config.ddpg.actor_lr},
                    {"critic_lr", config.ddpg.critic_lr},
                    {"discount", config.ddpg.discount},
                    {"tau", config.ddpg.tau},
                    {"buffer_capacity", config.ddpg.buffer_capacity},
                    {"batch_size", config.ddpg.batch_size},
                    {"noise_initial", config.ddpg.noise_initial},
                    {"noise_decay", config.ddpg.noise_decay},
                    {"noise_floor", config.ddpg.noise_floor},
                    {"actor_hidden1", config.ddpg.actor_hidden1},
                    {"actor_hidden2", config.ddpg.actor_hidden2},
                    {"critic_hidden1", config.ddpg.critic_hidden1},
                    {"critic_hidden2", config.ddpg.critic_hidden2},
                    {"parallel_updates", config.ddpg.parallel_updates}};
    root["dql"] = {{"lr", config.dql.lr},
                   {"discount", config.dql.discount},
                   {"tau", config.dql.tau},
                   {"buffer_capacity", config.dql.buffer_capacity},
                   {"batch_size", config.dql.batch_size},
                   {"epsilon_initial", config.dql.epsilon_initial},
                   {"epsilon_decay", config.dql.epsilon_decay},
                   {"epsilon_floor", config.dql.epsilon_floor},
                   {"levels", config.dql.levels},
                   {"hidden1", config.dql.hidden1},
                   {"hidden2", config.dql.hidden2},
                   {"parallel_updates", config.dql.parallel_updates}};
    return root.dump(2) + "\n";
}

} // namespace vlcirs
