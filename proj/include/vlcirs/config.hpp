// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "vlcirs/agents.hpp"
#include "vlcirs/env.hpp"
#include "vlcirs/scene.hpp"

namespace vlcirs {

/// Everything one simulation needs: static scene, environment dynamics
/// and both learners' hyperparameters.
struct SimConfig {
    SceneConfig scene;
    EnvConfig env;
    DdpgConfig ddpg;
    DqlConfig dql;
};

/// Paper-style defaults: 5m x 5m x 3m room, ceiling-centre AP, 60 deg
/// half-power semi-angle, 20 mm^2 detector, 7x7 array of 25x10 cm
/// mirrors, five users at 1 Mbps minimum rate.
SimConfig default_sim_config();

/// Reads a JSON config file. Absent keys keep their defaults; unknown
/// keys are rejected with the offending section and name.
SimConfig load_sim_config(const std::filesystem::path& path);
SimConfig parse_sim_config(const std::string& json_text);

/// The default config serialized back out (documents every key).
std::string dump_sim_config(const SimConfig& config);

} // namespace vlcirs
