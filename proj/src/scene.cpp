// SPDX-License-Identifier: Apache-2.0
#include "vlcirs/scene.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vlcirs {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ConfigError(field + ": " + why);
}

} // namespace

double lambertian_order(double phi_half) {
    if (!(phi_half > 0.0) || !(phi_half < std::numbers::pi / 2.0))
        throw std::domain_error("half_power_semiangle must lie in (0, pi/2)");
    return -std::log(2.0) / std::log(std::cos(phi_half));
}

std::vector<MirrorState> Scene::initial_mirror_states() const {
    std::vector<MirrorState> states(mirror_centers.size());
    for (std::size_t m = 0; m < mirror_centers.size(); ++m)
        states[m].center = mirror_centers[m];
    return states;
}

Scene build_scene(const SceneConfig& config) {
    const RoomConfig& room = config.room;
    require(room.width_x > 0.0, "room.width_x", "must be > 0");
    require(room.depth_y > 0.0, "room.depth_y", "must be > 0");
    require(room.height_z > 0.0, "room.height_z", "must be > 0");
    require(room.ap_position.x >= 0.0 && room.ap_position.x <= room.width_x &&
                room.ap_position.y >= 0.0 && room.ap_position.y <= room.depth_y &&
                room.ap_position.z >= 0.0 && room.ap_position.z <= room.height_z,
            "room.ap_position", "must lie inside the room box");
    require(room.receiver_height >= 0.0 && room.receiver_height < room.height_z,
            "room.receiver_height", "must lie in [0, height_z)");

    const LedConfig& led = config.led;
    require(led.transmit_power_w > 0.0, "led.transmit_power_w", "must be > 0");
    // lambertian_order validates the semi-angle range itself.
    double n;
    try {
        n = lambertian_order(led.half_power_semiangle);
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("led.half_power_semiangle: ") + e.what());
    }

    const ReceiverConfig& rx = config.receiver;
    require(rx.detector_area_m2 > 0.0, "receiver.detector_area_m2", "must be > 0");
    require(rx.fov_semiangle > 0.0 && rx.fov_semiangle <= std::numbers::pi / 2.0,
            "receiver.fov_semiangle", "must lie in (0, pi/2]");
    require(rx.responsivity > 0.0, "receiver.responsivity", "must be > 0");
    require(rx.bandwidth_hz > 0.0, "receiver.bandwidth_hz", "must be > 0");

    const MirrorArrayConfig& arr = config.mirrors;
    require(arr.rows > 0, "mirrors.rows", "must be >= 1");
    require(arr.cols > 0, "mirrors.cols", "must be >= 1");
    require(arr.mirror_height_m > 0.0, "mirrors.mirror_height_m", "must be > 0");
    require(arr.mirror_width_m > 0.0, "mirrors.mirror_width_m", "must be > 0");
    require(arr.gap_m >= 0.0, "mirrors.gap_m", "must be >= 0");
    require(arr.reflectivity >= 0.0 && arr.reflectivity <= 1.0,
            "mirrors.reflectivity", "must lie in [0, 1]");
    require(arr.extra_gain >= 0.0, "mirrors.extra_gain", "must be >= 0");

    // Array bounding box, centered on the y = 0 wall.
    const double total_w =
        static_cast<double>(arr.cols) * arr.mirror_width_m + static_cast<double>(arr.cols - 1) * arr.gap_m;
    const double total_h =
        static_cast<double>(arr.rows) * arr.mirror_height_m + static_cast<double>(arr.rows - 1) * arr.gap_m;
    require(total_w <= room.width_x, "mirrors.cols",
            "array width " + std::to_string(total_w) + " m exceeds the wall extent");
    require(total_h <= room.height_z, "mirrors.rows",
            "array height " + std::to_string(total_h) + " m exceeds the wall extent");

    Scene scene;
    scene.room = room;
    scene.led = led;
    scene.receiver = rx;
    scene.mirrors = arr;
    scene.lambertian_n = n;

    const double x0 = (room.width_x - total_w) / 2.0 + arr.mirror_width_m / 2.0;
    const double z0 = (room.height_z - total_h) / 2.0 + arr.mirror_height_m / 2.0;
    scene.mirror_centers.reserve(arr.count());
    for (std::size_t i = 0; i < arr.rows; ++i) {
        for (std::size_t j = 0; j < arr.cols; ++j) {
            scene.mirror_centers.push_back(
                {x0 + static_cast<double>(j) * (arr.mirror_width_m + arr.gap_m),
                 0.0,
                 z0 + static_cast<double>(i) * (arr.mirror_height_m + arr.gap_m)});
        }
    }
    return scene;
}

} // namespace vlcirs
