// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "vlcirs/errors.hpp"
#include "vlcirs/geometry.hpp"

namespace vlcirs {

/// Room box with the optical access point on the ceiling and a fixed
/// receiver plane. All lengths in meters.
struct RoomConfig {
    double width_x = 5.0;
    double depth_y = 5.0;
    double height_z = 3.0;
    Vec3 ap_position{2.5, 2.5, 3.0};
    double receiver_height = 0.85;
};

struct LedConfig {
    double half_power_semiangle = 1.0471975511965976; // 60 deg
    double transmit_power_w = 2.0;
};

struct ReceiverConfig {
    double detector_area_m2 = 2.0e-5; // 20 mm^2
    double fov_semiangle = 1.2217304763960306; // 70 deg
    double responsivity = 0.4;
    double bandwidth_hz = 2.0e7;
    double refractive_index = 1.5;
    double filter_gain = 1.0;
};

/// Mirror array mounted on the y = 0 wall, centered on the wall.
/// Rows stack vertically (z), columns run along x, row-major indexing
/// starting at the bottom-left mirror.
struct MirrorArrayConfig {
    std::size_t rows = 7;
    std::size_t cols = 7;
    double mirror_height_m = 0.25;
    double mirror_width_m = 0.10;
    double gap_m = 0.02;
    double reflectivity = 0.95;
    /// Optional extra multiplicative gain on the reflected path
    /// (concentrator/filter effects); 1 = the bare reflection formula.
    double extra_gain = 1.0;

    std::size_t count() const { return rows * cols; }
    double element_area_m2() const { return mirror_height_m * mirror_width_m; }
};

/// Yaw/roll orientation of one mirror plus its fixed center. Both angles
/// stay within [-pi/2, pi/2] at all times.
struct MirrorState {
    double yaw = 0.0;  // varphi_m
    double roll = 0.0; // vartheta_m
    Vec3 center;
};

/// Lambertian emission order n = -ln2 / ln(cos(phi_half)).
/// Strictly increasing on (0, pi/2); throws std::domain_error outside.
double lambertian_order(double phi_half);

/// Immutable static geometry. Safe to share read-only across threads;
/// per-step mirror orientations live outside (see MirrorState vectors).
struct Scene {
    RoomConfig room;
    LedConfig led;
    ReceiverConfig receiver;
    MirrorArrayConfig mirrors;
    double lambertian_n = 1.0;
    std::vector<Vec3> mirror_centers; // row-major, rows*cols entries

    std::size_t mirror_count() const { return mirror_centers.size(); }

    /// Fresh all-zero orientation states aligned with mirror_centers.
    std::vector<MirrorState> initial_mirror_states() const;
};

struct SceneConfig {
    RoomConfig room;
    LedConfig led;
    ReceiverConfig receiver;
    MirrorArrayConfig mirrors;
};

/// Validates every invariant (naming the offending field on error) and
/// lays out mirror centers on the y = 0 wall. Deterministic: identical
/// config gives a bit-identical scene.
Scene build_scene(const SceneConfig& config);

} // namespace vlcirs
