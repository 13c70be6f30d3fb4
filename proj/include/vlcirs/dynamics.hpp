// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <vector>

#include "vlcirs/geometry.hpp"
#include "vlcirs/scene.hpp"

namespace vlcirs {

using Rng = std::mt19937_64;

/// Mobile receiver. z stays fixed at the room's receiver height; the
/// waypoint and velocity are redrawn on arrival (random waypoint model).
struct UserState {
    Vec3 position;
    double velocity_mps = 0.0;
    Vec3 waypoint;
    double pause_remaining_s = 0.0;
    double min_rate_bps = 1.0e6;
};

struct MobilityConfig {
    double v_min_mps = 0.0;
    double v_max_mps = 2.0;
    double pause_s = 0.0;
};

/// Static cylindrical obstacle standing on the floor.
struct BlockageCylinder {
    double center_x = 0.0;
    double center_y = 0.0;
    double diameter_m = 0.4;
    double height_m = 1.8;
};

struct BlockageConfig {
    double intensity_per_m2 = 0.0; // Poisson parent intensity for MHCP placement
    double hard_core_radius_m = 0.6;
    double diameter_m = 0.4;
    double height_m = 1.8;
};

/// Advances one user by dt along its current leg. Arrival overshoot is
/// clamped to the waypoint; the pause (possibly zero) is consumed on
/// subsequent steps before a new uniform waypoint and velocity are drawn.
void rwp_step(UserState& user, double dt_s, const RoomConfig& room, const MobilityConfig& mobility,
              Rng& rng);

/// Stationary position density of the random waypoint model on a
/// centered a x a square (zero pause). Throws outside the square.
double rwp_stationary_pdf(double x, double y, double a);

/// Draws a position from the stationary density, in room coordinates
/// (separable rejection sampling per axis, so non-square rooms use the
/// per-axis side length).
Vec3 sample_rwp_stationary(const RoomConfig& room, Rng& rng);

struct MarkedPoint {
    double x = 0.0;
    double y = 0.0;
    double mark = 0.0;
};

/// Matern type-II thinning rule: a point survives iff no other point
/// within the hard-core radius carries a strictly smaller mark. Returns
/// surviving indices; the outcome is independent of input order.
std::vector<std::size_t> matern_thin(const std::vector<MarkedPoint>& points,
                                     double hard_core_radius_m);

/// Matern type-II hard-core placement: Poisson(intensity * area) parent
/// points with uniform marks, thinned by matern_thin.
std::vector<BlockageCylinder> place_blockages_mhcp(const RoomConfig& room, const BlockageConfig& cfg,
                                                   Rng& rng);

/// Places exactly `count` blockages by sequential rejection against the
/// hard-core radius. Throws if the room cannot fit them.
std::vector<BlockageCylinder> place_blockages_fixed(const RoomConfig& room, const BlockageConfig& cfg,
                                                    std::size_t count, Rng& rng);

/// Shadow length d_L - d_B = h_B * d_L / h_l cast past a blockage of
/// height h_B by a source at height h_l, with the lit point at ground
/// distance d_L. Heights are relative to the shadowed plane.
double shadow_length(double h_b, double d_l, double h_l);

/// Rectangular-shadow approximation of direct-path blockage: the user is
/// blocked when standing inside a cylinder footprint or inside the
/// axis-aligned shadow band cast away from the AP (width = diameter,
/// reach given by shadow_length at the user's distance). Heights are
/// measured above the user's receiver plane.
bool is_los_blocked(const Vec3& ap, const Vec3& user_pos,
                    const std::vector<BlockageCylinder>& blockages);

/// Exact 3D segment-versus-cylinder occlusion test.
bool is_segment_blocked(const Vec3& p0, const Vec3& p1,
                        const std::vector<BlockageCylinder>& blockages);

} // namespace vlcirs
