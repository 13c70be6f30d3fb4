// SPDX-License-Identifier: Apache-2.0
#include "vlcirs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vlcirs/errors.hpp"

namespace vlcirs {

void rwp_step(UserState& user, double dt_s, const RoomConfig& room, const MobilityConfig& mobility,
              Rng& rng) {
    if (!(dt_s > 0.0)) throw std::domain_error("rwp_step: dt must be > 0");

    if (user.pause_remaining_s > 0.0) {
        user.pause_remaining_s = std::max(0.0, user.pause_remaining_s - dt_s);
        return;
    }

    const Vec3 leg = user.waypoint - user.position;
    const double dist = norm(leg);
    const double travel = user.velocity_mps * dt_s;
    if (dist <= travel || dist == 0.0) {
        // Arrived: clamp to the waypoint, start the pause, and line up
        // the next leg. Movement resumes on the next step.
        user.position = user.waypoint;
        user.pause_remaining_s = mobility.pause_s;
        std::uniform_real_distribution<double> ux(0.0, room.width_x);
        std::uniform_real_distribution<double> uy(0.0, room.depth_y);
        std::uniform_real_distribution<double> uv(mobility.v_min_mps, mobility.v_max_mps);
        user.waypoint = {ux(rng), uy(rng), room.receiver_height};
        user.velocity_mps = uv(rng);
        return;
    }
    const double scale = travel / dist;
    user.position = user.position + leg * scale;
}

double rwp_stationary_pdf(double x, double y, double a) {
    const double half = a / 2.0;
    if (std::abs(x) > half || std::abs(y) > half)
        throw std::domain_error("rwp_stationary_pdf: point outside the square");
    const double a6 = a * a * a * a * a * a;
    return 36.0 / a6 * (x * x - half * half) * (y * y - half * half);
}

namespace {

// Per-axis factor of the separable stationary density on [-a/2, a/2],
// peak value 3 / (2a) at the center.
double sample_axis(double a, Rng& rng) {
    std::uniform_real_distribution<double> ut(-a / 2.0, a / 2.0);
    std::uniform_real_distribution<double> uu(0.0, 1.5 / a);
    for (;;) {
        const double t = ut(rng);
        const double g = 6.0 / (a * a * a) * (a * a / 4.0 - t * t);
        if (uu(rng) <= g) return t;
    }
}

} // namespace

Vec3 sample_rwp_stationary(const RoomConfig& room, Rng& rng) {
    const double x = sample_axis(room.width_x, rng) + room.width_x / 2.0;
    const double y = sample_axis(room.depth_y, rng) + room.depth_y / 2.0;
    return {x, y, room.receiver_height};
}

std::vector<std::size_t> matern_thin(const std::vector<MarkedPoint>& points,
                                     double hard_core_radius_m) {
    std::vector<std::size_t> kept;
    const double r2 = hard_core_radius_m * hard_core_radius_m;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool survives = true;
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            const double dx = points[i].x - points[j].x;
            const double dy = points[i].y - points[j].y;
            if (dx * dx + dy * dy < r2 && points[j].mark < points[i].mark) {
                survives = false;
                break;
            }
        }
        if (survives) kept.push_back(i);
    }
    return kept;
}

std::vector<BlockageCylinder> place_blockages_mhcp(const RoomConfig& room, const BlockageConfig& cfg,
                                                   Rng& rng) {
    if (cfg.intensity_per_m2 < 0.0)
        throw std::domain_error("place_blockages_mhcp: intensity must be >= 0");
    std::vector<BlockageCylinder> result;
    if (cfg.intensity_per_m2 == 0.0) return result;

    // Parent count is Poisson in the room area, so the expected number
    // of blockages scales with floor space.
    const double area = room.width_x * room.depth_y;
    std::poisson_distribution<int> count_dist(cfg.intensity_per_m2 * area);
    const int parents = count_dist(rng);
    std::uniform_real_distribution<double> ux(0.0, room.width_x);
    std::uniform_real_distribution<double> uy(0.0, room.depth_y);
    std::uniform_real_distribution<double> umark(0.0, 1.0);

    std::vector<MarkedPoint> pts(static_cast<std::size_t>(parents));
    for (auto& p : pts) p = {ux(rng), uy(rng), umark(rng)};

    for (const std::size_t i : matern_thin(pts, cfg.hard_core_radius_m))
        result.push_back({pts[i].x, pts[i].y, cfg.diameter_m, cfg.height_m});
    return result;
}

std::vector<BlockageCylinder> place_blockages_fixed(const RoomConfig& room, const BlockageConfig& cfg,
                                                    std::size_t count, Rng& rng) {
    std::vector<BlockageCylinder> result;
    std::uniform_real_distribution<double> ux(0.0, room.width_x);
    std::uniform_real_distribution<double> uy(0.0, room.depth_y);
    const double r2 = cfg.hard_core_radius_m * cfg.hard_core_radius_m;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 10000 * (count + 1);
    while (result.size() < count) {
        if (++attempts > max_attempts)
            throw ConfigError("blockages.count: cannot place " + std::to_string(count) +
                              " blockages with the configured hard-core radius");
        const double x = ux(rng);
        const double y = uy(rng);
        const bool clear = std::none_of(result.begin(), result.end(), [&](const BlockageCylinder& b) {
            const double dx = b.center_x - x;
            const double dy = b.center_y - y;
            return dx * dx + dy * dy < r2;
        });
        if (clear) result.push_back({x, y, cfg.diameter_m, cfg.height_m});
    }
    return result;
}

double shadow_length(double h_b, double d_l, double h_l) {
    if (!(h_b > 0.0) || !(h_b < h_l)) throw std::domain_error("shadow_length: require 0 < h_B < h_l");
    if (!(d_l > 0.0)) throw std::domain_error("shadow_length: require d_L > 0");
    return h_b * d_l / h_l;
}

bool is_los_blocked(const Vec3& ap, const Vec3& user_pos,
                    const std::vector<BlockageCylinder>& blockages) {
    for (const BlockageCylinder& b : blockages) {
        const double radius = b.diameter_m / 2.0;
        const double dx_user = user_pos.x - b.center_x;
        const double dy_user = user_pos.y - b.center_y;
        if (norm2(dx_user, dy_user) <= radius && user_pos.z <= b.height_m) return true;

        // Shadow band on the receiver plane: heights above that plane.
        const double h_ap = ap.z - user_pos.z;
        const double h_blk = b.height_m - user_pos.z;
        if (h_blk <= 0.0) continue;

        const double bx = b.center_x - ap.x;
        const double by = b.center_y - ap.y;
        const double d_center = norm2(bx, by);
        if (d_center == 0.0) continue; // directly under the AP: footprint test covers it
        const double ux = bx / d_center;
        const double uy = by / d_center;

        const double wx = user_pos.x - ap.x;
        const double wy = user_pos.y - ap.y;
        const double along = wx * ux + wy * uy;
        const double lateral = std::abs(wx * uy - wy * ux);
        if (lateral > radius) continue;

        const double far_edge = d_center + radius;
        if (along < far_edge) continue;
        // A blockage reaching the AP plane shadows everything behind it.
        if (h_blk >= h_ap) return true;
        // User at ground distance `along` is shadowed when the gap past
        // the blockage is within the shadow length at that distance.
        if (along - far_edge <= shadow_length(h_blk, along, h_ap)) return true;
    }
    return false;
}

bool is_segment_blocked(const Vec3& p0, const Vec3& p1,
                        const std::vector<BlockageCylinder>& blockages) {
    const Vec3 d = p1 - p0;
    if (d == Vec3{}) throw std::domain_error("is_segment_blocked: degenerate segment");

    for (const BlockageCylinder& b : blockages) {
        const double r = b.diameter_m / 2.0;

        // Clip the parameter range to the slab 0 <= z <= height first.
        double t_lo = 0.0, t_hi = 1.0;
        if (d.z != 0.0) {
            double ta = (0.0 - p0.z) / d.z;
            double tb = (b.height_m - p0.z) / d.z;
            if (ta > tb) std::swap(ta, tb);
            t_lo = std::max(t_lo, ta);
            t_hi = std::min(t_hi, tb);
        } else if (p0.z < 0.0 || p0.z > b.height_m) {
            continue;
        }
        if (t_lo > t_hi) continue;

        // 2D segment-circle intersection over the remaining range.
        const double fx = p0.x - b.center_x;
        const double fy = p0.y - b.center_y;
        const double a = d.x * d.x + d.y * d.y;
        const double bq = 2.0 * (fx * d.x + fy * d.y);
        const double c = fx * fx + fy * fy - r * r;
        if (a == 0.0) {
            if (c <= 0.0) return true; // vertical segment through the disk
            continue;
        }
        const double disc = bq * bq - 4.0 * a * c;
        if (disc < 0.0) continue;
        const double sq = std::sqrt(disc);
        const double root_lo = (-bq - sq) / (2.0 * a);
        const double root_hi = (-bq + sq) / (2.0 * a);
        if (std::max(root_lo, t_lo) <= std::min(root_hi, t_hi)) return true;
    }
    return false;
}

} // namespace vlcirs
