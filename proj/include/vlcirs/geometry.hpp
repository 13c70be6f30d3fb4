// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace vlcirs {

/// 3D point/direction in meters. Plain value type, used everywhere.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr bool operator==(const Vec3& o) const = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// 2D helpers for floor-plane work (blockage shadows, mobility).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double norm2(double x, double y) { return std::sqrt(x * x + y * y); }

} // namespace vlcirs
