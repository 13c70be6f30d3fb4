// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vlcirs/scene.hpp"

using namespace vlcirs;

TEST_CASE("default scene puts the AP at the ceiling centre") {
    const Scene scene = build_scene(SceneConfig{});
    CHECK(scene.room.ap_position == Vec3{2.5, 2.5, 3.0});
    CHECK(scene.mirror_count() == 49);
    for (const MirrorState& m : scene.initial_mirror_states()) {
        CHECK(m.yaw == 0.0);
        CHECK(m.roll == 0.0);
        CHECK(m.center.y == 0.0);
    }
}

TEST_CASE("lambertian order hits the anchor values") {
    CHECK(lambertian_order(std::numbers::pi / 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lambertian_order(std::numbers::pi / 6.0) ==
          doctest::Approx(4.81884167930642).epsilon(1e-12));
    // near-grazing semi-angle stays finite and positive
    const double n = lambertian_order(89.9 * std::numbers::pi / 180.0);
    CHECK(std::isfinite(n));
    CHECK(n > 0.0);
    CHECK(n == doctest::Approx(0.10914307002228488).epsilon(1e-12));
}

TEST_CASE("lambertian order rejects out-of-range semi-angles") {
    CHECK_THROWS_AS(lambertian_order(0.0), std::domain_error);
    CHECK_THROWS_AS(lambertian_order(std::numbers::pi / 2.0), std::domain_error);
    CHECK_THROWS_AS(lambertian_order(-0.1), std::domain_error);
}

// The closed form is monotone decreasing: a wider half-power beam needs a
// smaller emission order (60 deg gives n = 1, 30 deg gives n = 4.82).
TEST_CASE("lambertian order decreases in the half-power semi-angle") {
    double prev = lambertian_order(0.02);
    for (double phi = 0.07; phi < std::numbers::pi / 2.0 - 0.02; phi += 0.05) {
        const double n = lambertian_order(phi);
        CHECK(n < prev);
        prev = n;
    }
}

TEST_CASE("degenerate mirror arrays are rejected by field name") {
    SceneConfig config;
    config.mirrors.rows = 0;
    CHECK_THROWS_WITH_AS(build_scene(config), doctest::Contains("mirrors.rows"), ConfigError);
}

TEST_CASE("arrays wider than the wall are rejected") {
    SceneConfig config;
    config.mirrors.cols = 60; // 60 * 0.10 m + gaps > 5 m
    CHECK_THROWS_WITH_AS(build_scene(config), doctest::Contains("mirrors.cols"), ConfigError);
    config = SceneConfig{};
    config.mirrors.rows = 13; // 13 * 0.25 m + gaps > 3 m
    CHECK_THROWS_WITH_AS(build_scene(config), doctest::Contains("mirrors.rows"), ConfigError);
}

TEST_CASE("AP outside the room box is rejected") {
    SceneConfig config;
    config.room.ap_position = {6.0, 2.5, 3.0};
    CHECK_THROWS_WITH_AS(build_scene(config), doctest::Contains("room.ap_position"), ConfigError);
}

TEST_CASE("paper array sizes fit the default walls") {
    SceneConfig config;
    config.mirrors.rows = 10;
    config.mirrors.cols = 10;
    const Scene scene = build_scene(config);
    CHECK(scene.mirror_count() == 100);
}

TEST_CASE("mirror centers are laid out row-major with the configured pitch") {
    SceneConfig config;
    config.mirrors.rows = 3;
    config.mirrors.cols = 4;
    const Scene scene = build_scene(config);
    const auto& centers = scene.mirror_centers;
    REQUIRE(centers.size() == 12);
    const double pitch_x = config.mirrors.mirror_width_m + config.mirrors.gap_m;
    const double pitch_z = config.mirrors.mirror_height_m + config.mirrors.gap_m;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const Vec3& c = centers[i * 4 + j];
            CHECK(c.x == doctest::Approx(centers[0].x + static_cast<double>(j) * pitch_x));
            CHECK(c.z == doctest::Approx(centers[0].z + static_cast<double>(i) * pitch_z));
        }
    }
    // pairwise separation along a grid axis is at least min(h, w) + gap
    const double min_sep =
        std::min(config.mirrors.mirror_height_m, config.mirrors.mirror_width_m) +
        config.mirrors.gap_m;
    for (std::size_t a = 0; a < centers.size(); ++a)
        for (std::size_t b = a + 1; b < centers.size(); ++b)
            CHECK(distance(centers[a], centers[b]) >= min_sep - 1e-12);
    // array centered on the wall
    CHECK(centers.front().x + centers.back().x == doctest::Approx(config.room.width_x));
    CHECK(centers.front().z + centers.back().z == doctest::Approx(config.room.height_z));
}

TEST_CASE("scene construction is deterministic") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    for (int i = 0; i < 20; ++i) {
        SceneConfig config;
        config.mirrors.rows = dim(rng);
        config.mirrors.cols = dim(rng);
        const Scene a = build_scene(config);
        const Scene b = build_scene(config);
        REQUIRE(a.mirror_centers.size() == b.mirror_centers.size());
        for (std::size_t m = 0; m < a.mirror_centers.size(); ++m)
            CHECK(a.mirror_centers[m] == b.mirror_centers[m]);
        CHECK(a.lambertian_n == b.lambertian_n);
    }
}
