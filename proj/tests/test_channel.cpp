// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vlcirs/channel.hpp"
#include "vlcirs/scene.hpp"

using namespace vlcirs;

namespace {

double rel_err(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

Scene one_mirror_scene() {
    SceneConfig config;
    config.mirrors.rows = 1;
    config.mirrors.cols = 1;
    return build_scene(config);
}

} // namespace

TEST_CASE("los gain under the AP matches the hand evaluation") {
    const Scene scene = build_scene(SceneConfig{});
    const Vec3 user{2.5, 2.5, 0.85}; // distance 2.15 m
    const double h = los_gain(scene.room.ap_position, scene.lambertian_n, scene.receiver, user);
    CHECK(h == doctest::Approx(1.377219626538846e-06).epsilon(1e-12));
}

TEST_CASE("los gain vanishes outside the field of view") {
    Scene scene = build_scene(SceneConfig{});
    scene.receiver.fov_semiangle = 0.2; // ~11.5 deg acceptance cone
    const Vec3 user{4.5, 4.5, 0.85};    // steep incidence from the corner
    CHECK(los_gain(scene.room.ap_position, scene.lambertian_n, scene.receiver, user) == 0.0);
}

TEST_CASE("los gain follows the inverse square at fixed angles") {
    const Scene scene = build_scene(SceneConfig{});
    const Vec3 ap{0.0, 0.0, 0.0};
    const Vec3 user{0.0, 0.0, -2.0};
    const Vec3 far_user{0.0, 0.0, -4.0};
    const double near = los_gain(ap, scene.lambertian_n, scene.receiver, user);
    const double far = los_gain(ap, scene.lambertian_n, scene.receiver, far_user);
    CHECK(far == doctest::Approx(near / 4.0).epsilon(1e-12));
}

TEST_CASE("los gain rejects coincident endpoints") {
    const Scene scene = build_scene(SceneConfig{});
    CHECK_THROWS_AS(
        los_gain(scene.room.ap_position, scene.lambertian_n, scene.receiver, scene.room.ap_position),
        std::domain_error);
}

TEST_CASE("orientation cosine axis anchors") {
    MirrorState mirror;
    mirror.center = {2.5, 0.0, 1.5};

    // user straight in front of the resting mirror: the formula yields -1
    CHECK(orientation_cosine(mirror, Vec3{2.5, 2.0, 1.5}) == doctest::Approx(-1.0));
    // target behind the wall plane: +1
    CHECK(orientation_cosine(mirror, Vec3{2.5, -2.0, 1.5}) == doctest::Approx(1.0));

    // yaw of pi/2 isolates the x term
    mirror.yaw = std::numbers::pi / 2.0;
    const Vec3 user{1.0, 0.0, 1.5};
    const double d = distance(mirror.center, user);
    CHECK(orientation_cosine(mirror, user) ==
          doctest::Approx((mirror.center.x - user.x) / d).epsilon(1e-12));
}

TEST_CASE("orientation cosine matches the frozen hand value") {
    MirrorState mirror;
    mirror.center = {2.5, 0.0, 1.5};
    mirror.yaw = 0.0;
    mirror.roll = -0.2;
    CHECK(orientation_cosine(mirror, Vec3{2.5, 2.0, 0.85}) ==
          doctest::Approx(-0.993482628300949).epsilon(1e-12));
}

TEST_CASE("orientation cosine rejects coincident points") {
    MirrorState mirror;
    mirror.center = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(orientation_cosine(mirror, mirror.center), std::domain_error);
}

TEST_CASE("orientation cosine agrees with the rotated-normal oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> pos(-4.0, 4.0);
    std::uniform_real_distribution<double> angle(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    for (int i = 0; i < 10000; ++i) {
        MirrorState mirror;
        mirror.center = {pos(rng), pos(rng), pos(rng)};
        mirror.yaw = angle(rng);
        mirror.roll = angle(rng);
        const Vec3 target{pos(rng), pos(rng), pos(rng)};
        if (distance(mirror.center, target) < 1e-3) continue;
        const double got = orientation_cosine(mirror, target);
        const double expected =
            oracles::orientation_cosine(mirror.center, mirror.yaw, mirror.roll, target);
        CHECK(rel_err(got, expected) <= 1e-12);
    }
}

TEST_CASE("irs gain is annihilated by zero reflectivity") {
    SceneConfig config;
    config.mirrors.rows = 1;
    config.mirrors.cols = 1;
    config.mirrors.reflectivity = 0.0;
    const Scene scene = build_scene(config);
    MirrorState mirror = scene.initial_mirror_states()[0];
    mirror.yaw = 0.4;
    mirror.roll = -0.3;
    CHECK(irs_gain_at(scene, mirror, Vec3{1.0, 2.0, 0.85}) == 0.0);
}

TEST_CASE("irs gain respects the field-of-view branch") {
    Scene scene = one_mirror_scene();
    scene.receiver.fov_semiangle = 0.05; // hard gate on the user-side incidence
    MirrorState mirror = scene.initial_mirror_states()[0];
    mirror.yaw = 0.5;
    mirror.roll = -0.4;
    CHECK(irs_gain_at(scene, mirror, Vec3{1.0, 2.0, 0.85}) == 0.0);
}

TEST_CASE("irs gain vanishes when the mirror faces away") {
    const Scene scene = one_mirror_scene();
    MirrorState mirror = scene.initial_mirror_states()[0];
    // rest orientation: the user in front of the wall sees cos(beta) = -1
    CHECK(irs_gain_at(scene, mirror, Vec3{2.5, 2.0, 0.85}) == 0.0);
}

TEST_CASE("irs gain matches the independent step-by-step evaluation") {
    const Scene scene = one_mirror_scene();
    MirrorState mirror = scene.initial_mirror_states()[0];
    mirror.yaw = 0.3;
    mirror.roll = -0.1;
    const Vec3 user{1.1, 2.7, 0.85};
    const double got = irs_gain_at(scene, mirror, user);
    const double expected = oracles::irs_gain(
        scene.room.ap_position, mirror.center, mirror.yaw, mirror.roll, scene.lambertian_n,
        scene.mirrors.reflectivity, scene.receiver.detector_area_m2,
        scene.mirrors.element_area_m2(), scene.mirrors.extra_gain, scene.receiver.fov_semiangle,
        user);
    CHECK(rel_err(got, expected) <= 1e-12);
}

TEST_CASE("irs gain never returns negative values and honors the scaling law") {
    const Scene base = one_mirror_scene();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    std::uniform_real_distribution<double> ux(0.1, 4.9), uy(0.1, 4.9);
    for (int i = 0; i < 2000; ++i) {
        MirrorState mirror = base.initial_mirror_states()[0];
        mirror.yaw = angle(rng);
        mirror.roll = angle(rng);
        const Vec3 user{ux(rng), uy(rng), 0.85};
        const double g = irs_gain_at(base, mirror, user);
        CHECK(g >= 0.0);

        if (g > 0.0) {
            // scale every coordinate by c about the origin: angles are
            // unchanged, both path lengths scale by c, gain by 1/c^4
            const double c = 1.7;
            Scene scaled = base;
            scaled.room.ap_position = base.room.ap_position * c;
            MirrorState scaled_mirror = mirror;
            scaled_mirror.center = mirror.center * c;
            const double gs = irs_gain_at(scaled, scaled_mirror, user * c);
            CHECK(rel_err(gs, g / (c * c * c * c)) <= 1e-12);
        }
    }
}

TEST_CASE("the optional filter gain scales both paths linearly") {
    Scene scene = one_mirror_scene();
    MirrorState mirror = scene.initial_mirror_states()[0];
    mirror.yaw = 0.3;
    mirror.roll = -0.1;
    const Vec3 user{1.1, 2.7, 0.85};
    const double los_base =
        los_gain(scene.room.ap_position, scene.lambertian_n, scene.receiver, user);
    const double irs_base = irs_gain_at(scene, mirror, user);
    scene.receiver.filter_gain = 2.5;
    CHECK(los_gain(scene.room.ap_position, scene.lambertian_n, scene.receiver, user) ==
          doctest::Approx(2.5 * los_base).epsilon(1e-12));
    CHECK(irs_gain_at(scene, mirror, user) == doctest::Approx(2.5 * irs_base).epsilon(1e-12));
}

TEST_CASE("sinr anchors") {
    NoiseModel noise;
    noise.total_variance_a2 = 1e-13;

    SUBCASE("all gains zero") {
        CHECK(sinr(0.0, true, std::vector<double>{0.0, 0.0}, 0.4, 2.0, noise) == 0.0);
    }
    SUBCASE("blocked LoS with no reflections") {
        CHECK(sinr(1.377e-6, false, std::vector<double>{}, 0.4, 2.0, noise) == 0.0);
    }
    SUBCASE("frozen hand evaluation") {
        const double gamma = sinr(1.377e-6, true, std::vector<double>{}, 0.4, 2.0, noise);
        CHECK(gamma == doctest::Approx(12.1352256).epsilon(1e-12));
    }
    SUBCASE("doubling the power quadruples the SINR") {
        const std::vector<double> irs{3e-9, 5e-9};
        const double g1 = sinr(1.377e-6, true, irs, 0.4, 2.0, noise);
        const double g2 = sinr(1.377e-6, true, irs, 0.4, 4.0, noise);
        CHECK(g2 == doctest::Approx(4.0 * g1).epsilon(1e-12));
    }
    SUBCASE("zero noise variance is a domain error") {
        NoiseModel bad;
        bad.total_variance_a2 = 0.0;
        CHECK_THROWS_AS(sinr(1e-6, true, std::vector<double>{}, 0.4, 2.0, bad), std::domain_error);
    }
}

TEST_CASE("user rate anchors and monotonicity") {
    CHECK(user_rate(0.0, 2e7, 5) == 0.0);
    CHECK(user_rate(2.0 * std::numbers::pi / std::numbers::e, 2e7, 5) ==
          doctest::Approx(2e7 / 5.0).epsilon(1e-12));
    CHECK(user_rate(100.0, 2e7, 5) == doctest::Approx(21872091.112689808).epsilon(1e-12));
    CHECK_THROWS_AS(user_rate(1.0, 2e7, 0), std::domain_error);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ug(0.0, 1e4);
    for (int i = 0; i < 500; ++i) {
        const double a = ug(rng), b = ug(rng);
        const double lo = std::min(a, b), hi = std::max(a, b);
        if (lo == hi) continue;
        CHECK(user_rate(lo, 2e7, 5) < user_rate(hi, 2e7, 5));
        CHECK(user_rate(hi, 1e7, 5) < user_rate(hi, 2e7, 5));
        CHECK(user_rate(hi, 2e7, 6) < user_rate(hi, 2e7, 5));
    }
}

TEST_CASE("ook bit error rate anchors") {
    CHECK(ber_ook(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ber_ook(9.0) == doctest::Approx(0.0013498980316300957).epsilon(1e-12));
    CHECK(ber_ook(1e6) < 1e-200);
    double prev = ber_ook(0.0);
    for (double g = 0.25; g < 50.0; g += 0.25) {
        const double b = ber_ook(g);
        CHECK(b <= prev);
        CHECK(b >= 0.0);
        CHECK(b <= 0.5);
        prev = b;
    }
}

TEST_CASE("batch evaluation: serial and parallel paths are bit-identical") {
    SceneConfig config;
    config.mirrors.rows = 4;
    config.mirrors.cols = 5;
    const Scene scene = build_scene(config);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(-1.5, 1.5);
    std::uniform_real_distribution<double> ux(0.1, 4.9);
    std::vector<MirrorState> mirrors = scene.initial_mirror_states();
    for (MirrorState& m : mirrors) {
        m.yaw = angle(rng);
        m.roll = angle(rng);
    }
    std::vector<Vec3> users(7);
    for (Vec3& u : users) u = {ux(rng), ux(rng), 0.85};
    std::vector<char> clear(users.size(), 1);
    clear[2] = 0;

    ChannelEvalInput in;
    in.scene = &scene;
    in.mirrors = mirrors;
    in.user_positions = users;
    in.los_clear = clear;
    in.noise = NoiseModel{};

    std::vector<ChannelReport> serial, parallel;
    evaluate_channels_serial(in, serial);
    evaluate_channels(in, parallel, true);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t k = 0; k < serial.size(); ++k) {
        CHECK(serial[k].los_gain == parallel[k].los_gain);
        CHECK(serial[k].aggregate_gain == parallel[k].aggregate_gain);
        CHECK(serial[k].sinr == parallel[k].sinr);
        CHECK(serial[k].rate_bps == parallel[k].rate_bps);
        CHECK(serial[k].irs_gains == parallel[k].irs_gains);
    }
    CHECK(serial[2].los_blocked);
    CHECK(serial[2].sinr >= 0.0);
}
