// SPDX-License-Identifier: Apache-2.0
#include "vlcirs/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vlcirs {

namespace {
constexpr double kPi = std::numbers::pi;
}

double los_gain(const Vec3& ap, double lambertian_n, const ReceiverConfig& rx, const Vec3& user_pos) {
    const Vec3 d = ap - user_pos;
    const double dist = norm(d);
    if (dist <= 0.0) throw std::domain_error("los_gain: zero AP-user distance");

    // Ceiling AP facing down, receiver facing up: irradiance and
    // incidence cosines coincide at dz / D.
    const double cos_angle = d.z / dist;
    if (cos_angle < std::cos(rx.fov_semiangle) || cos_angle < 0.0) return 0.0;

    const double n = lambertian_n;
    return rx.filter_gain * (n + 1.0) * rx.detector_area_m2 * std::pow(cos_angle, n) * cos_angle /
           (2.0 * kPi * dist * dist);
}

double orientation_cosine(const MirrorState& mirror, const Vec3& target_pos) {
    const Vec3 d = mirror.center - target_pos;
    const double dist = norm(d);
    if (dist <= 0.0) throw std::domain_error("orientation_cosine: target coincides with mirror center");

    const double sin_yaw = std::sin(mirror.yaw);
    const double cos_yaw = std::cos(mirror.yaw);
    const double sin_roll = std::sin(mirror.roll);
    const double cos_roll = std::cos(mirror.roll);
    return (d.x / dist) * sin_yaw * cos_roll + (d.y / dist) * cos_yaw * cos_roll +
           (d.z / dist) * sin_roll;
}

double irs_gain(const Vec3& ap, const MirrorState& mirror, const Scene& scene, const Vec3& user_pos) {
    const ReceiverConfig& rx = scene.receiver;
    const MirrorArrayConfig& arr = scene.mirrors;

    const Vec3 to_ap = mirror.center - ap;
    const double d_ml = norm(to_ap);
    if (d_ml <= 0.0) throw std::domain_error("irs_gain: AP coincides with mirror center");
    const Vec3 to_user = mirror.center - user_pos;
    const double d_km = norm(to_user);
    if (d_km <= 0.0) throw std::domain_error("irs_gain: user coincides with mirror center");

    // AP emission toward the mirror (AP normal points down).
    const double cos_irr_ap = (ap.z - mirror.center.z) / d_ml;
    // Upward receiver incidence from the mirror.
    const double cos_irr_user = (mirror.center.z - user_pos.z) / d_km;
    // Orientation-dependent incidence cosines at the mirror, one per leg.
    const double cos_beta_ap = orientation_cosine(mirror, ap);
    const double cos_beta_user = orientation_cosine(mirror, user_pos);

    if (cos_beta_user < std::cos(rx.fov_semiangle)) return 0.0;
    if (cos_irr_ap < 0.0 || cos_irr_user < 0.0 || cos_beta_ap < 0.0 || cos_beta_user < 0.0) return 0.0;

    const double n = scene.lambertian_n;
    return rx.filter_gain * (n + 1.0) * arr.reflectivity * rx.detector_area_m2 *
           arr.element_area_m2() * arr.extra_gain * std::pow(cos_irr_ap, n) * cos_beta_ap *
           cos_irr_user * cos_beta_user / (2.0 * kPi * kPi * d_ml * d_ml * d_km * d_km);
}

double irs_gain_at(const Scene& scene, const MirrorState& mirror, const Vec3& user_pos) {
    return irs_gain(scene.room.ap_position, mirror, scene, user_pos);
}

double sinr(double los_gain_value, bool los_clear, std::span<const double> irs_gains,
            double responsivity, double transmit_power_w, const NoiseModel& noise) {
    if (!(noise.total_variance_a2 > 0.0))
        throw std::domain_error("sinr: total noise variance must be > 0");

    double aggregate = los_clear ? los_gain_value : 0.0;
    for (double g : irs_gains) aggregate += g;
    const double photocurrent = responsivity * transmit_power_w * aggregate;
    return photocurrent * photocurrent /
           (noise.residual_interference_a2 + noise.total_variance_a2);
}

double user_rate(double gamma, double bandwidth_hz, std::size_t num_users) {
    if (num_users == 0) throw std::domain_error("user_rate: K must be >= 1");
    if (!(gamma >= 0.0)) throw std::domain_error("user_rate: gamma must be >= 0");
    const double euler_factor = std::numbers::e / (2.0 * kPi);
    return bandwidth_hz / static_cast<double>(num_users) * std::log2(1.0 + euler_factor * gamma);
}

double ber_ook(double gamma) {
    if (!(gamma >= 0.0)) throw std::domain_error("ber_ook: gamma must be >= 0");
    // Q(x) = erfc(x / sqrt(2)) / 2
    return 0.5 * std::erfc(std::sqrt(gamma) / std::numbers::sqrt2);
}

namespace {

void evaluate_one_user(const ChannelEvalInput& in, std::size_t k, ChannelReport& report) {
    const Scene& scene = *in.scene;
    const std::size_t num_mirrors = in.mirrors.size();
    const Vec3& pos = in.user_positions[k];

    report.los_gain = los_gain(scene.room.ap_position, scene.lambertian_n, scene.receiver, pos);
    report.los_blocked = in.los_clear[k] == 0;
    report.irs_gains.assign(num_mirrors, 0.0);

    double aggregate = report.los_blocked ? 0.0 : report.los_gain;
    for (std::size_t m = 0; m < num_mirrors; ++m) {
        const bool path_clear =
            in.mirror_path_clear.empty() || in.mirror_path_clear[k * num_mirrors + m] != 0;
        if (!path_clear) continue;
        const double g = irs_gain_at(scene, in.mirrors[m], pos);
        report.irs_gains[m] = g;
        aggregate += g;
    }
    report.aggregate_gain = aggregate;
    report.sinr = sinr(report.los_gain, !report.los_blocked, report.irs_gains,
                       scene.receiver.responsivity, scene.led.transmit_power_w, in.noise);
    report.rate_bps = user_rate(report.sinr, scene.receiver.bandwidth_hz, in.user_positions.size());
}

} // namespace

void evaluate_channels_serial(const ChannelEvalInput& in, std::vector<ChannelReport>& out) {
    out.resize(in.user_positions.size());
    for (std::size_t k = 0; k < in.user_positions.size(); ++k) evaluate_one_user(in, k, out[k]);
}

void evaluate_channels(const ChannelEvalInput& in, std::vector<ChannelReport>& out, bool parallel) {
    if (!parallel) {
        evaluate_channels_serial(in, out);
        return;
    }
    out.resize(in.user_positions.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.user_positions.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k)
        evaluate_one_user(in, static_cast<std::size_t>(k), out[static_cast<std::size_t>(k)]);
}

} // namespace vlcirs
