// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vlcirs/scene.hpp"

namespace vlcirs {

/// Electrical noise at the photodetector, in A^2. residual_interference
/// is per-user residual multi-user interference power (0 by default:
/// the bandwidth split already separates users).
struct NoiseModel {
    double total_variance_a2 = 1.2139257266632157e-14; // 20 dB LoS SNR at room center, 2 W
    double residual_interference_a2 = 0.0;
};

/// Per-user channel observation: geometric gains, blockage flag, SINR
/// and achievable rate. irs_gains holds the effective per-mirror gain
/// (zero when the reflected path is occluded or out of range).
struct ChannelReport {
    double los_gain = 0.0;
    bool los_blocked = false;
    std::vector<double> irs_gains;
    double aggregate_gain = 0.0; // indicator * los + sum of irs_gains
    double sinr = 0.0;
    double rate_bps = 0.0;
};

/// Direct-path Lambertian gain between the ceiling AP and an upward
/// receiver at user_pos. Zero when the incidence angle exceeds the
/// receiver field of view. Throws std::domain_error at zero distance.
double los_gain(const Vec3& ap, double lambertian_n, const ReceiverConfig& rx, const Vec3& user_pos);

/// Orientation cosine of the mirror normal against the unit vector from
/// target_pos toward the mirror center. May be negative (back-facing);
/// callers treat <= 0 as no reflection. Throws on coincident points.
double orientation_cosine(const MirrorState& mirror, const Vec3& target_pos);

/// Reflected-path gain through one mirror. Zero whenever any incidence
/// cosine is negative or the user-side angle falls outside the receiver
/// field of view.
double irs_gain(const Vec3& ap, const MirrorState& mirror, const Scene& scene, const Vec3& user_pos);

/// Electrical SINR after photodetection, (R0 * P * aggregate_gain)^2
/// over interference-plus-noise power. los_indicator is 1 when the
/// direct path is clear, 0 when blocked.
double sinr(double los_gain_value, bool los_clear, std::span<const double> irs_gains,
            double responsivity, double transmit_power_w, const NoiseModel& noise);

/// Per-user rate (B/K) * log2(1 + (e/2pi) * gamma), bits per second.
double user_rate(double gamma, double bandwidth_hz, std::size_t num_users);

/// OOK bit error probability Q(sqrt(gamma)).
double ber_ook(double gamma);

/// True when mirror m's reflection toward user_pos is geometrically
/// receivable (all four cosines nonnegative and the user-side incidence
/// within the field of view). Exposed for the exhaustive sweep.
double irs_gain_at(const Scene& scene, const MirrorState& mirror, const Vec3& user_pos);

// ---------------------------------------------------------------------
// Batch kernel: full per-user reports for one set of mirror angles.
// The parallel path splits users across OpenMP threads; each user's
// mirror sum runs in fixed index order, so results are bit-identical
// to the serial reference.
// ---------------------------------------------------------------------

struct ChannelEvalInput {
    const Scene* scene = nullptr;
    std::span<const MirrorState> mirrors;
    std::span<const Vec3> user_positions;
    /// Per-user direct-path clear flag (false = blocked).
    std::span<const char> los_clear;
    /// Per-user x per-mirror occlusion flag, row-major (empty = all clear).
    std::span<const char> mirror_path_clear;
    NoiseModel noise;
};

void evaluate_channels_serial(const ChannelEvalInput& in, std::vector<ChannelReport>& out);
void evaluate_channels(const ChannelEvalInput& in, std::vector<ChannelReport>& out, bool parallel);

} // namespace vlcirs
