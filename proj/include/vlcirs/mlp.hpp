// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace vlcirs {

enum class Activation : std::uint8_t { Relu = 0, Tanh = 1, Identity = 2 };

/// Fully-connected network with 64-bit parameters stored in one flat
/// buffer (per layer: row-major weights, then biases). Tiny networks,
/// so determinism and exact gradients win over speed tricks.
class Mlp {
public:
    struct Layer {
        std::size_t in = 0;
        std::size_t out = 0;
        Activation act = Activation::Identity;
        std::size_t weight_offset = 0;
        std::size_t bias_offset = 0;
    };

    Mlp() = default;

    /// sizes = {in, h1, ..., out}; acts has sizes.size()-1 entries.
    /// Weights drawn uniform in +-1/sqrt(fan_in), biases zero.
    static Mlp make(const std::vector<std::size_t>& sizes, const std::vector<Activation>& acts,
                    std::uint64_t seed);

    std::size_t input_size() const { return layers_.empty() ? 0 : layers_.front().in; }
    std::size_t output_size() const { return layers_.empty() ? 0 : layers_.back().out; }
    std::size_t param_count() const { return params_.size(); }
    const std::vector<Layer>& layers() const { return layers_; }

    std::span<const double> params() const { return params_; }
    /// Mutable access bumps the version; ForwardPass objects built
    /// before the change become stale.
    std::span<double> mutable_params() {
        ++version_;
        return params_;
    }
    std::uint64_t version() const { return version_; }

    bool same_architecture(const Mlp& other) const;

    std::vector<double> forward(std::span<const double> input) const;

private:
    std::vector<Layer> layers_;
    std::vector<double> params_;
    std::uint64_t version_ = 0;

    friend struct ForwardPass;
};

/// Cached activations from one forward evaluation, consumed by
/// backward(). Records the network version it was computed against.
struct ForwardPass {
    std::vector<std::vector<double>> post; // post[0] = input, post[L] = output
    std::vector<std::vector<double>> pre;  // pre-activation per layer
    std::uint64_t net_version = 0;

    static ForwardPass run(const Mlp& net, std::span<const double> input);
    std::span<const double> output() const { return post.back(); }
};

/// Exact reverse-mode gradients of the scalar implied by output_gradient.
/// Parameter gradients are accumulated (+=) into param_grads, which must
/// have net.param_count() entries; the input gradient is returned.
/// Throws std::logic_error when the pass is stale for this network.
std::vector<double> backward(const Mlp& net, const ForwardPass& pass,
                             std::span<const double> output_gradient, std::span<double> param_grads);

/// Input gradient only; skips the parameter-gradient accumulation.
std::vector<double> backward_input(const Mlp& net, const ForwardPass& pass,
                                   std::span<const double> output_gradient);

struct AdamConfig {
    double learning_rate = 1.0e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1.0e-8;
};

struct AdamState {
    AdamConfig config;
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    std::uint64_t step = 0;

    static AdamState make(std::size_t param_count, const AdamConfig& config);
};

/// Bias-corrected Adam update, in place. Shapes must match.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

/// target <- tau * online + (1 - tau) * target, elementwise.
void soft_update(Mlp& target, const Mlp& online, double tau);

/// Versioned binary checkpoint; round-trips parameters bit-exactly.
void save_mlp(const Mlp& net, const std::filesystem::path& path);
Mlp load_mlp(const std::filesystem::path& path);
void write_mlp(const Mlp& net, std::ostream& out);
Mlp read_mlp(std::istream& in);

} // namespace vlcirs
