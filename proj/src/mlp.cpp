// SPDX-License-Identifier: Apache-2.0
#include "vlcirs/mlp.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace vlcirs {

namespace {

double apply_activation(Activation act, double x) {
    switch (act) {
    case Activation::Relu: return x > 0.0 ? x : 0.0;
    case Activation::Tanh: return std::tanh(x);
    case Activation::Identity: return x;
    }
    return x;
}

// Derivative in terms of pre-activation and the cached output value.
double activation_derivative(Activation act, double pre, double post) {
    switch (act) {
    case Activation::Relu: return pre > 0.0 ? 1.0 : 0.0; // subgradient 0 at exactly 0
    case Activation::Tanh: return 1.0 - post * post;
    case Activation::Identity: return 1.0;
    }
    return 1.0;
}

} // namespace

Mlp Mlp::make(const std::vector<std::size_t>& sizes, const std::vector<Activation>& acts,
              std::uint64_t seed) {
    if (sizes.size() < 2) throw std::invalid_argument("Mlp::make: need at least input and output sizes");
    if (acts.size() != sizes.size() - 1)
        throw std::invalid_argument("Mlp::make: one activation per layer required");

    Mlp net;
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        if (sizes[l] == 0 || sizes[l + 1] == 0)
            throw std::invalid_argument("Mlp::make: zero layer width");
        Layer layer;
        layer.in = sizes[l];
        layer.out = sizes[l + 1];
        layer.act = acts[l];
        layer.weight_offset = offset;
        offset += layer.in * layer.out;
        layer.bias_offset = offset;
        offset += layer.out;
        net.layers_.push_back(layer);
    }
    net.params_.assign(offset, 0.0);

    std::mt19937_64 rng(seed);
    for (const Layer& layer : net.layers_) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        std::uniform_real_distribution<double> uw(-bound, bound);
        for (std::size_t i = 0; i < layer.in * layer.out; ++i)
            net.params_[layer.weight_offset + i] = uw(rng);
        // biases stay zero
    }
    return net;
}

bool Mlp::same_architecture(const Mlp& other) const {
    if (layers_.size() != other.layers_.size()) return false;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        if (layers_[l].in != other.layers_[l].in || layers_[l].out != other.layers_[l].out ||
            layers_[l].act != other.layers_[l].act)
            return false;
    }
    return true;
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
    if (input.size() != input_size()) throw std::invalid_argument("Mlp::forward: input size mismatch");
    std::vector<double> current(input.begin(), input.end());
    std::vector<double> next;
    for (const Layer& layer : layers_) {
        next.assign(layer.out, 0.0);
        const double* w = params_.data() + layer.weight_offset;
        const double* b = params_.data() + layer.bias_offset;
        for (std::size_t o = 0; o < layer.out; ++o) {
            double acc = b[o];
            const double* row = w + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i) acc += row[i] * current[i];
            next[o] = apply_activation(layer.act, acc);
        }
        current.swap(next);
    }
    return current;
}

ForwardPass ForwardPass::run(const Mlp& net, std::span<const double> input) {
    if (input.size() != net.input_size())
        throw std::invalid_argument("ForwardPass: input size mismatch");
    ForwardPass pass;
    pass.net_version = net.version();
    pass.post.reserve(net.layers().size() + 1);
    pass.pre.reserve(net.layers().size());
    pass.post.emplace_back(input.begin(), input.end());
    for (const Mlp::Layer& layer : net.layers()) {
        const std::vector<double>& x = pass.post.back();
        std::vector<double> pre(layer.out, 0.0);
        const double* w = net.params().data() + layer.weight_offset;
        const double* b = net.params().data() + layer.bias_offset;
        for (std::size_t o = 0; o < layer.out; ++o) {
            double acc = b[o];
            const double* row = w + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i) acc += row[i] * x[i];
            pre[o] = acc;
        }
        std::vector<double> post(layer.out);
        for (std::size_t o = 0; o < layer.out; ++o) post[o] = apply_activation(layer.act, pre[o]);
        pass.pre.push_back(std::move(pre));
        pass.post.push_back(std::move(post));
    }
    return pass;
}

std::vector<double> backward(const Mlp& net, const ForwardPass& pass,
                             std::span<const double> output_gradient, std::span<double> param_grads) {
    if (pass.net_version != net.version())
        throw std::logic_error("backward: forward pass is stale for this network");
    if (output_gradient.size() != net.output_size())
        throw std::invalid_argument("backward: output gradient size mismatch");
    if (param_grads.size() != net.param_count())
        throw std::invalid_argument("backward: parameter gradient size mismatch");

    std::vector<double> dy(output_gradient.begin(), output_gradient.end());
    std::vector<double> dx;
    for (std::size_t li = net.layers().size(); li-- > 0;) {
        const Mlp::Layer& layer = net.layers()[li];
        const std::vector<double>& x = pass.post[li];
        const std::vector<double>& pre = pass.pre[li];
        const std::vector<double>& post = pass.post[li + 1];

        // d(loss)/d(pre-activation)
        for (std::size_t o = 0; o < layer.out; ++o)
            dy[o] *= activation_derivative(layer.act, pre[o], post[o]);

        const double* w = net.params().data() + layer.weight_offset;
        double* gw = param_grads.data() + layer.weight_offset;
        double* gb = param_grads.data() + layer.bias_offset;
        dx.assign(layer.in, 0.0);
        for (std::size_t o = 0; o < layer.out; ++o) {
            const double g = dy[o];
            gb[o] += g;
            double* grow = gw + o * layer.in;
            const double* wrow = w + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i) {
                grow[i] += g * x[i];
                dx[i] += g * wrow[i];
            }
        }
        dy.swap(dx);
    }
    return dy;
}

std::vector<double> backward_input(const Mlp& net, const ForwardPass& pass,
                                   std::span<const double> output_gradient) {
    if (pass.net_version != net.version())
        throw std::logic_error("backward_input: forward pass is stale for this network");
    if (output_gradient.size() != net.output_size())
        throw std::invalid_argument("backward_input: output gradient size mismatch");

    std::vector<double> dy(output_gradient.begin(), output_gradient.end());
    std::vector<double> dx;
    for (std::size_t li = net.layers().size(); li-- > 0;) {
        const Mlp::Layer& layer = net.layers()[li];
        const std::vector<double>& pre = pass.pre[li];
        const std::vector<double>& post = pass.post[li + 1];
        for (std::size_t o = 0; o < layer.out; ++o)
            dy[o] *= activation_derivative(layer.act, pre[o], post[o]);

        const double* w = net.params().data() + layer.weight_offset;
        dx.assign(layer.in, 0.0);
        for (std::size_t o = 0; o < layer.out; ++o) {
            const double g = dy[o];
            const double* wrow = w + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i) dx[i] += g * wrow[i];
        }
        dy.swap(dx);
    }
    return dy;
}

AdamState AdamState::make(std::size_t param_count, const AdamConfig& config) {
    AdamState state;
    state.config = config;
    state.first_moment.assign(param_count, 0.0);
    state.second_moment.assign(param_count, 0.0);
    return state;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.first_moment.size())
        throw std::invalid_argument("adam_step: shape mismatch");
    const AdamConfig& c = state.config;
    ++state.step;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = c.beta1 * m + (1.0 - c.beta1) * grads[i];
        v = c.beta2 * v + (1.0 - c.beta2) * grads[i] * grads[i];
        const double m_hat = m / bc1;
        const double v_hat = v / bc2;
        params[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
}

void soft_update(Mlp& target, const Mlp& online, double tau) {
    if (!target.same_architecture(online))
        throw std::invalid_argument("soft_update: architecture mismatch");
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("soft_update: tau outside [0, 1]");
    std::span<double> t = target.mutable_params();
    std::span<const double> o = online.params();
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = tau * o[i] + (1.0 - tau) * t[i];
}

namespace {
constexpr char kMagic[8] = {'V', 'L', 'C', 'N', 'E', 'T', '1', '\n'};

template <typename T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("mlp checkpoint: truncated stream");
    return value;
}
} // namespace

void write_mlp(const Mlp& net, std::ostream& out) {
    out.write(kMagic, sizeof(kMagic));
    write_pod<std::uint64_t>(out, net.layers().size());
    for (const Mlp::Layer& layer : net.layers()) {
        write_pod<std::uint64_t>(out, layer.in);
        write_pod<std::uint64_t>(out, layer.out);
        write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(layer.act));
    }
    out.write(reinterpret_cast<const char*>(net.params().data()),
              static_cast<std::streamsize>(net.param_count() * sizeof(double)));
}

Mlp read_mlp(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic)))
        throw std::runtime_error("mlp checkpoint: bad magic");
    const auto n_layers = read_pod<std::uint64_t>(in);
    std::vector<std::size_t> sizes;
    std::vector<Activation> acts;
    for (std::uint64_t l = 0; l < n_layers; ++l) {
        const auto in_size = read_pod<std::uint64_t>(in);
        const auto out_size = read_pod<std::uint64_t>(in);
        const auto act = read_pod<std::uint8_t>(in);
        if (l == 0) sizes.push_back(static_cast<std::size_t>(in_size));
        sizes.push_back(static_cast<std::size_t>(out_size));
        acts.push_back(static_cast<Activation>(act));
    }
    Mlp net = Mlp::make(sizes, acts, 0);
    std::span<double> params = net.mutable_params();
    in.read(reinterpret_cast<char*>(params.data()),
            static_cast<std::streamsize>(params.size() * sizeof(double)));
    if (!in) throw std::runtime_error("mlp checkpoint: truncated parameters");
    return net;
}

void save_mlp(const Mlp& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("mlp checkpoint: cannot open " + path.string());
    write_mlp(net, out);
    if (!out) throw std::runtime_error("mlp checkpoint: write failed for " + path.string());
}

Mlp load_mlp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("mlp checkpoint: cannot open " + path.string());
    return read_mlp(in);
}

} // namespace vlcirs
