// SPDX-License-Identifier: Apache-2.0
#include "vlcirs/agents.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace vlcirs {

namespace {

std::vector<double> concat(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

void add_into(std::vector<double>& acc, const std::vector<double>& term) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += term[i];
}

} // namespace

DdpgAgent::DdpgAgent(std::size_t obs_dim, std::size_t act_dim, DdpgConfig config, std::uint64_t seed)
    : obs_dim_(obs_dim),
      act_dim_(act_dim),
      config_(config),
      actor_(Mlp::make({obs_dim, config.actor_hidden1, config.actor_hidden2, act_dim},
                       {Activation::Relu, Activation::Relu, Activation::Tanh}, seed)),
      critic_(Mlp::make({obs_dim + act_dim, config.critic_hidden1, config.critic_hidden2, 1},
                        {Activation::Relu, Activation::Relu, Activation::Identity},
                        seed ^ 0xc2b2ae3d27d4eb4fULL)),
      actor_target_(actor_),
      critic_target_(critic_),
      actor_adam_(AdamState::make(actor_.param_count(), {config.actor_lr})),
      critic_adam_(AdamState::make(critic_.param_count(), {config.critic_lr})),
      buffer_(config.buffer_capacity),
      noise_scale_(config.noise_initial) {
    if (obs_dim_ == 0 || act_dim_ == 0) throw std::invalid_argument("DdpgAgent: zero dimensions");
}

std::vector<double> DdpgAgent::select_action(std::span<const double> state, bool explore, Rng& rng) {
    if (state.size() != obs_dim_) throw std::invalid_argument("select_action: state size mismatch");
    std::vector<double> action = actor_.forward(state);
    if (explore && noise_scale_ > 0.0) {
        std::normal_distribution<double> noise(0.0, noise_scale_);
        for (double& a : action) a = std::clamp(a + noise(rng), -1.0, 1.0);
    }
    return action;
}

void DdpgAgent::decay_exploration() {
    noise_scale_ = std::max(config_.noise_floor, noise_scale_ * config_.noise_decay);
}

UpdateStats DdpgAgent::update(Rng& rng) {
    return update_with(buffer_.sample(config_.batch_size, rng));
}

UpdateStats DdpgAgent::update_with(const std::vector<const Transition*>& batch) {
    const std::size_t n = batch.size();
    if (n == 0) throw std::logic_error("ddpg update: empty minibatch");
    const double inv_n = 1.0 / static_cast<double>(n);

    // --- critic step: y_i = r_i + gamma * Q'(s', mu'(s')) with the
    // terminal mask, then one Adam step on the mean squared error.
    // Per-sample gradients are combined in sample order; the serial path
    // accumulates straight into the sum, which performs the identical
    // additions and so stays bit-equal to the parallel path.
    std::vector<double> losses(n, 0.0);
    std::vector<double> grad_sum(critic_.param_count(), 0.0);
    const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(n);

    auto critic_sample = [&](std::size_t i, std::span<double> grad_out) {
        const Transition& t = *batch[i];
        double target = t.reward;
        if (!t.done) {
            const std::vector<double> next_action = actor_target_.forward(t.next_state);
            const std::vector<double> next_q =
                critic_target_.forward(concat(t.next_state, next_action));
            target += config_.discount * next_q[0];
        }
        ForwardPass pass = ForwardPass::run(critic_, concat(t.state, t.action));
        const double error = pass.output()[0] - target;
        losses[i] = error * error;
        const double out_grad[1] = {2.0 * error * inv_n};
        backward(critic_, pass, out_grad, grad_out);
    };

    if (config_.parallel_updates) {
        if (critic_sample_grads_.size() != n)
            critic_sample_grads_.assign(n, std::vector<double>(critic_.param_count(), 0.0));
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
            const std::size_t i = static_cast<std::size_t>(ii);
            std::fill(critic_sample_grads_[i].begin(), critic_sample_grads_[i].end(), 0.0);
            critic_sample(i, critic_sample_grads_[i]);
        }
        for (std::size_t i = 0; i < n; ++i) add_into(grad_sum, critic_sample_grads_[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) critic_sample(i, grad_sum);
    }
    adam_step(critic_.mutable_params(), grad_sum, critic_adam_);

    double critic_loss = 0.0;
    for (double l : losses) critic_loss += l;
    critic_loss *= inv_n;

    // --- actor step: ascend grad_a Q(s, mu(s)) chained through the
    // actor; Adam minimizes, so the ascent gradient is negated.
    auto [actor_objective, ascent_grad] =
        actor_objective_gradient(actor_, critic_, batch, config_.parallel_updates);
    for (double& g : ascent_grad) g = -g;
    adam_step(actor_.mutable_params(), ascent_grad, actor_adam_);

    soft_update(critic_target_, critic_, config_.tau);
    soft_update(actor_target_, actor_, config_.tau);

    return {critic_loss, actor_objective};
}

std::pair<double, std::vector<double>> actor_objective_gradient(
    const Mlp& actor, const Mlp& critic, const std::vector<const Transition*>& batch,
    bool parallel) {
    const std::size_t n = batch.size();
    if (n == 0) throw std::logic_error("actor_objective_gradient: empty minibatch");
    const std::size_t obs_dim = actor.input_size();
    const std::size_t act_dim = actor.output_size();
    if (critic.input_size() != obs_dim + act_dim)
        throw std::invalid_argument("actor_objective_gradient: critic input must be state+action");
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> objectives(n, 0.0);
    std::vector<double> grad(actor.param_count(), 0.0);
    const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(n);

    auto actor_sample = [&](std::size_t i, std::span<double> grad_out) {
        const Transition& t = *batch[i];
        ForwardPass actor_pass = ForwardPass::run(actor, t.state);
        ForwardPass critic_pass = ForwardPass::run(critic, concat(t.state, actor_pass.output()));
        objectives[i] = critic_pass.output()[0];
        const double out_grad[1] = {inv_n};
        const std::vector<double> input_grad = backward_input(critic, critic_pass, out_grad);
        backward(actor, actor_pass,
                 std::span<const double>(input_grad).subspan(obs_dim, act_dim), grad_out);
    };

    if (parallel) {
        std::vector<std::vector<double>> sample_grads(n);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
            const std::size_t i = static_cast<std::size_t>(ii);
            sample_grads[i].assign(actor.param_count(), 0.0);
            actor_sample(i, sample_grads[i]);
        }
        for (std::size_t i = 0; i < n; ++i) add_into(grad, sample_grads[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) actor_sample(i, grad);
    }

    double objective = 0.0;
    for (double q : objectives) objective += q;
    return {objective * inv_n, std::move(grad)};
}

namespace {

nlohmann::json ddpg_config_json(const DdpgConfig& c) {
    return nlohmann::json{{"actor_lr", c.actor_lr},
                          {"critic_lr", c.critic_lr},
                          {"discount", c.discount},
                          {"tau", c.tau},
                          {"buffer_capacity", c.buffer_capacity},
                          {"batch_size", c.batch_size},
                          {"noise_initial", c.noise_initial},
                          {"noise_decay", c.noise_decay},
                          {"noise_floor", c.noise_floor},
                          {"actor_hidden1", c.actor_hidden1},
                          {"actor_hidden2", c.actor_hidden2},
                          {"critic_hidden1", c.critic_hidden1},
                          {"critic_hidden2", c.critic_hidden2}};
}

DdpgConfig ddpg_config_from_json(const nlohmann::json& j) {
    DdpgConfig c;
    c.actor_lr = j.at("actor_lr");
    c.critic_lr = j.at("critic_lr");
    c.discount = j.at("discount");
    c.tau = j.at("tau");
    c.buffer_capacity = j.at("buffer_capacity");
    c.batch_size = j.at("batch_size");
    c.noise_initial = j.at("noise_initial");
    c.noise_decay = j.at("noise_decay");
    c.noise_floor = j.at("noise_floor");
    c.actor_hidden1 = j.at("actor_hidden1");
    c.actor_hidden2 = j.at("actor_hidden2");
    c.critic_hidden1 = j.at("critic_hidden1");
    c.critic_hidden2 = j.at("critic_hidden2");
    return c;
}

} // namespace

void DdpgAgent::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("agent checkpoint: cannot open " + path.string());
    nlohmann::json header = {{"format", "vlcirs-ddpg-1"},
                             {"obs_dim", obs_dim_},
                             {"act_dim", act_dim_},
                             {"noise_scale", noise_scale_},
                             {"config", ddpg_config_json(config_)}};
    const std::string text = header.dump();
    const std::uint64_t len = text.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    write_mlp(actor_, out);
    write_mlp(critic_, out);
    write_mlp(actor_target_, out);
    write_mlp(critic_target_, out);
    if (!out) throw std::runtime_error("agent checkpoint: write failed for " + path.string());
}

DdpgAgent DdpgAgent::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("agent checkpoint: cannot open " + path.string());
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    std::string text(len, '\0');
    in.read(text.data(), static_cast<std::streamsize>(len));
    if (!in) throw std::runtime_error("agent checkpoint: truncated header");
    const nlohmann::json header = nlohmann::json::parse(text);
    if (header.at("format") != "vlcirs-ddpg-1")
        throw std::runtime_error("agent checkpoint: unknown format");

    DdpgAgent agent(header.at("obs_dim"), header.at("act_dim"),
                    ddpg_config_from_json(header.at("config")), 0);
    agent.noise_scale_ = header.at("noise_scale");
    agent.actor_ = read_mlp(in);
    agent.critic_ = read_mlp(in);
    agent.actor_target_ = read_mlp(in);
    agent.critic_target_ = read_mlp(in);
    return agent;
}

// ---------------------------------------------------------------------

DqlAgent::DqlAgent(std::size_t obs_dim, std::size_t act_dim, DqlConfig config, std::uint64_t seed)
    : obs_dim_(obs_dim),
      act_dim_(act_dim),
      config_(config),
      q_(Mlp::make({obs_dim, config.hidden1, config.hidden2, act_dim * config.levels},
                   {Activation::Relu, Activation::Relu, Activation::Identity}, seed)),
      q_target_(q_),
      adam_(AdamState::make(q_.param_count(), {config.lr})),
      buffer_(config.buffer_capacity),
      epsilon_(config.epsilon_initial) {
    if (config_.levels == 0) throw std::invalid_argument("DqlAgent: levels must be >= 1");
    if (obs_dim_ == 0 || act_dim_ == 0) throw std::invalid_argument("DqlAgent: zero dimensions");
}

double DqlAgent::level_value(std::size_t level, std::size_t levels) {
    if (levels <= 1) return 0.0;
    return -1.0 + 2.0 * static_cast<double>(level) / static_cast<double>(levels - 1);
}

std::size_t DqlAgent::value_level(double value, std::size_t levels) {
    if (levels <= 1) return 0;
    const double raw = (value + 1.0) / 2.0 * static_cast<double>(levels - 1);
    const auto level = static_cast<std::ptrdiff_t>(std::llround(raw));
    return static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(level, 0, static_cast<std::ptrdiff_t>(levels - 1)));
}

std::vector<double> DqlAgent::select_action(std::span<const double> state, bool explore, Rng& rng) {
    if (state.size() != obs_dim_) throw std::invalid_argument("select_action: state size mismatch");
    std::vector<double> action(act_dim_, 0.0);
    if (explore) {
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        if (coin(rng) < epsilon_) {
            std::uniform_int_distribution<std::size_t> pick(0, config_.levels - 1);
            for (double& a : action) a = level_value(pick(rng), config_.levels);
            return action;
        }
    }
    const std::vector<double> q = q_.forward(state);
    for (std::size_t h = 0; h < act_dim_; ++h) {
        const double* head = q.data() + h * config_.levels;
        std::size_t best = 0;
        for (std::size_t l = 1; l < config_.levels; ++l)
            if (head[l] > head[best]) best = l;
        action[h] = level_value(best, config_.levels);
    }
    return action;
}

void DqlAgent::decay_exploration() {
    epsilon_ = std::max(config_.epsilon_floor, epsilon_ * config_.epsilon_decay);
}

UpdateStats DqlAgent::update(Rng& rng) {
    return update_with(buffer_.sample(config_.batch_size, rng));
}

UpdateStats DqlAgent::update_with(const std::vector<const Transition*>& batch) {
    const std::size_t n = batch.size();
    if (n == 0) throw std::logic_error("dql update: empty minibatch");
    const std::size_t heads = act_dim_;
    const std::size_t levels = config_.levels;
    const double scale = 1.0 / static_cast<double>(n * heads);

    std::vector<double> losses(n, 0.0);
    std::vector<double> grad_sum(q_.param_count(), 0.0);
    const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(n);

    auto dql_sample = [&](std::size_t i, std::span<double> grad_out) {
        const Transition& t = *batch[i];
        std::vector<double> next_max(heads, 0.0);
        if (!t.done) {
            const std::vector<double> qn = q_target_.forward(t.next_state);
            for (std::size_t h = 0; h < heads; ++h) {
                const double* head = qn.data() + h * levels;
                next_max[h] = *std::max_element(head, head + levels);
            }
        }
        ForwardPass pass = ForwardPass::run(q_, t.state);
        std::vector<double> out_grad(heads * levels, 0.0);
        double loss = 0.0;
        for (std::size_t h = 0; h < heads; ++h) {
            const std::size_t chosen = value_level(t.action[h], levels);
            const double y = t.reward + (t.done ? 0.0 : config_.discount * next_max[h]);
            const double error = pass.output()[h * levels + chosen] - y;
            loss += error * error;
            out_grad[h * levels + chosen] = 2.0 * error * scale;
        }
        losses[i] = loss / static_cast<double>(heads);
        backward(q_, pass, out_grad, grad_out);
    };

    if (config_.parallel_updates) {
        if (sample_grads_.size() != n)
            sample_grads_.assign(n, std::vector<double>(q_.param_count(), 0.0));
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
            const std::size_t i = static_cast<std::size_t>(ii);
            std::fill(sample_grads_[i].begin(), sample_grads_[i].end(), 0.0);
            dql_sample(i, sample_grads_[i]);
        }
        for (std::size_t i = 0; i < n; ++i) add_into(grad_sum, sample_grads_[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) dql_sample(i, grad_sum);
    }
    adam_step(q_.mutable_params(), grad_sum, adam_);
    soft_update(q_target_, q_, config_.tau);

    double loss = 0.0;
    for (double l : losses) loss += l;
    return {loss / static_cast<double>(n), 0.0};
}

void DqlAgent::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("agent checkpoint: cannot open " + path.string());
    nlohmann::json header = {{"format", "vlcirs-dql-1"},
                             {"obs_dim", obs_dim_},
                             {"act_dim", act_dim_},
                             {"epsilon", epsilon_},
                             {"config",
                              {{"lr", config_.lr},
                               {"discount", config_.discount},
                               {"tau", config_.tau},
                               {"buffer_capacity", config_.buffer_capacity},
                               {"batch_size", config_.batch_size},
                               {"epsilon_initial", config_.epsilon_initial},
                               {"epsilon_decay", config_.epsilon_decay},
                               {"epsilon_floor", config_.epsilon_floor},
                               {"levels", config_.levels},
                               {"hidden1", config_.hidden1},
                               {"hidden2", config_.hidden2}}}};
    const std::string text = header.dump();
    const std::uint64_t len = text.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    write_mlp(q_, out);
    write_mlp(q_target_, out);
    if (!out) throw std::runtime_error("agent checkpoint: write failed for " + path.string());
}

DqlAgent DqlAgent::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("agent checkpoint: cannot open " + path.string());
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    std::string text(len, '\0');
    in.read(text.data(), static_cast<std::streamsize>(len));
    if (!in) throw std::runtime_error("agent checkpoint: truncated header");
    const nlohmann::json header = nlohmann::json::parse(text);
    if (header.at("format") != "vlcirs-dql-1")
        throw std::runtime_error("agent checkpoint: unknown format");

    const nlohmann::json& j = header.at("config");
    DqlConfig config;
    config.lr = j.at("lr");
    config.discount = j.at("discount");
    config.tau = j.at("tau");
    config.buffer_capacity = j.at("buffer_capacity");
    config.batch_size = j.at("batch_size");
    config.epsilon_initial = j.at("epsilon_initial");
    config.epsilon_decay = j.at("epsilon_decay");
    config.epsilon_floor = j.at("epsilon_floor");
    config.levels = j.at("levels");
    config.hidden1 = j.at("hidden1");
    config.hidden2 = j.at("hidden2");

    DqlAgent agent(header.at("obs_dim"), header.at("act_dim"), config, 0);
    agent.epsilon_ = header.at("epsilon");
    agent.q_ = read_mlp(in);
    agent.q_target_ = read_mlp(in);
    return agent;
}

// ---------------------------------------------------------------------

std::vector<double> random_orientation_policy(std::size_t num_mirrors, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> action(2 * num_mirrors);
    for (double& a : action) a = u(rng);
    return action;
}

namespace {

double grid_value(std::uint64_t level, std::size_t levels) {
    if (levels <= 1) return 0.0;
    return -1.0 + 2.0 * static_cast<double>(level) / static_cast<double>(levels - 1);
}

// Most-significant digit first, so ascending flat index == lexicographic
// order on the level tuple (the documented tie-break).
void decode_grid_point(std::uint64_t flat, std::size_t dims, std::size_t levels,
                       std::span<const std::uint64_t> place_values, std::vector<double>& action) {
    for (std::size_t d = 0; d < dims; ++d) {
        const std::uint64_t level = (flat / place_values[d]) % levels;
        action[d] = grid_value(level, levels);
    }
}

std::uint64_t checked_grid_size(std::size_t dims, std::size_t levels, std::uint64_t budget) {
    if (levels == 0) throw std::invalid_argument("exhaustive_search: levels must be >= 1");
    std::uint64_t total = 1;
    for (std::size_t d = 0; d < dims; ++d) {
        if (total > budget / levels + 1)
            throw std::runtime_error("exhaustive_search: grid needs " + std::to_string(levels) +
                                     "^" + std::to_string(dims) +
                                     " evaluations, above the configured budget of " +
                                     std::to_string(budget));
        total *= levels;
    }
    if (total > budget)
        throw std::runtime_error("exhaustive_search: grid needs " + std::to_string(total) +
                                 " evaluations, above the configured budget of " +
                                 std::to_string(budget));
    return total;
}

double frozen_sum_rate(const Environment& env, const std::vector<double>& action) {
    const std::vector<double> rates = env.rates_for_action(action);
    return std::accumulate(rates.begin(), rates.end(), 0.0);
}

} // namespace

SearchResult exhaustive_search_serial(const Environment& env, std::size_t grid_levels,
                                      std::uint64_t max_evaluations) {
    const std::size_t dims = env.action_size();
    const std::uint64_t total = checked_grid_size(dims, grid_levels, max_evaluations);

    std::vector<std::uint64_t> place(dims, 1);
    for (std::size_t d = dims; d-- > 1;) place[d - 1] = place[d] * grid_levels;

    std::vector<double> action(dims, 0.0);
    double best_rate = -1.0;
    std::uint64_t best_index = 0;
    for (std::uint64_t g = 0; g < total; ++g) {
        decode_grid_point(g, dims, grid_levels, place, action);
        const double rate = frozen_sum_rate(env, action);
        if (rate > best_rate) {
            best_rate = rate;
            best_index = g;
        }
    }
    SearchResult result;
    result.action.resize(dims);
    decode_grid_point(best_index, dims, grid_levels, place, result.action);
    result.sum_rate_bps = best_rate;
    return result;
}

SearchResult exhaustive_search(const Environment& env, std::size_t grid_levels,
                               std::uint64_t max_evaluations, bool parallel) {
    if (!parallel) return exhaustive_search_serial(env, grid_levels, max_evaluations);
    const std::size_t dims = env.action_size();
    const std::uint64_t total = checked_grid_size(dims, grid_levels, max_evaluations);

    std::vector<std::uint64_t> place(dims, 1);
    for (std::size_t d = dims; d-- > 1;) place[d - 1] = place[d] * grid_levels;

    double best_rate = -1.0;
    std::uint64_t best_index = 0;
#pragma omp parallel
    {
        std::vector<double> action(dims, 0.0);
        double local_rate = -1.0;
        std::uint64_t local_index = 0;
        const std::int64_t n = static_cast<std::int64_t>(total);
#pragma omp for schedule(static)
        for (std::int64_t g = 0; g < n; ++g) {
            decode_grid_point(static_cast<std::uint64_t>(g), dims, grid_levels, place, action);
            const double rate = frozen_sum_rate(env, action);
            if (rate > local_rate ||
                (rate == local_rate && static_cast<std::uint64_t>(g) < local_index)) {
                local_rate = rate;
                local_index = static_cast<std::uint64_t>(g);
            }
        }
#pragma omp critical
        {
            if (local_rate > best_rate || (local_rate == best_rate && local_index < best_index)) {
                best_rate = local_rate;
                best_index = local_index;
            }
        }
    }
    SearchResult result;
    result.action.resize(dims);
    decode_grid_point(best_index, dims, grid_levels, place, result.action);
    result.sum_rate_bps = best_rate;
    return result;
}

// ---------------------------------------------------------------------

namespace {

template <typename AgentT>
TrainReport train_impl(AgentT& agent, Environment& env, std::size_t episodes, Rng& rng) {
    using clock = std::chrono::steady_clock;
    TrainReport report;
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        std::vector<double> obs = env.reset();
        double rate_sum = 0.0;
        double reward_sum = 0.0;
        double loss_sum = 0.0;
        double violation_sum = 0.0;
        double latency_sum = 0.0;
        std::size_t steps = 0;
        std::size_t updates = 0;

        for (std::size_t t = 0; t < env.config().episode_steps; ++t) {
            const auto t0 = clock::now();
            std::vector<double> action = agent.select_action(obs, true, rng);
            latency_sum += std::chrono::duration<double>(clock::now() - t0).count();

            StepOutcome out = env.step(action);
            agent.observe({obs, action, out.reward, out.observation, out.done});
            if (agent.ready()) {
                const UpdateStats stats = agent.update(rng);
                loss_sum += stats.critic_loss;
                ++updates;
            }
            rate_sum += std::accumulate(out.per_user_rates.begin(), out.per_user_rates.end(), 0.0);
            reward_sum += out.reward;
            violation_sum += static_cast<double>(out.qos_violations);
            obs = std::move(out.observation);
            ++steps;
            if (out.done) break;
        }
        agent.decay_exploration();

        const double inv_steps = steps > 0 ? 1.0 / static_cast<double>(steps) : 0.0;
        report.episode_sum_rate_bps.push_back(rate_sum * inv_steps);
        report.episode_reward.push_back(reward_sum * inv_steps);
        report.episode_critic_loss.push_back(updates > 0 ? loss_sum / static_cast<double>(updates)
                                                         : 0.0);
        report.episode_qos_violations.push_back(violation_sum * inv_steps);
        report.episode_decision_latency_s.push_back(latency_sum * inv_steps);
    }
    return report;
}

} // namespace

TrainReport train(DdpgAgent& agent, Environment& env, std::size_t episodes, Rng& rng) {
    return train_impl(agent, env, episodes, rng);
}

TrainReport train(DqlAgent& agent, Environment& env, std::size_t episodes, Rng& rng) {
    return train_impl(agent, env, episodes, rng);
}

} // namespace vlcirs
