// SPDX-License-Identifier: Apache-2.0
//
// Command-line runner: train an agent, evaluate policies, run sweeps and
// reproduce the figure presets. All outputs are CSV; wall-clock timing
// goes to separate *_timing.csv files so the metric files are
// byte-reproducible for a fixed seed.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vlcirs/config.hpp"
#include "vlcirs/csv.hpp"
#include "vlcirs/harness.hpp"

namespace {

using namespace vlcirs;

SimConfig load_or_default(const std::string& config_path) {
    if (config_path.empty()) return default_sim_config();
    return load_sim_config(config_path);
}

void write_train_csv(const TrainReport& report, const std::filesystem::path& dir, bool timing) {
    CsvWriter csv({"episode", "sum_rate_bps", "reward", "critic_loss", "qos_violations"});
    for (std::size_t ep = 0; ep < report.episodes(); ++ep) {
        csv.add_row({std::to_string(ep), format_double(report.episode_sum_rate_bps[ep]),
                     format_double(report.episode_reward[ep]),
                     format_double(report.episode_critic_loss[ep]),
                     format_double(report.episode_qos_violations[ep])});
    }
    csv.write(dir / "train.csv");
    if (timing) {
        CsvWriter t({"episode", "decision_latency_s"});
        for (std::size_t ep = 0; ep < report.episodes(); ++ep)
            t.add_row({std::to_string(ep), format_double(report.episode_decision_latency_s[ep])});
        t.write(dir / "train_timing.csv");
    }
}

std::vector<std::pair<std::size_t, std::size_t>> parse_irs_sizes(const std::vector<std::string>& items) {
    std::vector<std::pair<std::size_t, std::size_t>> sizes;
    for (const std::string& item : items) {
        const std::size_t sep = item.find('x');
        if (sep == std::string::npos)
            throw ConfigError("irs: expected ROWSxCOLS, got '" + item + "'");
        sizes.emplace_back(std::stoul(item.substr(0, sep)), std::stoul(item.substr(sep + 1)));
    }
    return sizes;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mirror-array IRS VLC simulator and policy trainer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::uint64_t> seeds{1};
    std::size_t episodes = 120;
    std::size_t horizon = 500;
    std::size_t workers = 1;
    bool no_timing = false;

    auto add_common = [&](CLI::App* cmd, bool with_episodes) {
        cmd->add_option("--config", config_path, "JSON config file (defaults used when omitted)");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seeds", seeds, "seed list")->delimiter(',');
        if (with_episodes) cmd->add_option("--episodes", episodes, "training episodes");
        cmd->add_option("--horizon", horizon, "evaluation horizon in steps");
        cmd->add_flag("--no-timing", no_timing, "skip wall-clock timing CSVs");
    };

    // --- train
    auto* train_cmd = app.add_subcommand("train", "train one agent and export the training curve");
    std::string train_algorithm = "ddpg";
    std::string checkpoint_path;
    add_common(train_cmd, true);
    train_cmd->add_option("--algorithm", train_algorithm, "ddpg or dql");
    train_cmd->add_option("--checkpoint", checkpoint_path, "write the trained agent here");

    // --- eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a policy with exploration off");
    std::string eval_algorithm = "random";
    std::string load_path;
    std::string trace_path;
    add_common(eval_cmd, true);
    eval_cmd->add_option("--algorithm", eval_algorithm, "ddpg, dql or random");
    eval_cmd->add_option("--load", load_path, "agent checkpoint (skips training)");
    eval_cmd->add_option("--trace", trace_path, "also write an episode trace CSV");

    // --- sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "train/evaluate across scenario axes");
    std::string sweep_algorithm = "ddpg";
    std::vector<double> powers;
    std::vector<std::size_t> blockages;
    std::vector<std::string> irs_items;
    std::vector<double> velocities;
    bool train_curves = false;
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--algorithm", sweep_algorithm, "ddpg, dql or random");
    sweep_cmd->add_option("--powers", powers, "transmit powers in W")->delimiter(',');
    sweep_cmd->add_option("--blockages", blockages, "blockage counts")->delimiter(',');
    sweep_cmd->add_option("--irs", irs_items, "array sizes, e.g. 7x7,10x10")->delimiter(',');
    sweep_cmd->add_option("--velocities", velocities, "fixed user speeds in m/s")->delimiter(',');
    sweep_cmd->add_option("--workers", workers, "parallel sweep workers");
    sweep_cmd->add_flag("--train-curves", train_curves, "write per-task training curves");

    // --- preset
    auto* preset_cmd = app.add_subcommand("preset", "reproduce a figure scenario end to end");
    std::string preset_name;
    preset_cmd->add_option("name", preset_name, "fig3, fig4 or fig5")->required();
    add_common(preset_cmd, true);
    preset_cmd->add_option("--workers", workers, "parallel workers");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd) {
            const SimConfig sim = load_or_default(config_path);
            std::filesystem::create_directories(out_dir);
            if (seeds.empty()) throw ConfigError("seeds: must not be empty");
            const std::uint64_t seed = seeds.front();
            const Scene scene = build_scene(sim.scene);
            Environment env(scene, sim.env, seed);
            Rng rng(seed ^ 0x2545f4914f6cdd1dULL);
            TrainReport report;
            if (train_algorithm == "ddpg") {
                DdpgAgent agent(env.observation_size(), env.action_size(), sim.ddpg,
                                seed ^ 0xd6e8feb86659fd93ULL);
                report = train(agent, env, episodes, rng);
                if (!checkpoint_path.empty()) agent.save(checkpoint_path);
            } else if (train_algorithm == "dql") {
                DqlAgent agent(env.observation_size(), env.action_size(), sim.dql,
                               seed ^ 0xd6e8feb86659fd93ULL);
                report = train(agent, env, episodes, rng);
                if (!checkpoint_path.empty()) agent.save(checkpoint_path);
            } else {
                throw ConfigError("algorithm: train expects 'ddpg' or 'dql'");
            }
            write_train_csv(report, out_dir, !no_timing);
            std::cout << "train: wrote " << (std::filesystem::path(out_dir) / "train.csv").string()
                      << "\n";
        } else if (*eval_cmd) {
            const SimConfig sim = load_or_default(config_path);
            std::filesystem::create_directories(out_dir);
            const Scene scene = build_scene(sim.scene);
            Environment env(scene, sim.env, seeds.empty() ? 1 : seeds.front());

            std::unique_ptr<DdpgAgent> ddpg;
            std::unique_ptr<DqlAgent> dql;
            std::unique_ptr<EvalPolicy> policy;
            if (eval_algorithm == "random") {
                policy = std::make_unique<RandomOrientationEvalPolicy>(scene.mirror_count());
            } else if (eval_algorithm == "ddpg") {
                if (load_path.empty()) throw ConfigError("eval: ddpg needs --load CHECKPOINT");
                ddpg = std::make_unique<DdpgAgent>(DdpgAgent::load(load_path));
                policy = std::make_unique<DdpgEvalPolicy>(*ddpg);
            } else if (eval_algorithm == "dql") {
                if (load_path.empty()) throw ConfigError("eval: dql needs --load CHECKPOINT");
                dql = std::make_unique<DqlAgent>(DqlAgent::load(load_path));
                policy = std::make_unique<DqlEvalPolicy>(*dql);
            } else {
                throw ConfigError("algorithm: expected 'ddpg', 'dql' or 'random'");
            }

            const EvalMetrics metrics = evaluate_policy(*policy, env, horizon, seeds);
            CsvWriter csv({"metric", "mean", "std"});
            csv.add_row({"sum_rate_bps", format_double(metrics.mean_sum_rate_bps),
                         format_double(metrics.std_sum_rate_bps)});
            csv.add_row({"ber", format_double(metrics.mean_ber), format_double(metrics.std_ber)});
            csv.add_row({"reward", format_double(metrics.mean_reward),
                         format_double(metrics.std_reward)});
            csv.add_row({"qos_violation_fraction",
                         format_double(metrics.mean_qos_violation_fraction),
                         format_double(metrics.std_qos_violation_fraction)});
            csv.write(std::filesystem::path(out_dir) / "eval.csv");
            if (!no_timing) {
                CsvWriter t({"metric", "mean"});
                t.add_row({"latency_s", format_double(metrics.mean_latency_s)});
                t.write(std::filesystem::path(out_dir) / "eval_timing.csv");
            }
            if (!trace_path.empty())
                write_episode_trace(env, *policy, 1, seeds.empty() ? 1 : seeds.front(), trace_path);
            std::cout << "eval: mean sum rate " << metrics.mean_sum_rate_bps << " bps, mean BER "
                      << metrics.mean_ber << "\n";
        } else if (*sweep_cmd) {
            ExperimentConfig config;
            config.sim = load_or_default(config_path);
            config.algorithm = sweep_algorithm;
            config.seeds = seeds;
            config.train_episodes = episodes;
            config.eval_horizon = horizon;
            config.power_sweep_w = powers;
            config.blockage_sweep = blockages;
            config.irs_sweep = parse_irs_sizes(irs_items);
            config.velocity_sweep_mps = velocities;
            config.output_dir = out_dir;
            config.workers = workers;
            config.write_timing = !no_timing;
            config.write_train_curves = train_curves;
            run_experiment(config);
            std::cout << "sweep: wrote " << (config.output_dir / "results.csv").string() << "\n";
        } else if (*preset_cmd) {
            PresetOptions options;
            options.output_dir = out_dir;
            options.episodes = episodes;
            options.eval_horizon = horizon;
            options.seeds = seeds;
            options.workers = workers;
            options.write_timing = !no_timing;
            if (preset_name == "fig3")
                run_preset_fig3(options);
            else if (preset_name == "fig4")
                run_preset_fig4(options);
            else if (preset_name == "fig5")
                run_preset_fig5(options);
            else
                throw ConfigError("preset: expected fig3, fig4 or fig5");
            std::cout << "preset " << preset_name << ": wrote CSVs under " << out_dir << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
