#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "rlcore/config.hpp"
#include "rlcore/csv.hpp"
#include "rlcore/probe.hpp"
#include "rlcore/sweep.hpp"
#include "rlcore/train.hpp"

namespace fs = std::filesystem;
using namespace rlcore;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << text;
}

RunConfig load_run_config(const std::string& config_path, std::uint64_t* seed_override,
                          std::string* out_override, long* steps_override) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config_file(config_path);
    if (seed_override) cfg.seed = *seed_override;
    if (out_override) cfg.out_dir = *out_override;
    if (steps_override) {
        cfg.total_steps = *steps_override;
        cfg.validate();
    }
    return cfg;
}

int cmd_train(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const std::string resolved = resolved_config_text(cfg);
    std::cout << "# resolved configuration\n" << resolved;
    write_text(fs::path(cfg.out_dir) / "config.resolved", resolved);

    std::ofstream curve_os(fs::path(cfg.out_dir) / "curve.csv");
    if (!curve_os) throw IoError("cannot open curve.csv for writing");
    curve_os << kCurveCsvHeader << '\n';

    TrainSinks sinks;
    sinks.on_eval = [&](const CurveRow& row) {
        curve_os << curve_row_to_csv(row) << '\n';
        curve_os.flush();
        std::cout << "step " << row.env_step << "  return " << row.eval_return_mean
                  << " +- " << row.eval_return_sd << "  critic_loss " << row.critic_loss
                  << "  alpha " << row.alpha << '\n';
    };
    sinks.on_checkpoint = [&](const Agent& agent, long, bool final) {
        save_agent_checkpoint((fs::path(cfg.out_dir) / "last.ckpt").string(), agent);
        if (final) save_agent_checkpoint((fs::path(cfg.out_dir) / "final.ckpt").string(), agent);
    };

    run_training(cfg.env, cfg.agent_config(), cfg.total_steps, cfg.seed, sinks);
    std::cout << "wrote " << (fs::path(cfg.out_dir) / "curve.csv").string() << '\n';
    return kExitOk;
}

int cmd_eval(const std::string& checkpoint, const std::string& env_name, int episodes,
             std::uint64_t seed) {
    Agent agent = load_agent_checkpoint(checkpoint);
    std::unique_ptr<Env> env = make_env(env_name);
    if (env->spec().obs_dim != agent.obs_dim || env->spec().action_dim != agent.action_dim)
        throw DimensionError("checkpoint dims (" + std::to_string(agent.obs_dim) + "," +
                             std::to_string(agent.action_dim) + ") do not match env '" +
                             env_name + "'");
    EvalStats stats = evaluate_policy(*env, agent.policy, episodes, seed);
    std::cout << "episodes " << episodes << "  return " << stats.mean << " +- " << stats.sd;
    if (env->spec().goal_dim > 0) std::cout << "  success_rate " << stats.success_rate;
    std::cout << '\n';
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.sweep_axis.empty())
        throw ConfigError("sweep requires sweep_axis/sweep_values/sweep_seeds in the config");
    fs::create_directories(cfg.out_dir);
    const std::string resolved = resolved_config_text(cfg);
    std::cout << "# resolved configuration\n" << resolved;
    write_text(fs::path(cfg.out_dir) / "config.resolved", resolved);

    SweepSpec spec;
    spec.base = cfg.agent_config();
    spec.env_name = cfg.env;
    spec.total_steps = cfg.total_steps;
    spec.axis = parse_sweep_axis(cfg.sweep_axis);
    spec.values = cfg.sweep_values;
    spec.seeds = cfg.sweep_seeds;
    spec.workers = cfg.sweep_workers;
    spec.on_progress = [&](const SweepRun& run) {
        std::cout << "done: " << cfg.sweep_axis << "=" << run.axis_value << " seed " << run.seed
                  << "  final_return " << run.final_return << std::endl;
    };

    SweepResult result = run_sweep(spec, [&](const SweepRun& run) {
        const fs::path dir = fs::path(cfg.out_dir) / (cfg.sweep_axis + "=" + run.axis_value) /
                             ("seed" + std::to_string(run.seed));
        fs::create_directories(dir);
        write_curve_csv((dir / "curve.csv").string(), run.curve);
        std::cout << cfg.sweep_axis << "=" << run.axis_value << " seed " << run.seed
                  << "  final_return " << run.final_return << '\n';
    });

    std::ofstream agg(fs::path(cfg.out_dir) / "aggregate.csv");
    if (!agg) throw IoError("cannot open aggregate.csv for writing");
    agg << kAggregateCsvHeader << '\n';
    for (const AggregateRow& row : result.aggregates) {
        agg << csv_escape(row.axis_value) << ',' << format_double(row.final_return_mean) << ','
            << format_double(row.final_return_sd) << ',' << row.num_seeds << '\n';
        std::cout << row.axis_value << ": " << row.final_return_mean << " +- "
                  << row.final_return_sd << " (" << row.num_seeds << " seeds)\n";
    }
    return kExitOk;
}

int cmd_probe(const std::string& checkpoint, const std::string& env_name, int samples,
              std::uint64_t seed, const std::string& out_dir) {
    Agent agent = load_agent_checkpoint(checkpoint);
    std::unique_ptr<Env> env = make_env(env_name);
    const EnvSpec& spec = env->spec();
    if (spec.obs_dim != agent.obs_dim || spec.action_dim != agent.action_dim)
        throw DimensionError("checkpoint dims do not match env '" + env_name + "'");

    const NetworkTopology& topo = agent.policy.topology();
    int max_width = topo.hidden_dim;
    if (topo.kind == TopologyKind::Dense && topo.num_hidden_layers > 1)
        max_width += topo.input_dim;
    if (samples <= 0) samples = 10 * max_width;

    // observations gathered with a random policy
    Tensor2D inputs(samples, spec.obs_dim);
    Rng rng(seed);
    std::vector<double> obs = env->reset(rng.next_u64());
    for (int s = 0; s < samples; ++s) {
        for (int c = 0; c < spec.obs_dim; ++c) inputs.at(s, c) = obs[c];
        Tensor2D a(1, spec.action_dim);
        for (int c = 0; c < spec.action_dim; ++c) a.at(0, c) = rng.uniform(-1.0, 1.0);
        StepResult sr = env->step(scale_action(a, spec));
        obs = (sr.done || sr.truncated) ? env->reset(rng.next_u64()) : sr.obs;
    }

    ProbeReport report = input_probe(agent.policy, inputs);

    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / "probe.csv");
    if (!os) throw IoError("cannot open probe.csv for writing");
    os << "layer,representation,mse,r2,samples\n";
    for (const ProbeRow& row : report.rows) {
        os << row.layer << ',' << (row.concat_with_input ? "hidden_concat_input" : "hidden")
           << ',' << format_double(row.mse) << ',' << format_double(row.r2) << ','
           << row.samples << '\n';
        std::cout << "layer " << row.layer
                  << (row.concat_with_input ? " (h||x)" : "        ") << "  r2 " << row.r2
                  << "  mse " << row.mse << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-control RL harness: interchangeable MLP topologies "
                 "(vanilla, dense, residual) for SAC / TD3 / DDPG"};
    app.require_subcommand(1);

    std::string config_path, out_dir, checkpoint, env_name = "pendulum";
    std::uint64_t seed = 0;
    long steps = 0;
    int episodes = 10, samples = 0;
    bool seed_set = false, out_set = false, steps_set = false;

    CLI::App* train = app.add_subcommand("train", "train one agent, write curve.csv + checkpoints");
    train->add_option("--config", config_path, "key = value config file");
    train->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) { seed_set = true; });
    train->add_option("--out", out_dir, "override the output directory")->each([&](const std::string&) { out_set = true; });
    train->add_option("--steps", steps, "override total env steps")->each([&](const std::string&) { steps_set = true; });

    CLI::App* eval = app.add_subcommand("eval", "deterministic evaluation of a checkpoint");
    eval->add_option("--checkpoint", checkpoint, "checkpoint path")->required();
    eval->add_option("--env", env_name, "environment name")->required();
    eval->add_option("--episodes", episodes, "evaluation episodes");
    eval->add_option("--seed", seed, "evaluation seed protocol base")->default_val(1);

    CLI::App* sweep = app.add_subcommand("sweep", "run an axis x seeds grid, write aggregate.csv");
    sweep->add_option("--config", config_path, "config with sweep_axis/sweep_values/sweep_seeds")
        ->required();
    sweep->add_option("--out", out_dir, "override the output directory")->each([&](const std::string&) { out_set = true; });
    sweep->add_option("--steps", steps, "override total env steps")->each([&](const std::string&) { steps_set = true; });

    CLI::App* probe = app.add_subcommand("probe", "input-reconstruction probe of a checkpoint's policy");
    probe->add_option("--checkpoint", checkpoint, "checkpoint path")->required();
    probe->add_option("--env", env_name, "environment name")->required();
    probe->add_option("--samples", samples, "probe sample count (default 10x widest layer)");
    probe->add_option("--seed", seed, "seed for the sampling rollout")->default_val(1);
    probe->add_option("--out", out_dir, "output directory for probe.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (train->parsed()) {
            RunConfig cfg = load_run_config(config_path, seed_set ? &seed : nullptr,
                                            out_set ? &out_dir : nullptr,
                                            steps_set ? &steps : nullptr);
            return cmd_train(cfg);
        }
        if (eval->parsed()) return cmd_eval(checkpoint, env_name, episodes, seed);
        if (sweep->parsed()) {
            RunConfig cfg = load_run_config(config_path, nullptr, out_set ? &out_dir : nullptr,
                                            steps_set ? &steps : nullptr);
            return cmd_sweep(cfg);
        }
        if (probe->parsed())
            return cmd_probe(checkpoint, env_name, samples, seed,
                             out_dir.empty() ? "." : out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
