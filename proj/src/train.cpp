#include "rlcore/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace rlcore {

namespace {
constexpr std::uint64_t kEnvStream = 0x45; // episode reset seeds
constexpr std::uint64_t kEvalStream = 0x57;
constexpr std::uint64_t kInitStream = 0;   // weight init
constexpr std::uint64_t kAgentStream = 1;  // action/replay/noise draws
} // namespace

std::vector<double> scale_action(const Tensor2D& normalized, const EnvSpec& spec) {
    if (normalized.cols != spec.action_dim)
        throw DimensionError("scale_action: action dim mismatch");
    std::vector<double> a(spec.action_dim);
    for (int c = 0; c < spec.action_dim; ++c) {
        const double t = 0.5 * (normalized.at(0, c) + 1.0);
        a[c] = spec.action_low[c] + t * (spec.action_high[c] - spec.action_low[c]);
    }
    return a;
}

EvalStats evaluate_policy(const Env& env_proto, const Network& policy, int episodes,
                          std::uint64_t run_seed) {
    if (episodes < 1) throw DimensionError("evaluate_policy: episodes must be >= 1");
    Network snapshot = quantize_f32(policy);
    std::unique_ptr<Env> env = env_proto.clone();
    const EnvSpec& spec = env->spec();

    std::vector<double> returns(episodes, 0.0);
    int successes = 0;
    for (int e = 0; e < episodes; ++e) {
        std::vector<double> obs = env->reset(derive_seed(run_seed, kEvalStream, e));
        bool finished = false;
        while (!finished) {
            Tensor2D obs_t(1, spec.obs_dim);
            for (int c = 0; c < spec.obs_dim; ++c) obs_t.at(0, c) = obs[c];
            PolicyOutput po = snapshot.forward_policy(obs_t);
            Tensor2D a = deterministic_action(po.mean);
            StepResult sr = env->step(scale_action(a, spec));
            returns[e] += sr.reward;
            obs = sr.obs;
            if (sr.done) successes += 1;
            finished = sr.done || sr.truncated;
        }
    }
    EvalStats stats;
    for (double r : returns) stats.mean += r / episodes;
    double var = 0.0;
    for (double r : returns) var += (r - stats.mean) * (r - stats.mean) / episodes;
    stats.sd = std::sqrt(var);
    stats.success_rate = static_cast<double>(successes) / episodes;
    return stats;
}

LearningCurve train(Env& env, Agent& agent, const AgentConfig& cfg, long total_steps,
                    std::uint64_t run_seed, Rng& agent_rng, const TrainSinks& sinks) {
    cfg.validate();
    const EnvSpec& spec = env.spec();
    if (spec.obs_dim != agent.obs_dim || spec.action_dim != agent.action_dim)
        throw DimensionError("train: env and agent dims disagree");
    const bool her = cfg.use_her && spec.goal_dim > 0;

    ReplayBuffer buffer(cfg.replay_capacity);
    LearningCurve curve;
    std::vector<Transition> episode;

    const auto t0 = std::chrono::steady_clock::now();
    double critic_loss_sum = 0.0, actor_loss_sum = 0.0;
    long loss_count = 0;

    std::uint64_t episode_idx = 0;
    std::vector<double> obs = env.reset(derive_seed(run_seed, kEnvStream, episode_idx));

    for (long step = 1; step <= total_steps; ++step) {
        Tensor2D a_norm(1, spec.action_dim);
        if (step <= cfg.warmup_steps) {
            for (int c = 0; c < spec.action_dim; ++c) a_norm.at(0, c) = agent_rng.uniform(-1.0, 1.0);
        } else {
            Tensor2D obs_t(1, spec.obs_dim);
            for (int c = 0; c < spec.obs_dim; ++c) obs_t.at(0, c) = obs[c];
            a_norm = agent.act_stochastic(obs_t, cfg.td3, agent_rng);
        }

        StepResult sr = env.step(scale_action(a_norm, spec));

        Transition tr;
        tr.state = obs;
        tr.action.assign(a_norm.data.begin(), a_norm.data.end());
        tr.reward = sr.reward;
        tr.next_state = sr.obs;
        tr.done = sr.done;
        if (spec.goal_dim > 0) {
            tr.achieved_goal = sr.achieved_goal;
            tr.desired_goal = env.desired_goal();
        }
        if (her) {
            episode.push_back(std::move(tr));
        } else {
            buffer.push(std::move(tr));
        }

        if (step > cfg.warmup_steps && buffer.size() > 0) {
            Batch batch = buffer.sample(cfg.batch_size, agent_rng);
            Losses l = agent_update(agent, batch, cfg, agent_rng);
            critic_loss_sum += l.critic_loss;
            actor_loss_sum += l.actor_loss;
            loss_count += 1;
        }

        if (sr.done || sr.truncated) {
            if (her) {
                auto relabeled = her_relabel(
                    episode, cfg.her_k, agent_rng,
                    [&env](const std::vector<double>& a, const std::vector<double>& d) {
                        return env.goal_reward(a, d);
                    });
                for (auto& t : relabeled) buffer.push(std::move(t));
                episode.clear();
            }
            episode_idx += 1;
            obs = env.reset(derive_seed(run_seed, kEnvStream, episode_idx));
        } else {
            obs = sr.obs;
        }

        if (step % cfg.eval_interval == 0) {
            EvalStats stats = evaluate_policy(env, agent.policy, cfg.eval_episodes, run_seed);
            CurveRow row;
            row.env_step = step;
            row.eval_return_mean = stats.mean;
            row.eval_return_sd = stats.sd;
            row.success_rate = stats.success_rate;
            row.critic_loss = loss_count > 0 ? critic_loss_sum / loss_count : 0.0;
            row.actor_loss = loss_count > 0 ? actor_loss_sum / loss_count : 0.0;
            row.alpha = agent.alpha();
            row.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
            curve.rows.push_back(row);
            if (sinks.on_eval) sinks.on_eval(row);
            if (sinks.on_checkpoint) sinks.on_checkpoint(agent, step, false);
            critic_loss_sum = actor_loss_sum = 0.0;
            loss_count = 0;
        }
    }
    if (sinks.on_checkpoint) sinks.on_checkpoint(agent, total_steps, true);
    return curve;
}

TrainResult run_training(const std::string& env_name, const AgentConfig& cfg, long total_steps,
                         std::uint64_t seed, const TrainSinks& sinks) {
    std::unique_ptr<Env> env = make_env(env_name);
    Rng root(seed);
    Rng init_rng = root.split(kInitStream);
    Agent agent = make_agent(cfg, env->spec().obs_dim, env->spec().action_dim, init_rng);
    Rng agent_rng = root.split(kAgentStream);
    TrainResult result;
    result.curve = train(*env, agent, cfg, total_steps, seed, agent_rng, sinks);
    result.agent = std::move(agent);
    return result;
}

namespace {
double final_window_stat(const LearningCurve& curve, int window,
                         double (*pick)(const CurveRow&)) {
    if (curve.rows.empty()) throw DimensionError("final_window: empty curve");
    const int n = static_cast<int>(curve.rows.size());
    const int w = std::min(window, n);
    double sum = 0.0;
    for (int i = n - w; i < n; ++i) sum += pick(curve.rows[i]);
    return sum / w;
}
} // namespace

double final_window_return(const LearningCurve& curve, int window) {
    return final_window_stat(curve, window,
                             [](const CurveRow& r) { return r.eval_return_mean; });
}

double final_window_success(const LearningCurve& curve, int window) {
    return final_window_stat(curve, window, [](const CurveRow& r) { return r.success_rate; });
}

} // namespace rlcore
