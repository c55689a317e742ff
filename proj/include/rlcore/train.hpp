#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rlcore/agent.hpp"
#include "rlcore/env.hpp"

namespace rlcore {

/// One evaluation point of a run. success_rate is meaningful only for
/// goal-conditioned environments (fraction of eval episodes reaching the
/// goal); it is kept in memory but not part of the CSV row format.
struct CurveRow {
    long env_step = 0;
    double eval_return_mean = 0.0;
    double eval_return_sd = 0.0;
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    double alpha = 0.0;
    double wall_ms = 0.0;
    double success_rate = 0.0;
};

struct LearningCurve {
    std::vector<CurveRow> rows;
};

struct TrainSinks {
    std::function<void(const CurveRow&)> on_eval;
    std::function<void(const Agent&, long step, bool final)> on_checkpoint;
};

struct EvalStats {
    double mean = 0.0;
    double sd = 0.0;
    double success_rate = 0.0;
};

/// Maps a normalized action in [-1,1]^d onto the environment's bounds.
std::vector<double> scale_action(const Tensor2D& normalized, const EnvSpec& spec);

/// Deterministic evaluation protocol: fixed per-episode seeds derived from
/// run_seed, actions tanh(mean). The policy is snapshotted through 32-bit
/// floats first, so results agree exactly with evaluating a saved checkpoint.
EvalStats evaluate_policy(const Env& env_proto, const Network& policy, int episodes,
                          std::uint64_t run_seed);

/// Off-policy training loop: act (uniformly random during warmup, stochastic
/// policy afterwards), store, one gradient update per environment step after
/// warmup, deterministic evaluation every eval_interval steps. Time-limit
/// truncations are stored with done = false. Goal-conditioned envs with
/// cfg.use_her get "future"-strategy relabeling at episode boundaries.
LearningCurve train(Env& env, Agent& agent, const AgentConfig& cfg, long total_steps,
                    std::uint64_t run_seed, Rng& agent_rng, const TrainSinks& sinks = {});

struct TrainResult {
    LearningCurve curve;
    Agent agent;
};

/// Builds env + agent from the seed protocol (seed -> init stream and
/// training stream) and runs the loop. The standard entry point used by the
/// CLI, the sweep runner and the acceptance suite.
TrainResult run_training(const std::string& env_name, const AgentConfig& cfg, long total_steps,
                         std::uint64_t seed, const TrainSinks& sinks = {});

/// Mean evaluation return over the last `window` evaluation points.
double final_window_return(const LearningCurve& curve, int window = 5);
double final_window_success(const LearningCurve& curve, int window = 5);

} // namespace rlcore
