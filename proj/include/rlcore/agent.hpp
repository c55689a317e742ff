#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rlcore/network.hpp"
#include "rlcore/replay.hpp"

namespace rlcore {

enum class Algo { SAC, TD3, DDPG };

const char* to_string(Algo a);

struct Td3Params {
    double policy_noise = 0.2;
    double noise_clip = 0.5;
    int policy_delay = 2;
    double exploration_noise = 0.1; // also used by DDPG acting
    bool operator==(const Td3Params&) const = default;
};

/// Every hyperparameter in one explicit record. Topology templates carry
/// kind / hidden_dim / num_hidden_layers; input and action dims are bound
/// when the agent is constructed against a concrete environment.
struct AgentConfig {
    Algo algo = Algo::SAC;
    double lr_actor = 3e-4;
    double lr_critic = 3e-4;
    double lr_alpha = 1e-4;
    int batch_size = 256;
    double gamma = 0.99;
    double tau = 0.005;
    double initial_temperature = 0.1;
    // NaN means automatic: -action_dim.
    double target_entropy = std::numeric_limits<double>::quiet_NaN();
    bool learn_alpha = true;
    bool single_critic = false;
    NetworkTopology policy_topology{TopologyKind::Dense, 0, 256, 4, HeadKind::PolicyGaussian, 0};
    NetworkTopology critic_topology{TopologyKind::Dense, 0, 256, 4, HeadKind::QScalar, 0};
    Td3Params td3;
    int warmup_steps = 1000;
    int eval_interval = 1000;
    int eval_episodes = 10;
    std::size_t replay_capacity = 100000;
    bool use_her = false;
    int her_k = 4;

    void validate() const;
    bool operator==(const AgentConfig& o) const;
};

/// Named scalars surfaced to the harness after each update.
struct Losses {
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    double alpha = 0.0;
    double q_mean = 0.0;
};

struct Agent {
    Algo algo = Algo::SAC;
    int obs_dim = 0;
    int action_dim = 0;
    Network policy;
    std::vector<Network> critics;
    std::vector<Network> target_critics;
    std::optional<Network> target_policy; // TD3 / DDPG only
    double log_alpha = 0.0;
    bool learn_alpha = true;
    double fixed_alpha = 0.0;
    double alpha_m = 0.0, alpha_v = 0.0; // Adam state of log_alpha
    long alpha_t = 0;
    double target_entropy = 0.0;
    long update_count = 0;
    double last_actor_loss = 0.0;

    double alpha() const;
    /// Deterministic evaluation action in [-1,1]^action_dim: tanh(mean).
    Tensor2D act_deterministic(const Tensor2D& obs);
    /// Stochastic action for environment interaction (SAC samples the policy;
    /// TD3/DDPG add clipped Gaussian exploration noise to tanh(mean)).
    Tensor2D act_stochastic(const Tensor2D& obs, const Td3Params& td3, Rng& rng);
};

/// Builds policy/critic/target networks per the config. Target parameters
/// equal online parameters exactly after construction.
Agent make_agent(const AgentConfig& cfg, int obs_dim, int action_dim, Rng& rng);

/// r + gamma * next_q * (1 - done).
double td_target(double reward, bool done, double next_q, double gamma);

Losses sac_update(Agent& agent, const Batch& batch, const AgentConfig& cfg, Rng& rng);
Losses td3_update(Agent& agent, const Batch& batch, const AgentConfig& cfg, Rng& rng);
Losses ddpg_update(Agent& agent, const Batch& batch, const AgentConfig& cfg, Rng& rng);
/// Dispatch on cfg.algo.
Losses agent_update(Agent& agent, const Batch& batch, const AgentConfig& cfg, Rng& rng);

/// Sparse goal reward: maps (achieved, desired) to a scalar; 0 means success.
using GoalRewardFn = std::function<double(const std::vector<double>&, const std::vector<double>&)>;

/// Hindsight relabeling, "future" strategy: emits the original transitions
/// plus k copies per transition whose desired goal is the achieved goal of a
/// uniformly drawn later transition of the same episode; the final transition
/// (which has no future) gets a single copy relabeled with its own achieved
/// goal. Rewards and done flags are recomputed with reward_fn, and the goal
/// slice (the trailing goal_dim entries) of state and next_state is rewritten.
std::vector<Transition> her_relabel(const std::vector<Transition>& episode, int k, Rng& rng,
                                    const GoalRewardFn& reward_fn);

// Checkpoint round trip: policy + critics + log_alpha + a meta tensor that
// records dims and topology so the agent can be rebuilt from the file alone.
void save_agent_checkpoint(const std::string& path, const Agent& agent);
Agent load_agent_checkpoint(const std::string& path);

} // namespace rlcore
