#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlcore/agent.hpp"

namespace rlcore {

TopologyKind parse_topology_kind(const std::string& s);
Algo parse_algo(const std::string& s);

/// Fully resolved run configuration. Flat key = value text format, one key
/// per line, '#' comments; unknown and duplicate keys are rejected; every
/// key has a documented default. Per-network arch/layers keys default to the
/// shared arch/num_layers values.
struct RunConfig {
    std::string env = "pendulum";
    Algo algo = Algo::SAC;
    std::uint64_t seed = 1;
    long total_steps = 30000;
    std::string out_dir = "out";

    TopologyKind arch = TopologyKind::Dense;
    TopologyKind policy_arch = TopologyKind::Dense;
    TopologyKind critic_arch = TopologyKind::Dense;
    int num_layers = 4;
    int policy_layers = 4;
    int critic_layers = 4;
    int hidden_dim = 256;

    double lr_actor = 3e-4;
    double lr_critic = 3e-4;
    double lr_alpha = 1e-4;
    int batch_size = 256;
    double gamma = 0.99;
    double tau = 0.005;
    double initial_temperature = 0.1;
    double target_entropy = std::numeric_limits<double>::quiet_NaN(); // "auto"
    bool learn_alpha = true;
    bool single_critic = false;
    double policy_noise = 0.2;
    double noise_clip = 0.5;
    int policy_delay = 2;
    double exploration_noise = 0.1;
    int warmup_steps = 1000;
    int eval_interval = 1000;
    int eval_episodes = 10;
    long replay_capacity = 100000;
    bool use_her = false;
    int her_k = 4;

    // sweep section; sweep_axis empty means "not a sweep config"
    std::string sweep_axis;
    std::vector<std::string> sweep_values;
    std::vector<std::uint64_t> sweep_seeds;
    int sweep_workers = 0; // 0 = hardware concurrency

    AgentConfig agent_config() const;
    void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical echo of the resolved config; re-parsing it reproduces the same
/// RunConfig. Doubles carry full precision; automatic target entropy prints
/// as "auto". Sweep keys appear only when set.
std::string resolved_config_text(const RunConfig& cfg);

} // namespace rlcore
