#include "rlcore/agent.hpp"

#include <algorithm>
#include <cmath>

#include "rlcore/checkpoint.hpp"

namespace rlcore {

const char* to_string(Algo a) {
    switch (a) {
        case Algo::SAC: return "sac";
        case Algo::TD3: return "td3";
        case Algo::DDPG: return "ddpg";
    }
    return "?";
}

void AgentConfig::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must be in (0,1)");
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau must be in (0,1]");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(lr_actor > 0.0) || !(lr_critic > 0.0) || !(lr_alpha > 0.0))
        throw ConfigError("learning rates must be > 0");
    if (initial_temperature < 0.0) throw ConfigError("initial_temperature must be >= 0");
    if (learn_alpha && initial_temperature <= 0.0)
        throw ConfigError("learn_alpha requires initial_temperature > 0");
    if (policy_topology.hidden_dim < 1 || critic_topology.hidden_dim < 1)
        throw ConfigError("hidden_dim must be >= 1");
    if (policy_topology.num_hidden_layers < 1 || critic_topology.num_hidden_layers < 1)
        throw ConfigError("num_layers must be >= 1");
    if (td3.policy_delay < 1) throw ConfigError("policy_delay must be >= 1");
    if (td3.policy_noise < 0.0 || td3.noise_clip < 0.0 || td3.exploration_noise < 0.0)
        throw ConfigError("noise parameters must be >= 0");
    if (warmup_steps < 0) throw ConfigError("warmup_steps must be >= 0");
    if (eval_interval < 1) throw ConfigError("eval_interval must be >= 1");
    if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
    if (replay_capacity < 1) throw ConfigError("replay_capacity must be >= 1");
    if (her_k < 0) throw ConfigError("her_k must be >= 0");
}

bool AgentConfig::operator==(const AgentConfig& o) const {
    const bool te_equal = (std::isnan(target_entropy) && std::isnan(o.target_entropy)) ||
                          target_entropy == o.target_entropy;
    return algo == o.algo && lr_actor == o.lr_actor && lr_critic == o.lr_critic &&
           lr_alpha == o.lr_alpha && batch_size == o.batch_size && gamma == o.gamma &&
           tau == o.tau && initial_temperature == o.initial_temperature && te_equal &&
           learn_alpha == o.learn_alpha && single_critic == o.single_critic &&
           policy_topology == o.policy_topology && critic_topology == o.critic_topology &&
           td3 == o.td3 && warmup_steps == o.warmup_steps && eval_interval == o.eval_interval &&
           eval_episodes == o.eval_episodes && replay_capacity == o.replay_capacity &&
           use_her == o.use_her && her_k == o.her_k;
}

double Agent::alpha() const {
    if (algo != Algo::SAC) return 0.0;
    return learn_alpha ? std::exp(log_alpha) : fixed_alpha;
}

Tensor2D Agent::act_deterministic(const Tensor2D& obs) {
    PolicyOutput po = policy.forward_policy(obs);
    return deterministic_action(po.mean);
}

Tensor2D Agent::act_stochastic(const Tensor2D& obs, const Td3Params& td3, Rng& rng) {
    PolicyOutput po = policy.forward_policy(obs);
    if (algo == Algo::SAC) {
        return gaussian_sample_tanh(po.mean, po.log_std, rng).action;
    }
    Tensor2D a = deterministic_action(po.mean);
    for (double& v : a.data)
        v = std::clamp(v + td3.exploration_noise * rng.normal(), -1.0, 1.0);
    return a;
}

Agent make_agent(const AgentConfig& cfg, int obs_dim, int action_dim, Rng& rng) {
    cfg.validate();
    if (obs_dim < 1 || action_dim < 1) throw DimensionError("make_agent: bad env dims");

    Agent agent;
    agent.algo = cfg.algo;
    agent.obs_dim = obs_dim;
    agent.action_dim = action_dim;

    NetworkTopology pt = cfg.policy_topology;
    pt.input_dim = obs_dim;
    pt.head = HeadKind::PolicyGaussian;
    pt.action_dim = action_dim;

    NetworkTopology ct = cfg.critic_topology;
    ct.input_dim = obs_dim + action_dim; // q_input = (state || action), formed before layer 1
    ct.head = HeadKind::QScalar;
    ct.action_dim = 0;

    agent.policy = Network::build(pt, rng);
    const int num_critics = (cfg.algo == Algo::DDPG || cfg.single_critic) ? 1 : 2;
    for (int i = 0; i < num_critics; ++i) agent.critics.push_back(Network::build(ct, rng));
    agent.target_critics = agent.critics;
    if (cfg.algo != Algo::SAC) agent.target_policy = agent.policy;

    agent.learn_alpha = cfg.algo == Algo::SAC && cfg.learn_alpha;
    agent.fixed_alpha = cfg.initial_temperature;
    agent.log_alpha = agent.learn_alpha ? std::log(cfg.initial_temperature) : 0.0;
    agent.target_entropy = std::isnan(cfg.target_entropy) ? -static_cast<double>(action_dim)
                                                          : cfg.target_entropy;
    return agent;
}

double td_target(double reward, bool done, double next_q, double gamma) {
    if (!std::isfinite(reward) || !std::isfinite(next_q) || !std::isfinite(gamma))
        throw NumericError("td_target: non-finite input");
    return reward + gamma * next_q * (done ? 0.0 : 1.0);
}

namespace {

Tensor2D concat_sa(const Tensor2D& states, const Tensor2D& actions) {
    return concat_forward(states, actions);
}

/// Elementwise minimum over the target critics' Q(s', a'), plus argmin rows
/// when the caller needs gradient routing.
std::vector<double> min_target_q(Agent& agent, const Tensor2D& sa_next) {
    std::vector<double> q = [&] {
        Tensor2D q0 = agent.target_critics[0].forward_q(sa_next);
        return std::vector<double>(q0.data.begin(), q0.data.end());
    }();
    for (std::size_t i = 1; i < agent.target_critics.size(); ++i) {
        Tensor2D qi = agent.target_critics[i].forward_q(sa_next);
        for (int b = 0; b < qi.rows; ++b) q[b] = std::min(q[b], qi.at(b, 0));
    }
    return q;
}

struct RegressionResult {
    double critic_loss = 0.0;
    double q_mean = 0.0;
};

/// Both critics regress to y by mean squared error, one Adam step each.
RegressionResult regress_critics(Agent& agent, const Tensor2D& sa,
                                 const std::vector<double>& y, double lr_critic) {
    const int batch = sa.rows;
    AdamConfig adam;
    adam.lr = lr_critic;
    RegressionResult res;
    for (std::size_t i = 0; i < agent.critics.size(); ++i) {
        Tensor2D q = agent.critics[i].forward_q(sa);
        Tensor2D dq(batch, 1);
        double mse = 0.0, qsum = 0.0;
        for (int b = 0; b < batch; ++b) {
            const double err = q.at(b, 0) - y[b];
            mse += err * err;
            qsum += q.at(b, 0);
            dq.at(b, 0) = 2.0 * err / batch;
        }
        mse /= batch;
        res.critic_loss += mse;
        if (i == 0) res.q_mean = qsum / batch;
        agent.critics[i].backward_q(dq);
        agent.critics[i].adam_step(adam);
    }
    res.critic_loss /= static_cast<double>(agent.critics.size());
    return res;
}

/// dL/da for the policy objective term -(1/B) min_i Q_i(s, a). The gradient
/// flows through the argmin critic of each row; parameter gradients of the
/// critics are not touched.
Tensor2D min_q_action_grad(Agent& agent, const Tensor2D& sa_pi, int obs_dim, int action_dim,
                           std::vector<double>* q_min_out) {
    const int batch = sa_pi.rows;
    std::vector<Tensor2D> qs(agent.critics.size());
    for (std::size_t i = 0; i < agent.critics.size(); ++i)
        qs[i] = agent.critics[i].forward_q(sa_pi);
    // careful: forward_q above overwrote each critic's cache in turn, but each
    // critic's cache belongs to its own forward, so per-critic backward is valid.
    std::vector<int> argmin(batch, 0);
    if (q_min_out) q_min_out->assign(batch, 0.0);
    for (int b = 0; b < batch; ++b) {
        double best = qs[0].at(b, 0);
        int who = 0;
        for (std::size_t i = 1; i < qs.size(); ++i) {
            if (qs[i].at(b, 0) < best) {
                best = qs[i].at(b, 0);
                who = static_cast<int>(i);
            }
        }
        argmin[b] = who;
        if (q_min_out) (*q_min_out)[b] = best;
    }
    Tensor2D daction(batch, action_dim);
    for (std::size_t i = 0; i < agent.critics.size(); ++i) {
        Tensor2D up(batch, 1);
        bool any = false;
        for (int b = 0; b < batch; ++b) {
            if (argmin[b] == static_cast<int>(i)) {
                up.at(b, 0) = -1.0 / batch;
                any = true;
            }
        }
        if (!any) continue;
        Tensor2D dinput = agent.critics[i].backward_q(up, /*accumulate=*/false);
        for (int b = 0; b < batch; ++b)
            for (int c = 0; c < action_dim; ++c)
                daction.at(b, c) += dinput.at(b, obs_dim + c);
    }
    return daction;
}

void soft_update_targets(Agent& agent, double tau) {
    for (std::size_t i = 0; i < agent.critics.size(); ++i)
        soft_update(agent.target_critics[i], agent.critics[i], tau);
    if (agent.target_policy) soft_update(*agent.target_policy, agent.policy, tau);
}

void require_batch(const Batch& batch) {
    if (batch.size < 1) throw DimensionError("update: empty batch");
}

/// Deterministic-policy improvement shared by TD3 and DDPG:
/// ascend Q_1(s, tanh(mean(s))).
double deterministic_policy_step(Agent& agent, const Tensor2D& states, double lr_actor) {
    const int batch = states.rows;
    PolicyOutput po = agent.policy.forward_policy(states);
    Tensor2D a = deterministic_action(po.mean);
    Tensor2D sa_pi = concat_sa(states, a);
    Tensor2D q = agent.critics[0].forward_q(sa_pi);
    double actor_loss = 0.0;
    for (int b = 0; b < batch; ++b) actor_loss -= q.at(b, 0) / batch;

    Tensor2D up(batch, 1);
    for (int b = 0; b < batch; ++b) up.at(b, 0) = -1.0 / batch;
    Tensor2D dinput = agent.critics[0].backward_q(up, /*accumulate=*/false);
    Tensor2D dmu(batch, agent.action_dim);
    for (int b = 0; b < batch; ++b)
        for (int c = 0; c < agent.action_dim; ++c) {
            const double av = a.at(b, c);
            dmu.at(b, c) = dinput.at(b, agent.obs_dim + c) * (1.0 - av * av);
        }
    Tensor2D dls(batch, agent.action_dim);
    agent.policy.backward_policy(dmu, dls);
    AdamConfig adam;
    adam.lr = lr_actor;
    agent.policy.adam_step(adam);
    return actor_loss;
}

} // namespace

Losses sac_update(Agent& agent, const Batch& batch, const AgentConfig& cfg, Rng& rng) {
    require_batch(batch);
    const int batch_n = batch.size;
    const double alpha = agent.alpha();

    // critic targets: y = r + gamma (1-d) [min Q_bar(s', a') - alpha log pi(a'|s')]
    PolicyOutput po_next = agent.policy.forward_policy(batch.next_states);
    SampleResult next = gaussian_sample_tanh(po_next.mean, po_next.log_std, rng);
    Tensor2D sa_next = concat_sa(batch.next_states, next.action);
    std::vector<double> qt = min_target_q(agent, sa_next);
    std::vector<double> y(batch_n);
    for (int b = 0; b < batch_n; ++b)
        y[b] = td_target(batch.rewards[b], batch.dones[b] != 0.0,
                         qt[b] - alpha * next.log_prob[b], cfg.gamma);

    Tensor2D sa = concat_sa(batch.states, batch.actions);
    RegressionResult reg = regress_critics(agent, sa, y, cfg.lr_critic);

    // policy: ascend min Q(s, a~) - alpha log pi(a~|s) with reparameterized a~
    PolicyOutput po = agent.policy.forward_policy(batch.states);
    SampleResult cur = gaussian_sample_tanh(po.mean, po.log_std, rng);
    Tensor2D sa_pi = concat_sa(batch.states, cur.action);
    std::vector<double> q_min;
    Tensor2D daction = min_q_action_grad(agent, sa_pi, agent.obs_dim, agent.action_dim, &q_min);

    double actor_loss = 0.0;
    for (int b = 0; b < batch_n; ++b)
        actor_loss += (alpha * cur.log_prob[b] - q_min[b]) / batch_n;

    // The Gaussian z-term of log pi is constant in (mean, log_std) once the
    // noise is fixed, so only the -log_std term and the tanh correction
    // contribute; the correction enters both directly and through the action.
    Tensor2D dmu(batch_n, agent.action_dim), dls(batch_n, agent.action_dim);
    for (int b = 0; b < batch_n; ++b) {
        for (int c = 0; c < agent.action_dim; ++c) {
            const double a = cur.action.at(b, c);
            const double u = cur.pre_tanh.at(b, c);
            const double mu = po.mean.at(b, c);
            const double one_minus_a2 = 1.0 - a * a;
            const double g_corr = 2.0 * a * one_minus_a2 / (one_minus_a2 + kTanhLogProbGuard);
            const double d = daction.at(b, c); // includes the -1/B of the loss
            dmu.at(b, c) = (alpha / batch_n) * g_corr + d * one_minus_a2;
            dls.at(b, c) = (alpha / batch_n) * (-1.0 + g_corr * (u - mu)) +
                           d * one_minus_a2 * (u - mu);
        }
    }
    // po.mean/log_std came from the most recent policy forward (on states), so
    // the cache matches this backward.
    agent.policy.backward_policy(dmu, dls);
    AdamConfig adam_actor;
    adam_actor.lr = cfg.lr_actor;
    agent.policy.adam_step(adam_actor);

    // temperature: gradient of -log_alpha * (log pi + target_entropy) on log_alpha
    if (agent.learn_alpha) {
        double mean_term = 0.0;
        for (int b = 0; b < batch_n; ++b)
            mean_term += (cur.log_prob[b] + agent.target_entropy) / batch_n;
        const double g = -mean_term;
        AdamConfig ac;
        ac.lr = cfg.lr_alpha;
        agent.alpha_t += 1;
        agent.alpha_m = ac.beta1 * agent.alpha_m + (1.0 - ac.beta1) * g;
        agent.alpha_v = ac.beta2 * agent.alpha_v + (1.0 - ac.beta2) * g * g;
        const double mc = agent.alpha_m / (1.0 - std::pow(ac.beta1, agent.alpha_t));
        const double vc = agent.alpha_v / (1.0 - std::pow(ac.beta2, agent.alpha_t));
        agent.log_alpha -= ac.lr * mc / (std::sqrt(vc) + ac.eps);
    }

    soft_update_targets(agent, cfg.tau);
    agent.update_count += 1;
    agent.last_actor_loss = actor_loss;

    Losses l;
    l.critic_loss = reg.critic_loss;
    l.actor_loss = actor_loss;
    l.alpha = agent.alpha();
    l.q_mean = reg.q_mean;
    return l;
}

Losses td3_update(Agent& agent, const Batch& batch, const AgentConfig& cfg, Rng& rng) {
    require_batch(batch);
    const int batch_n = batch.size;

    // target action: clamp(pi_bar(s') + clipped Gaussian noise) in [-1,1]
    PolicyOutput po_t = agent.target_policy->forward_policy(batch.next_states);
    Tensor2D a_next = deterministic_action(po_t.mean);
    for (double& v : a_next.data) {
        const double noise = std::clamp(cfg.td3.policy_noise * rng.normal(),
                                        -cfg.td3.noise_clip, cfg.td3.noise_clip);
        v = std::clamp(v + noise, -1.0, 1.0);
    }
    Tensor2D sa_next = concat_sa(batch.next_states, a_next);
    std::vector<double> qt = min_target_q(agent, sa_next);
    std::vector<double> y(batch_n);
    for (int b = 0; b < batch_n; ++b)
        y[b] = td_target(batch.rewards[b], batch.dones[b] != 0.0, qt[b], cfg.gamma);

    Tensor2D sa = concat_sa(batch.states, batch.actions);
    RegressionResult reg = regress_critics(agent, sa, y, cfg.lr_critic);

    agent.update_count += 1;
    if (agent.update_count % cfg.td3.policy_delay == 0) {
        agent.last_actor_loss = deterministic_policy_step(agent, batch.states, cfg.lr_actor);
        soft_update_targets(agent, cfg.tau);
    }

    Losses l;
    l.critic_loss = reg.critic_loss;
    l.actor_loss = agent.last_actor_loss;
    l.alpha = 0.0;
    l.q_mean = reg.q_mean;
    return l;
}

Losses ddpg_update(Agent& agent, const Batch& batch, const AgentConfig& cfg, Rng&) {
    require_batch(batch);
    const int batch_n = batch.size;

    PolicyOutput po_t = agent.target_policy->forward_policy(batch.next_states);
    Tensor2D a_next = deterministic_action(po_t.mean);
    Tensor2D sa_next = concat_sa(batch.next_states, a_next);
    std::vector<double> qt = min_target_q(agent, sa_next);
    std::vector<double> y(batch_n);
    for (int b = 0; b < batch_n; ++b)
        y[b] = td_target(batch.rewards[b], batch.dones[b] != 0.0, qt[b], cfg.gamma);

    Tensor2D sa = concat_sa(batch.states, batch.actions);
    RegressionResult reg = regress_critics(agent, sa, y, cfg.lr_critic);

    agent.last_actor_loss = deterministic_policy_step(agent, batch.states, cfg.lr_actor);
    soft_update_targets(agent, cfg.tau);
    agent.update_count += 1;

    Losses l;
    l.critic_loss = reg.critic_loss;
    l.actor_loss = agent.last_actor_loss;
    l.alpha = 0.0;
    l.q_mean = reg.q_mean;
    return l;
}

Losses agent_update(Agent& agent, const Batch& batch, const AgentConfig& cfg, Rng& rng) {
    switch (cfg.algo) {
        case Algo::SAC: return sac_update(agent, batch, cfg, rng);
        case Algo::TD3: return td3_update(agent, batch, cfg, rng);
        case Algo::DDPG: return ddpg_update(agent, batch, cfg, rng);
    }
    throw ConfigError("unknown algorithm");
}

std::vector<Transition> her_relabel(const std::vector<Transition>& episode, int k, Rng& rng,
                                    const GoalRewardFn& reward_fn) {
    for (const Transition& t : episode) {
        if (t.achieved_goal.empty() || t.desired_goal.empty())
            throw DimensionError("her_relabel: transitions lack goals");
        if (t.state.size() < t.desired_goal.size() || t.next_state.size() < t.desired_goal.size())
            throw DimensionError("her_relabel: state shorter than goal");
    }
    if (k == 0) return episode;
    const int n = static_cast<int>(episode.size());
    std::vector<Transition> out;
    out.reserve(static_cast<std::size_t>(n) * (k + 1));

    auto relabel_with = [&](const Transition& src, const std::vector<double>& goal) {
        Transition t = src;
        t.desired_goal = goal;
        const std::size_t gd = goal.size();
        for (std::size_t j = 0; j < gd; ++j) {
            t.state[t.state.size() - gd + j] = goal[j];
            t.next_state[t.next_state.size() - gd + j] = goal[j];
        }
        t.reward = reward_fn(t.achieved_goal, goal);
        t.done = t.reward == 0.0;
        return t;
    };

    for (int i = 0; i < n; ++i) {
        out.push_back(episode[i]);
        if (i == n - 1) {
            // no future step exists; degenerate self-goal relabel
            out.push_back(relabel_with(episode[i], episode[i].achieved_goal));
        } else {
            for (int c = 0; c < k; ++c) {
                const int future = i + 1 + rng.uniform_int(n - 1 - i);
                out.push_back(relabel_with(episode[i], episode[future].achieved_goal));
            }
        }
    }
    return out;
}

namespace {
constexpr const char* kMetaName = "meta";

float kind_code(TopologyKind k) { return static_cast<float>(static_cast<int>(k)); }
float algo_code(Algo a) { return static_cast<float>(static_cast<int>(a)); }
} // namespace

void save_agent_checkpoint(const std::string& path, const Agent& agent) {
    std::vector<NamedTensor> tensors;
    const NetworkTopology& pt = agent.policy.topology();
    const NetworkTopology& ct = agent.critics[0].topology();
    NamedTensor meta;
    meta.name = kMetaName;
    meta.values = {algo_code(agent.algo),
                   static_cast<float>(agent.obs_dim),
                   static_cast<float>(agent.action_dim),
                   static_cast<float>(agent.critics.size()),
                   kind_code(pt.kind),
                   static_cast<float>(pt.num_hidden_layers),
                   static_cast<float>(pt.hidden_dim),
                   kind_code(ct.kind),
                   static_cast<float>(ct.num_hidden_layers),
                   static_cast<float>(ct.hidden_dim)};
    meta.dims = {static_cast<std::uint32_t>(meta.values.size())};
    tensors.push_back(std::move(meta));

    NamedTensor la;
    la.name = "log_alpha";
    la.dims = {1};
    la.values = {static_cast<float>(agent.log_alpha)};
    tensors.push_back(std::move(la));

    auto append = [&](const Network& net, const std::string& prefix) {
        auto nt = network_to_tensors(net, prefix);
        tensors.insert(tensors.end(), nt.begin(), nt.end());
    };
    append(agent.policy, "policy");
    for (std::size_t i = 0; i < agent.critics.size(); ++i)
        append(agent.critics[i], "q" + std::to_string(i + 1));

    write_checkpoint(path, tensors);
}

Agent load_agent_checkpoint(const std::string& path) {
    const std::vector<NamedTensor> tensors = read_checkpoint(path);
    const NamedTensor* meta = nullptr;
    const NamedTensor* log_alpha = nullptr;
    for (const auto& t : tensors) {
        if (t.name == kMetaName) meta = &t;
        if (t.name == "log_alpha") log_alpha = &t;
    }
    if (!meta || meta->values.size() < 10) throw IoError("checkpoint: missing meta tensor");

    const auto& m = meta->values;
    AgentConfig cfg;
    cfg.algo = static_cast<Algo>(static_cast<int>(m[0]));
    const int obs_dim = static_cast<int>(m[1]);
    const int action_dim = static_cast<int>(m[2]);
    const int num_critics = static_cast<int>(m[3]);
    cfg.policy_topology.kind = static_cast<TopologyKind>(static_cast<int>(m[4]));
    cfg.policy_topology.num_hidden_layers = static_cast<int>(m[5]);
    cfg.policy_topology.hidden_dim = static_cast<int>(m[6]);
    cfg.critic_topology.kind = static_cast<TopologyKind>(static_cast<int>(m[7]));
    cfg.critic_topology.num_hidden_layers = static_cast<int>(m[8]);
    cfg.critic_topology.hidden_dim = static_cast<int>(m[9]);
    cfg.single_critic = num_critics == 1;

    Rng rng(0);
    Agent agent = make_agent(cfg, obs_dim, action_dim, rng);
    load_network_tensors(agent.policy, "policy", tensors);
    for (std::size_t i = 0; i < agent.critics.size(); ++i)
        load_network_tensors(agent.critics[i], "q" + std::to_string(i + 1), tensors);
    agent.target_critics = agent.critics;
    if (agent.target_policy) *agent.target_policy = agent.policy;
    if (log_alpha && !log_alpha->values.empty())
        agent.log_alpha = static_cast<double>(log_alpha->values[0]);
    return agent;
}

} // namespace rlcore
