#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rlcore/linear.hpp"
#include "rlcore/ops.hpp"

namespace rlcore {

enum class TopologyKind { Vanilla, Dense, Residual };
enum class HeadKind { QScalar, PolicyGaussian };

const char* to_string(TopologyKind k);
const char* to_string(HeadKind k);

/// Declarative network shape. For Dense, every hidden layer after the first
/// reads (previous hidden || raw input); heads always read hidden_dim only.
/// For Residual, layers after the first are square with an identity skip.
struct NetworkTopology {
    TopologyKind kind = TopologyKind::Vanilla;
    int input_dim = 0;
    int hidden_dim = 256;
    int num_hidden_layers = 2;
    HeadKind head = HeadKind::QScalar;
    int action_dim = 0; // PolicyGaussian only

    void validate() const;
    /// Input width of hidden layer k (1-based).
    int layer_in_dim(int k) const;
    bool operator==(const NetworkTopology&) const = default;
};

/// Exact number of stored parameters (weights and biases, trunk plus heads).
std::size_t param_count(const NetworkTopology& topo);

struct PolicyOutput {
    Tensor2D mean;
    Tensor2D log_std; // clamped to [kLogStdMin, kLogStdMax]
};

/// Post-activation trunk states captured during a forward pass, for probes.
struct ActivationTrace {
    std::vector<Tensor2D> hidden;  // h_1 .. h_L
    std::vector<Tensor2D> concat;  // Dense only: inputs (h_k || x) of layers 2..L
};

/// A built network: trunk layers plus head layer(s), with the forward cache
/// needed for manual reverse-mode differentiation. Copying a Network deep-
/// copies all parameters, which is how target networks are made.
class Network {
public:
    Network() = default;
    static Network build(const NetworkTopology& topo, Rng& rng);

    const NetworkTopology& topology() const { return topo_; }

    Tensor2D forward_q(const Tensor2D& x);
    PolicyOutput forward_policy(const Tensor2D& x);

    /// Backward from head gradients. Accumulates parameter gradients in every
    /// layer (unless accumulate is false, in which case the gradient buffers
    /// are left untouched) and returns dL/dinput. Requires a preceding forward.
    Tensor2D backward_q(const Tensor2D& d_q, bool accumulate = true);
    Tensor2D backward_policy(const Tensor2D& d_mean, const Tensor2D& d_log_std,
                             bool accumulate = true);

    void zero_grad();
    void adam_step(const AdamConfig& cfg);

    /// Enumerates every stored weight and bias (the brute-force count).
    std::size_t parameter_count() const;

    std::vector<LinearLayer>& hidden_layers() { return layers_; }
    const std::vector<LinearLayer>& hidden_layers() const { return layers_; }
    LinearLayer& q_head();
    LinearLayer& mean_head();
    LinearLayer& log_std_head();
    const LinearLayer& q_head() const;
    const LinearLayer& mean_head() const;
    const LinearLayer& log_std_head() const;

    /// Visits each layer as ("layer1".., "head" | "mean" | "logstd").
    void for_each_layer(const std::function<void(const std::string&, LinearLayer&)>& fn);
    void for_each_layer(const std::function<void(const std::string&, const LinearLayer&)>& fn) const;

    /// Forward through the trunk only, recording per-layer activations.
    ActivationTrace trace_activations(const Tensor2D& x);

    /// Dense networks feed x verbatim into every layer past the first; this
    /// returns the cached concatenated input of hidden layer k (2-based).
    const Tensor2D& cached_concat_input(int k) const;

private:
    Tensor2D run_trunk(const Tensor2D& x);
    Tensor2D backward_trunk(const Tensor2D& d_last_hidden, bool accumulate);
    Tensor2D layer_backward(int k, const Tensor2D& x, const Tensor2D& upstream, bool accumulate);
    void require_head(HeadKind expected, const char* op) const;

    NetworkTopology topo_;
    std::vector<LinearLayer> layers_;
    LinearLayer head_q_;
    LinearLayer head_mean_;
    LinearLayer head_log_std_;

    // forward cache
    bool has_cache_ = false;
    Tensor2D in_x_;
    std::vector<Tensor2D> pre_act_;   // z_k
    std::vector<Tensor2D> post_act_;  // h_k
    std::vector<Tensor2D> cat_in_;    // Dense: (h_{k-1} || x) for layers 2..L
    Tensor2D raw_log_std_;            // pre-clamp head output
};

/// target := (1 - tau) * target + tau * online, every parameter.
void soft_update(Network& target, const Network& online, double tau);

/// Parameters rounded through 32-bit floats, as checkpoint storage does.
/// Evaluation runs on these so saved checkpoints reproduce results exactly.
Network quantize_f32(const Network& net);

/// max |a - b| over all parameters; networks must be shape-identical.
double max_param_delta(const Network& a, const Network& b);

} // namespace rlcore
