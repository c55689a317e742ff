#pragma once

#include <vector>

#include "rlcore/rng.hpp"
#include "rlcore/tensor.hpp"

namespace rlcore {

/// Adam hyperparameters. Defaults are the conventional ones.
struct AdamConfig {
    double lr = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    void validate() const;
    bool operator==(const AdamConfig&) const = default;
};

/// One dense layer with its gradient buffers and Adam state.
/// Gradients accumulate across backward calls until adam_step or zero_grad.
struct LinearLayer {
    Tensor2D weight;              // out x in
    std::vector<double> bias;     // out
    Tensor2D grad_weight;
    std::vector<double> grad_bias;
    Tensor2D adam_m_w, adam_v_w;
    std::vector<double> adam_m_b, adam_v_b;
    long adam_t = 0;

    int in_dim() const { return weight.cols; }
    int out_dim() const { return weight.rows; }

    /// Weights and biases uniform in (-1/sqrt(in), +1/sqrt(in)); Adam state zero.
    static LinearLayer init(int in, int out, Rng& rng);

    /// Zero-initialized parameters (deterministic construction for tests).
    static LinearLayer zeros(int in, int out);

    void zero_grad();
    std::size_t parameter_count() const { return weight.size() + bias.size(); }
};

/// y[b] = weight * x[b] + bias. Rejects shape mismatch and non-finite input.
Tensor2D linear_forward(const LinearLayer& layer, const Tensor2D& x);

/// Accumulates grad_weight += upstream^T * x and grad_bias += column sums of
/// upstream; returns dL/dx = upstream * weight.
Tensor2D linear_backward(LinearLayer& layer, const Tensor2D& x, const Tensor2D& upstream);

/// dL/dx only, without touching gradient buffers. Used where a network is
/// differentiated through (e.g. a critic inside the policy objective) but its
/// own parameters must not receive gradients.
Tensor2D linear_backward_input_only(const LinearLayer& layer, const Tensor2D& upstream);

/// Standard Adam with bias correction on weight and bias; zeroes the gradient
/// buffers afterwards and increments the step counter.
void adam_step(LinearLayer& layer, const AdamConfig& cfg);

} // namespace rlcore
