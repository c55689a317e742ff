#include "rlcore/linear.hpp"

#include <cmath>

namespace rlcore {

void AdamConfig::validate() const {
    if (!(lr > 0.0)) throw ConfigError("adam: lr must be > 0");
    if (!(beta1 > 0.0 && beta1 < 1.0)) throw ConfigError("adam: beta1 must be in (0,1)");
    if (!(beta2 > 0.0 && beta2 < 1.0)) throw ConfigError("adam: beta2 must be in (0,1)");
    if (!(eps > 0.0)) throw ConfigError("adam: eps must be > 0");
}

LinearLayer LinearLayer::init(int in, int out, Rng& rng) {
    LinearLayer l = zeros(in, out);
    const double k = 1.0 / std::sqrt(static_cast<double>(in));
    for (double& w : l.weight.data) w = rng.uniform(-k, k);
    for (double& b : l.bias) b = rng.uniform(-k, k);
    return l;
}

LinearLayer LinearLayer::zeros(int in, int out) {
    if (in <= 0 || out <= 0) throw DimensionError("LinearLayer: dims must be positive");
    LinearLayer l;
    l.weight = Tensor2D(out, in);
    l.bias.assign(out, 0.0);
    l.grad_weight = Tensor2D(out, in);
    l.grad_bias.assign(out, 0.0);
    l.adam_m_w = Tensor2D(out, in);
    l.adam_v_w = Tensor2D(out, in);
    l.adam_m_b.assign(out, 0.0);
    l.adam_v_b.assign(out, 0.0);
    return l;
}

void LinearLayer::zero_grad() {
    grad_weight.fill(0.0);
    grad_bias.assign(grad_bias.size(), 0.0);
}

Tensor2D linear_forward(const LinearLayer& layer, const Tensor2D& x) {
    if (x.cols != layer.in_dim())
        throw DimensionError("linear_forward: input width " + std::to_string(x.cols) +
                             " != layer in_dim " + std::to_string(layer.in_dim()));
    require_finite(x, "linear_forward input");
    Tensor2D y;
    gemm_xwt(x, layer.weight, layer.bias.data(), y);
    require_finite(y, "linear_forward output");
    return y;
}

Tensor2D linear_backward(LinearLayer& layer, const Tensor2D& x, const Tensor2D& upstream) {
    if (x.cols != layer.in_dim() || upstream.cols != layer.out_dim() || x.rows != upstream.rows)
        throw DimensionError("linear_backward: shapes inconsistent with forward");
    gemm_accum_grad(upstream, x, layer.grad_weight, layer.grad_bias.data());
    Tensor2D dx;
    gemm_upw(upstream, layer.weight, dx);
    return dx;
}

Tensor2D linear_backward_input_only(const LinearLayer& layer, const Tensor2D& upstream) {
    if (upstream.cols != layer.out_dim())
        throw DimensionError("linear_backward_input_only: upstream width mismatch");
    Tensor2D dx;
    gemm_upw(upstream, layer.weight, dx);
    return dx;
}

namespace {

void adam_update(std::size_t n, double* param, double* grad, double* m, double* v,
                 double lr, double b1, double b2, double eps, double b1t, double b2t) {
    const double mc = 1.0 / (1.0 - b1t);
    const double vc = 1.0 / (1.0 - b2t);
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
        v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
        param[i] -= lr * (m[i] * mc) / (std::sqrt(v[i] * vc) + eps);
        grad[i] = 0.0;
    }
}

} // namespace

void adam_step(LinearLayer& layer, const AdamConfig& cfg) {
    cfg.validate();
    layer.adam_t += 1;
    const double b1t = std::pow(cfg.beta1, static_cast<double>(layer.adam_t));
    const double b2t = std::pow(cfg.beta2, static_cast<double>(layer.adam_t));
    adam_update(layer.weight.size(), layer.weight.data.data(), layer.grad_weight.data.data(),
                layer.adam_m_w.data.data(), layer.adam_v_w.data.data(),
                cfg.lr, cfg.beta1, cfg.beta2, cfg.eps, b1t, b2t);
    adam_update(layer.bias.size(), layer.bias.data(), layer.grad_bias.data(),
                layer.adam_m_b.data(), layer.adam_v_b.data(),
                cfg.lr, cfg.beta1, cfg.beta2, cfg.eps, b1t, b2t);
    require_finite(layer.weight, "adam_step weight");
    require_finite(layer.bias, "adam_step bias");
}

} // namespace rlcore
