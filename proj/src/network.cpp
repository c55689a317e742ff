#include "rlcore/network.hpp"

#include <algorithm>
#include <cmath>

namespace rlcore {

const char* to_string(TopologyKind k) {
    switch (k) {
        case TopologyKind::Vanilla: return "vanilla";
        case TopologyKind::Dense: return "dense";
        case TopologyKind::Residual: return "residual";
    }
    return "?";
}

const char* to_string(HeadKind k) {
    return k == HeadKind::QScalar ? "q" : "policy";
}

void NetworkTopology::validate() const {
    if (input_dim < 1) throw DimensionError("topology: input_dim must be >= 1");
    if (hidden_dim < 1) throw DimensionError("topology: hidden_dim must be >= 1");
    if (num_hidden_layers < 1) throw DimensionError("topology: num_hidden_layers must be >= 1");
    if (head == HeadKind::PolicyGaussian && action_dim < 1)
        throw DimensionError("topology: policy head needs action_dim >= 1");
}

int NetworkTopology::layer_in_dim(int k) const {
    if (k == 1) return input_dim;
    return kind == TopologyKind::Dense ? hidden_dim + input_dim : hidden_dim;
}

std::size_t param_count(const NetworkTopology& topo) {
    topo.validate();
    std::size_t total = 0;
    for (int k = 1; k <= topo.num_hidden_layers; ++k) {
        const std::size_t in = static_cast<std::size_t>(topo.layer_in_dim(k));
        total += in * topo.hidden_dim + topo.hidden_dim;
    }
    const std::size_t h = static_cast<std::size_t>(topo.hidden_dim);
    if (topo.head == HeadKind::QScalar) {
        total += h * 1 + 1;
    } else {
        total += 2 * (h * topo.action_dim + topo.action_dim);
    }
    return total;
}

Network Network::build(const NetworkTopology& topo, Rng& rng) {
    topo.validate();
    Network net;
    net.topo_ = topo;
    for (int k = 1; k <= topo.num_hidden_layers; ++k)
        net.layers_.push_back(LinearLayer::init(topo.layer_in_dim(k), topo.hidden_dim, rng));
    if (topo.head == HeadKind::QScalar) {
        net.head_q_ = LinearLayer::init(topo.hidden_dim, 1, rng);
    } else {
        net.head_mean_ = LinearLayer::init(topo.hidden_dim, topo.action_dim, rng);
        net.head_log_std_ = LinearLayer::init(topo.hidden_dim, topo.action_dim, rng);
    }
    return net;
}

void Network::require_head(HeadKind expected, const char* op) const {
    if (topo_.head != expected)
        throw DimensionError(std::string(op) + ": network has a " +
                             to_string(topo_.head) + " head");
}

Tensor2D Network::run_trunk(const Tensor2D& x) {
    if (x.cols != topo_.input_dim)
        throw DimensionError("forward: input width " + std::to_string(x.cols) +
                             " != topology input_dim " + std::to_string(topo_.input_dim));
    in_x_ = x;
    const int num_layers = static_cast<int>(layers_.size());
    pre_act_.assign(num_layers, Tensor2D());
    post_act_.assign(num_layers, Tensor2D());
    cat_in_.clear();

    Tensor2D h;
    for (int k = 0; k < num_layers; ++k) {
        Tensor2D z;
        if (k == 0) {
            z = linear_forward(layers_[0], x);
        } else if (topo_.kind == TopologyKind::Dense) {
            cat_in_.push_back(concat_forward(h, x));
            z = linear_forward(layers_[k], cat_in_.back());
        } else {
            z = linear_forward(layers_[k], h);
        }
        Tensor2D a = relu_forward(z);
        if (topo_.kind == TopologyKind::Residual && k > 0) {
            for (std::size_t i = 0; i < a.size(); ++i) a.data[i] += h.data[i];
        }
        pre_act_[k] = std::move(z);
        post_act_[k] = a;
        h = std::move(a);
    }
    has_cache_ = true;
    return h;
}

Tensor2D Network::forward_q(const Tensor2D& x) {
    require_head(HeadKind::QScalar, "forward_q");
    Tensor2D h = run_trunk(x);
    return linear_forward(head_q_, h);
}

PolicyOutput Network::forward_policy(const Tensor2D& x) {
    require_head(HeadKind::PolicyGaussian, "forward_policy");
    Tensor2D h = run_trunk(x);
    PolicyOutput out;
    out.mean = linear_forward(head_mean_, h);
    raw_log_std_ = linear_forward(head_log_std_, h);
    out.log_std = raw_log_std_;
    for (double& v : out.log_std.data) v = std::clamp(v, kLogStdMin, kLogStdMax);
    return out;
}

Tensor2D Network::layer_backward(int k, const Tensor2D& x, const Tensor2D& upstream,
                                 bool accumulate) {
    return accumulate ? linear_backward(layers_[k], x, upstream)
                      : linear_backward_input_only(layers_[k], upstream);
}

Tensor2D Network::backward_trunk(const Tensor2D& d_last_hidden, bool accumulate) {
    if (!has_cache_) throw DimensionError("backward without forward");
    const int num_layers = static_cast<int>(layers_.size());
    Tensor2D dh = d_last_hidden;
    Tensor2D dx_total(in_x_.rows, in_x_.cols);

    for (int k = num_layers - 1; k >= 1; --k) {
        if (topo_.kind == TopologyKind::Residual) {
            Tensor2D dz = relu_backward(pre_act_[k], dh);
            Tensor2D dprev = layer_backward(k, post_act_[k - 1], dz, accumulate);
            // identity skip: h_k = relu(z_k) + h_{k-1}
            for (std::size_t i = 0; i < dprev.size(); ++i) dprev.data[i] += dh.data[i];
            dh = std::move(dprev);
        } else if (topo_.kind == TopologyKind::Dense) {
            Tensor2D dz = relu_backward(pre_act_[k], dh);
            Tensor2D dcat = layer_backward(k, cat_in_[k - 1], dz, accumulate);
            auto [dprev, dx_part] = concat_backward(dcat, topo_.hidden_dim, topo_.input_dim);
            for (std::size_t i = 0; i < dx_total.size(); ++i) dx_total.data[i] += dx_part.data[i];
            dh = std::move(dprev);
        } else {
            Tensor2D dz = relu_backward(pre_act_[k], dh);
            dh = layer_backward(k, post_act_[k - 1], dz, accumulate);
        }
    }
    Tensor2D dz1 = relu_backward(pre_act_[0], dh);
    Tensor2D dx1 = layer_backward(0, in_x_, dz1, accumulate);
    for (std::size_t i = 0; i < dx_total.size(); ++i) dx_total.data[i] += dx1.data[i];
    return dx_total;
}

Tensor2D Network::backward_q(const Tensor2D& d_q, bool accumulate) {
    require_head(HeadKind::QScalar, "backward_q");
    if (!has_cache_) throw DimensionError("backward without forward");
    Tensor2D dh = accumulate ? linear_backward(head_q_, post_act_.back(), d_q)
                             : linear_backward_input_only(head_q_, d_q);
    return backward_trunk(dh, accumulate);
}

Tensor2D Network::backward_policy(const Tensor2D& d_mean, const Tensor2D& d_log_std,
                                  bool accumulate) {
    require_head(HeadKind::PolicyGaussian, "backward_policy");
    if (!has_cache_) throw DimensionError("backward without forward");
    // clamp passes gradient only where the raw output lies inside the bounds
    Tensor2D d_raw = d_log_std;
    for (std::size_t i = 0; i < d_raw.size(); ++i) {
        const double raw = raw_log_std_.data[i];
        if (raw < kLogStdMin || raw > kLogStdMax) d_raw.data[i] = 0.0;
    }
    Tensor2D dh = accumulate ? linear_backward(head_mean_, post_act_.back(), d_mean)
                             : linear_backward_input_only(head_mean_, d_mean);
    Tensor2D dh2 = accumulate ? linear_backward(head_log_std_, post_act_.back(), d_raw)
                              : linear_backward_input_only(head_log_std_, d_raw);
    for (std::size_t i = 0; i < dh.size(); ++i) dh.data[i] += dh2.data[i];
    return backward_trunk(dh, accumulate);
}

void Network::zero_grad() {
    for (auto& l : layers_) l.zero_grad();
    if (topo_.head == HeadKind::QScalar) {
        head_q_.zero_grad();
    } else {
        head_mean_.zero_grad();
        head_log_std_.zero_grad();
    }
}

void Network::adam_step(const AdamConfig& cfg) {
    for (auto& l : layers_) rlcore::adam_step(l, cfg);
    if (topo_.head == HeadKind::QScalar) {
        rlcore::adam_step(head_q_, cfg);
    } else {
        rlcore::adam_step(head_mean_, cfg);
        rlcore::adam_step(head_log_std_, cfg);
    }
}

std::size_t Network::parameter_count() const {
    std::size_t total = 0;
    const_cast<Network*>(this)->for_each_layer(
        [&](const std::string&, LinearLayer& l) { total += l.parameter_count(); });
    return total;
}

LinearLayer& Network::q_head() { require_head(HeadKind::QScalar, "q_head"); return head_q_; }
LinearLayer& Network::mean_head() { require_head(HeadKind::PolicyGaussian, "mean_head"); return head_mean_; }
LinearLayer& Network::log_std_head() { require_head(HeadKind::PolicyGaussian, "log_std_head"); return head_log_std_; }
const LinearLayer& Network::q_head() const { require_head(HeadKind::QScalar, "q_head"); return head_q_; }
const LinearLayer& Network::mean_head() const { require_head(HeadKind::PolicyGaussian, "mean_head"); return head_mean_; }
const LinearLayer& Network::log_std_head() const { require_head(HeadKind::PolicyGaussian, "log_std_head"); return head_log_std_; }

void Network::for_each_layer(const std::function<void(const std::string&, LinearLayer&)>& fn) {
    for (std::size_t k = 0; k < layers_.size(); ++k)
        fn("layer" + std::to_string(k + 1), layers_[k]);
    if (topo_.head == HeadKind::QScalar) {
        fn("head", head_q_);
    } else {
        fn("mean", head_mean_);
        fn("logstd", head_log_std_);
    }
}

void Network::for_each_layer(
    const std::function<void(const std::string&, const LinearLayer&)>& fn) const {
    const_cast<Network*>(this)->for_each_layer(
        [&](const std::string& name, LinearLayer& l) { fn(name, l); });
}

ActivationTrace Network::trace_activations(const Tensor2D& x) {
    run_trunk(x);
    ActivationTrace trace;
    trace.hidden = post_act_;
    trace.concat = cat_in_;
    return trace;
}

const Tensor2D& Network::cached_concat_input(int k) const {
    if (topo_.kind != TopologyKind::Dense)
        throw DimensionError("cached_concat_input: not a dense network");
    if (!has_cache_ || k < 2 || k > static_cast<int>(layers_.size()))
        throw DimensionError("cached_concat_input: no cached input for layer " + std::to_string(k));
    return cat_in_[k - 2];
}

void soft_update(Network& target, const Network& online, double tau) {
    if (target.topology() != online.topology())
        throw DimensionError("soft_update: topology mismatch");
    auto lerp = [tau](double t, double o) { return (1.0 - tau) * t + tau * o; };
    auto& tl = target.hidden_layers();
    const auto& ol = online.hidden_layers();
    std::vector<std::pair<LinearLayer*, const LinearLayer*>> pairs;
    for (std::size_t k = 0; k < tl.size(); ++k) pairs.emplace_back(&tl[k], &ol[k]);
    if (target.topology().head == HeadKind::QScalar) {
        pairs.emplace_back(&target.q_head(), &online.q_head());
    } else {
        pairs.emplace_back(&target.mean_head(), &online.mean_head());
        pairs.emplace_back(&target.log_std_head(), &online.log_std_head());
    }
    for (auto& [t, o] : pairs) {
        if (!t->weight.same_shape(o->weight))
            throw DimensionError("soft_update: layer shape mismatch");
        for (std::size_t i = 0; i < t->weight.size(); ++i)
            t->weight.data[i] = lerp(t->weight.data[i], o->weight.data[i]);
        for (std::size_t i = 0; i < t->bias.size(); ++i)
            t->bias[i] = lerp(t->bias[i], o->bias[i]);
    }
}

Network quantize_f32(const Network& net) {
    Network q = net;
    q.for_each_layer([](const std::string&, LinearLayer& l) {
        for (double& v : l.weight.data) v = static_cast<double>(static_cast<float>(v));
        for (double& v : l.bias) v = static_cast<double>(static_cast<float>(v));
    });
    return q;
}

double max_param_delta(const Network& a, const Network& b) {
    if (a.topology() != b.topology())
        throw DimensionError("max_param_delta: topology mismatch");
    double worst = 0.0;
    std::vector<std::pair<const LinearLayer*, const LinearLayer*>> pairs;
    for (std::size_t k = 0; k < a.hidden_layers().size(); ++k)
        pairs.emplace_back(&a.hidden_layers()[k], &b.hidden_layers()[k]);
    if (a.topology().head == HeadKind::QScalar) {
        pairs.emplace_back(&a.q_head(), &b.q_head());
    } else {
        pairs.emplace_back(&a.mean_head(), &b.mean_head());
        pairs.emplace_back(&a.log_std_head(), &b.log_std_head());
    }
    for (auto& [x, y] : pairs) {
        for (std::size_t i = 0; i < x->weight.size(); ++i)
            worst = std::max(worst, std::fabs(x->weight.data[i] - y->weight.data[i]));
        for (std::size_t i = 0; i < x->bias.size(); ++i)
            worst = std::max(worst, std::fabs(x->bias[i] - y->bias[i]));
    }
    return worst;
}

} // namespace rlcore
