#include "rlcore/ops.hpp"

#include <cmath>

namespace rlcore {

Tensor2D relu_forward(const Tensor2D& x) {
    Tensor2D y(x.rows, x.cols);
    for (std::size_t i = 0; i < x.size(); ++i) y.data[i] = x.data[i] > 0.0 ? x.data[i] : 0.0;
    return y;
}

Tensor2D relu_backward(const Tensor2D& x, const Tensor2D& upstream) {
    if (!x.same_shape(upstream)) throw DimensionError("relu_backward: shape mismatch");
    Tensor2D dx(x.rows, x.cols);
    for (std::size_t i = 0; i < x.size(); ++i) dx.data[i] = x.data[i] > 0.0 ? upstream.data[i] : 0.0;
    return dx;
}

Tensor2D tanh_forward(const Tensor2D& x) {
    Tensor2D y(x.rows, x.cols);
    for (std::size_t i = 0; i < x.size(); ++i) y.data[i] = std::tanh(x.data[i]);
    return y;
}

Tensor2D tanh_backward(const Tensor2D& y, const Tensor2D& upstream) {
    if (!y.same_shape(upstream)) throw DimensionError("tanh_backward: shape mismatch");
    Tensor2D dx(y.rows, y.cols);
    for (std::size_t i = 0; i < y.size(); ++i)
        dx.data[i] = upstream.data[i] * (1.0 - y.data[i] * y.data[i]);
    return dx;
}

Tensor2D concat_forward(const Tensor2D& a, const Tensor2D& b) {
    if (a.rows != b.rows) throw DimensionError("concat_forward: batch dims disagree");
    Tensor2D y(a.rows, a.cols + b.cols);
    for (int r = 0; r < a.rows; ++r) {
        double* yr = y.row(r);
        const double* ar = a.row(r);
        const double* br = b.row(r);
        for (int c = 0; c < a.cols; ++c) yr[c] = ar[c];
        for (int c = 0; c < b.cols; ++c) yr[a.cols + c] = br[c];
    }
    return y;
}

std::pair<Tensor2D, Tensor2D> concat_backward(const Tensor2D& upstream, int p, int q) {
    if (upstream.cols != p + q) throw DimensionError("concat_backward: widths do not sum");
    Tensor2D da(upstream.rows, p), db(upstream.rows, q);
    for (int r = 0; r < upstream.rows; ++r) {
        const double* ur = upstream.row(r);
        double* ar = da.row(r);
        double* br = db.row(r);
        for (int c = 0; c < p; ++c) ar[c] = ur[c];
        for (int c = 0; c < q; ++c) br[c] = ur[p + c];
    }
    return {std::move(da), std::move(db)};
}

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178; // 0.5*log(2*pi)
} // namespace

SampleResult gaussian_sample_tanh_with_noise(const Tensor2D& mean, const Tensor2D& log_std,
                                             const Tensor2D& eps) {
    if (!mean.same_shape(log_std) || !mean.same_shape(eps))
        throw DimensionError("gaussian_sample_tanh: shape mismatch");
    SampleResult r;
    r.pre_tanh = Tensor2D(mean.rows, mean.cols);
    r.action = Tensor2D(mean.rows, mean.cols);
    r.noise = eps;
    r.log_prob.assign(mean.rows, 0.0);
    for (int b = 0; b < mean.rows; ++b) {
        double lp = 0.0;
        for (int c = 0; c < mean.cols; ++c) {
            const double ls = log_std.at(b, c);
            const double sd = std::exp(ls);
            const double u = mean.at(b, c) + sd * eps.at(b, c);
            const double a = std::tanh(u);
            r.pre_tanh.at(b, c) = u;
            r.action.at(b, c) = a;
            const double z = (u - mean.at(b, c)) / sd;
            lp += -kHalfLog2Pi - ls - 0.5 * z * z;
            lp -= std::log(1.0 - a * a + kTanhLogProbGuard);
        }
        r.log_prob[b] = lp;
    }
    require_finite(r.action, "gaussian_sample_tanh action");
    require_finite(r.log_prob, "gaussian_sample_tanh log_prob");
    return r;
}

SampleResult gaussian_sample_tanh(const Tensor2D& mean, const Tensor2D& log_std, Rng& rng) {
    Tensor2D eps(mean.rows, mean.cols);
    for (double& e : eps.data) e = rng.normal();
    return gaussian_sample_tanh_with_noise(mean, log_std, eps);
}

Tensor2D deterministic_action(const Tensor2D& mean) {
    return tanh_forward(mean);
}

} // namespace rlcore
