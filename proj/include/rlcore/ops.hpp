#pragma once

#include <utility>
#include <vector>

#include "rlcore/rng.hpp"
#include "rlcore/tensor.hpp"

namespace rlcore {

// Log-std clamp bounds for Gaussian policy heads and the guard constant in
// the tanh change-of-variables correction.
inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kTanhLogProbGuard = 1e-6;

Tensor2D relu_forward(const Tensor2D& x);
/// Masks upstream where x <= 0 (subgradient 0 at x == 0).
Tensor2D relu_backward(const Tensor2D& x, const Tensor2D& upstream);

Tensor2D tanh_forward(const Tensor2D& x);
/// dL/dx = upstream * (1 - y^2), with y the forward output.
Tensor2D tanh_backward(const Tensor2D& y, const Tensor2D& upstream);

/// Row-wise concatenation, a first then b. Batch dims must agree.
Tensor2D concat_forward(const Tensor2D& a, const Tensor2D& b);
/// Splits upstream back into the (p, q) halves; exact inverse of the forward layout.
std::pair<Tensor2D, Tensor2D> concat_backward(const Tensor2D& upstream, int p, int q);

/// Reparameterized squashed-Gaussian sample.
///   u = mean + exp(log_std) * eps,  action = tanh(u),
///   log_prob = sum_i [ logN(u_i; mean_i, std_i) - log(1 - tanh(u_i)^2 + guard) ].
/// pre_tanh and noise are kept so callers can backpropagate through the draw.
struct SampleResult {
    Tensor2D action;
    std::vector<double> log_prob; // one per batch row
    Tensor2D pre_tanh;            // u
    Tensor2D noise;               // eps
};

/// Caller guarantees log_std is already clamped to [kLogStdMin, kLogStdMax].
SampleResult gaussian_sample_tanh(const Tensor2D& mean, const Tensor2D& log_std, Rng& rng);

/// Same computation with the noise supplied explicitly.
SampleResult gaussian_sample_tanh_with_noise(const Tensor2D& mean, const Tensor2D& log_std,
                                             const Tensor2D& eps);

/// Deterministic evaluation action: tanh(mean).
Tensor2D deterministic_action(const Tensor2D& mean);

} // namespace rlcore
