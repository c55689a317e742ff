#pragma once

#include <vector>

#include "rlcore/network.hpp"

namespace rlcore {

/// Goodness of the best ridge-regularized linear map (with intercept) from a
/// feature matrix to a target matrix. r2 is the mean over target dimensions
/// of the per-dimension coefficient of determination, which makes it
/// invariant to per-coordinate affine rescaling of the targets. A target
/// dimension with (numerically) zero variance contributes 1 when its
/// residuals are zero and 0 otherwise.
struct FitResult {
    double mse = 0.0;
    double r2 = 0.0;
};

FitResult probe_fit(const Tensor2D& features, const Tensor2D& targets, double ridge = 1e-6);

struct ProbeRow {
    int layer = 0;                 // 1-based hidden layer index
    bool concat_with_input = false;// Dense: the (h || x) representation fed to layer+1
    double mse = 0.0;
    double r2 = 0.0;
    int samples = 0;
};

struct ProbeReport {
    std::vector<ProbeRow> rows;
};

/// Linear-decodability probe: runs the trunk on `inputs`, then for every
/// post-activation h_k (and, for dense networks, every concatenated
/// representation) fits a linear map back to the raw inputs and reports
/// per-layer MSE and R^2. Requires inputs.rows >= 10 * widest layer.
ProbeReport input_probe(Network& net, const Tensor2D& inputs);

} // namespace rlcore
