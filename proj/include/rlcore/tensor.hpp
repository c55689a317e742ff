#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "rlcore/errors.hpp"

namespace rlcore {

/// Row-major 2-D array of doubles. The universal numeric carrier for
/// activations, weights and batches. Invariant: data.size() == rows*cols.
struct Tensor2D {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Tensor2D() = default;
    Tensor2D(int r, int c) : rows(r), cols(c) {
        if (r < 0 || c < 0) throw DimensionError("Tensor2D: negative dimension");
        data.assign(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0);
    }

    static Tensor2D of(std::initializer_list<std::initializer_list<double>> rows_init);

    /// Single row, 1 x n.
    static Tensor2D row_vector(std::initializer_list<double> v);

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Tensor2D& o) const { return rows == o.rows && cols == o.cols; }

    void fill(double v) { data.assign(data.size(), v); }
};

/// Throws NumericError if the tensor holds NaN/Inf (or values so large their
/// absolute sum overflows, which is treated as the same failure).
void require_finite(const Tensor2D& t, const char* what);
void require_finite(const std::vector<double>& v, const char* what);

bool all_finite(const Tensor2D& t);

// Batched linear-algebra kernels (hot paths of the whole library).
// Summation order is fixed, so results are reproducible run to run.

/// y = x * w^T (+ bias per row if bias != nullptr).
/// x: batch x in, w: out x in, y: batch x out.
void gemm_xwt(const Tensor2D& x, const Tensor2D& w, const double* bias, Tensor2D& y);

/// gw += up^T * x, gb[o] += sum_b up[b,o].
/// up: batch x out, x: batch x in, gw: out x in.
void gemm_accum_grad(const Tensor2D& up, const Tensor2D& x, Tensor2D& gw, double* gb);

/// dx = up * w. up: batch x out, w: out x in, dx: batch x in.
void gemm_upw(const Tensor2D& up, const Tensor2D& w, Tensor2D& dx);

} // namespace rlcore
