#include "rlcore/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace rlcore {

Tensor2D Tensor2D::of(std::initializer_list<std::initializer_list<double>> rows_init) {
    const int r = static_cast<int>(rows_init.size());
    const int c = r > 0 ? static_cast<int>(rows_init.begin()->size()) : 0;
    Tensor2D t(r, c);
    int i = 0;
    for (const auto& row : rows_init) {
        if (static_cast<int>(row.size()) != c)
            throw DimensionError("Tensor2D::of: ragged initializer");
        int j = 0;
        for (double v : row) t.at(i, j++) = v;
        ++i;
    }
    return t;
}

Tensor2D Tensor2D::row_vector(std::initializer_list<double> v) {
    Tensor2D t(1, static_cast<int>(v.size()));
    int j = 0;
    for (double x : v) t.at(0, j++) = x;
    return t;
}

bool all_finite(const Tensor2D& t) {
    // NaN/Inf propagate through the |x| sum, so one isfinite check covers
    // the whole buffer. Legitimate values large enough to overflow the sum
    // are far outside this library's working range.
    double s = 0.0;
    for (double v : t.data) s += std::fabs(v);
    return std::isfinite(s);
}

void require_finite(const Tensor2D& t, const char* what) {
    if (!all_finite(t))
        throw NumericError(std::string("non-finite values in ") + what);
}

void require_finite(const std::vector<double>& v, const char* what) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    if (!std::isfinite(s))
        throw NumericError(std::string("non-finite values in ") + what);
}

namespace {

constexpr int kBlock = 8; // batch rows processed together for cache reuse

// Four accumulation steps are fused per pass so each output cache line is
// loaded and stored once per four multiply-adds instead of once per one;
// that keeps the loops FMA-bound rather than store-bound.
inline void axpy4(double* __restrict__ y, const double* __restrict__ a0,
                  const double* __restrict__ a1, const double* __restrict__ a2,
                  const double* __restrict__ a3, double c0, double c1, double c2, double c3,
                  int n) {
    for (int j = 0; j < n; ++j) y[j] += c0 * a0[j] + c1 * a1[j] + c2 * a2[j] + c3 * a3[j];
}

inline void axpy1(double* __restrict__ y, const double* __restrict__ a, double c, int n) {
    for (int j = 0; j < n; ++j) y[j] += c * a[j];
}

} // namespace

void gemm_xwt(const Tensor2D& x, const Tensor2D& w, const double* bias, Tensor2D& y) {
    const int batch = x.rows, in = x.cols, out = w.rows;
    if (w.cols != in) throw DimensionError("gemm_xwt: inner dimensions disagree");
    if (y.rows != batch || y.cols != out) y = Tensor2D(batch, out);

    if (bias != nullptr) {
        for (int b = 0; b < batch; ++b)
            std::memcpy(y.row(b), bias, sizeof(double) * static_cast<std::size_t>(out));
    } else {
        std::fill(y.data.begin(), y.data.end(), 0.0);
    }

    if (batch >= kBlock) {
        // Accumulate along the input dimension with w transposed so the inner
        // loop is stride-1; transposing per call avoids any chance of a stale
        // cached transpose when weights change.
        std::vector<double> wt(static_cast<std::size_t>(in) * out);
        for (int o = 0; o < out; ++o) {
            const double* wr = w.row(o);
            for (int i = 0; i < in; ++i) wt[static_cast<std::size_t>(i) * out + o] = wr[i];
        }
        // strips of four wt rows stay hot in L1 while all rows of the block
        // accumulate against them
        for (int b0 = 0; b0 < batch; b0 += kBlock) {
            const int bmax = std::min(batch - b0, kBlock);
            int i = 0;
            for (; i + 4 <= in; i += 4) {
                const double* w0 = wt.data() + static_cast<std::size_t>(i) * out;
                for (int bb = 0; bb < bmax; ++bb) {
                    const int b = b0 + bb;
                    const double* xr = x.row(b);
                    axpy4(y.row(b), w0, w0 + out, w0 + 2 * out, w0 + 3 * out, xr[i], xr[i + 1],
                          xr[i + 2], xr[i + 3], out);
                }
            }
            for (; i < in; ++i) {
                const double* wi = wt.data() + static_cast<std::size_t>(i) * out;
                for (int bb = 0; bb < bmax; ++bb)
                    axpy1(y.row(b0 + bb), wi, x.at(b0 + bb, i), out);
            }
        }
    } else {
        // Small batches (single-step acting, tests): plain dot products.
        for (int b = 0; b < batch; ++b) {
            const double* xr = x.row(b);
            double* yr = y.row(b);
            for (int o = 0; o < out; ++o) {
                const double* wr = w.row(o);
                double acc = 0.0;
                for (int i = 0; i < in; ++i) acc += xr[i] * wr[i];
                yr[o] += acc;
            }
        }
    }
}

void gemm_accum_grad(const Tensor2D& up, const Tensor2D& x, Tensor2D& gw, double* gb) {
    const int batch = up.rows, out = up.cols, in = x.cols;
    if (x.rows != batch) throw DimensionError("gemm_accum_grad: batch dims disagree");
    if (gw.rows != out || gw.cols != in) throw DimensionError("gemm_accum_grad: grad shape");

    for (int b0 = 0; b0 < batch; b0 += 4) {
        const int bmax = std::min(batch - b0, 4);
        if (bmax == 4) {
            const double *x0 = x.row(b0), *x1 = x.row(b0 + 1), *x2 = x.row(b0 + 2),
                         *x3 = x.row(b0 + 3);
            for (int o = 0; o < out; ++o) {
                const double u0 = up.at(b0, o), u1 = up.at(b0 + 1, o), u2 = up.at(b0 + 2, o),
                             u3 = up.at(b0 + 3, o);
                if (gb != nullptr) gb[o] += u0 + u1 + u2 + u3;
                axpy4(gw.row(o), x0, x1, x2, x3, u0, u1, u2, u3, in);
            }
        } else {
            for (int bb = 0; bb < bmax; ++bb) {
                const int b = b0 + bb;
                const double* xr = x.row(b);
                for (int o = 0; o < out; ++o) {
                    const double u = up.at(b, o);
                    if (gb != nullptr) gb[o] += u;
                    axpy1(gw.row(o), xr, u, in);
                }
            }
        }
    }
}

void gemm_upw(const Tensor2D& up, const Tensor2D& w, Tensor2D& dx) {
    const int batch = up.rows, out = up.cols, in = w.cols;
    if (w.rows != out) throw DimensionError("gemm_upw: inner dimensions disagree");
    if (dx.rows != batch || dx.cols != in) dx = Tensor2D(batch, in);
    std::fill(dx.data.begin(), dx.data.end(), 0.0);

    for (int b0 = 0; b0 < batch; b0 += kBlock) {
        const int bmax = std::min(batch - b0, kBlock);
        int o = 0;
        for (; o + 4 <= out; o += 4) {
            const double *w0 = w.row(o), *w1 = w.row(o + 1), *w2 = w.row(o + 2),
                         *w3 = w.row(o + 3);
            for (int bb = 0; bb < bmax; ++bb) {
                const int b = b0 + bb;
                const double* ur = up.row(b);
                axpy4(dx.row(b), w0, w1, w2, w3, ur[o], ur[o + 1], ur[o + 2], ur[o + 3], in);
            }
        }
        for (; o < out; ++o) {
            const double* wr = w.row(o);
            for (int bb = 0; bb < bmax; ++bb)
                axpy1(dx.row(b0 + bb), wr, up.at(b0 + bb, o), in);
        }
    }
}

} // namespace rlcore
