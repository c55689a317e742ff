#include "rlcore/probe.hpp"

#include <algorithm>
#include <cmath>

namespace rlcore {

namespace {

/// Cholesky solve of the SPD system (A + ridge*I) X = B, A: n x n, B: n x m.
/// The ridge term keeps rank-deficient systems solvable.
void cholesky_solve_inplace(Tensor2D& a, Tensor2D& b) {
    const int n = a.rows;
    for (int j = 0; j < n; ++j) {
        double d = a.at(j, j);
        for (int k = 0; k < j; ++k) d -= a.at(j, k) * a.at(j, k);
        if (d <= 0.0) throw NumericError("probe: matrix not positive definite");
        const double ljj = std::sqrt(d);
        a.at(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = a.at(i, j);
            for (int k = 0; k < j; ++k) s -= a.at(i, k) * a.at(j, k);
            a.at(i, j) = s / ljj;
        }
    }
    const int m = b.cols;
    // forward substitution L y = b
    for (int c = 0; c < m; ++c) {
        for (int i = 0; i < n; ++i) {
            double s = b.at(i, c);
            for (int k = 0; k < i; ++k) s -= a.at(i, k) * b.at(k, c);
            b.at(i, c) = s / a.at(i, i);
        }
        // back substitution L^T x = y
        for (int i = n - 1; i >= 0; --i) {
            double s = b.at(i, c);
            for (int k = i + 1; k < n; ++k) s -= a.at(k, i) * b.at(k, c);
            b.at(i, c) = s / a.at(i, i);
        }
    }
}

} // namespace

FitResult probe_fit(const Tensor2D& features, const Tensor2D& targets, double ridge) {
    if (features.rows != targets.rows)
        throw DimensionError("probe_fit: sample counts disagree");
    if (features.rows < 2) throw DimensionError("probe_fit: need at least 2 samples");
    const int n = features.rows;
    const int w = features.cols;
    const int m = targets.cols;

    // augment with an intercept column
    const int p = w + 1;
    Tensor2D gram(p, p);
    Tensor2D rhs(p, m);
    for (int s = 0; s < n; ++s) {
        const double* fr = features.row(s);
        for (int i = 0; i < w; ++i) {
            const double fi = fr[i];
            double* gr = gram.row(i);
            for (int j = i; j < w; ++j) gr[j] += fi * fr[j];
            gram.at(i, w) += fi;
            const double* tr = targets.row(s);
            double* rr = rhs.row(i);
            for (int c = 0; c < m; ++c) rr[c] += fi * tr[c];
        }
        gram.at(w, w) += 1.0;
        const double* tr = targets.row(s);
        for (int c = 0; c < m; ++c) rhs.at(w, c) += tr[c];
    }
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < i; ++j) gram.at(i, j) = gram.at(j, i);
        gram.at(i, i) += ridge;
    }

    cholesky_solve_inplace(gram, rhs); // rhs now holds the coefficients, p x m

    // residuals and per-dimension R^2
    std::vector<double> ss_res(m, 0.0), ss_tot(m, 0.0), mean(m, 0.0);
    for (int s = 0; s < n; ++s)
        for (int c = 0; c < m; ++c) mean[c] += targets.at(s, c) / n;
    double mse = 0.0;
    for (int s = 0; s < n; ++s) {
        const double* fr = features.row(s);
        for (int c = 0; c < m; ++c) {
            double pred = rhs.at(w, c);
            for (int i = 0; i < w; ++i) pred += fr[i] * rhs.at(i, c);
            const double err = targets.at(s, c) - pred;
            ss_res[c] += err * err;
            const double dev = targets.at(s, c) - mean[c];
            ss_tot[c] += dev * dev;
            mse += err * err;
        }
    }
    FitResult fit;
    fit.mse = mse / (static_cast<double>(n) * m);
    double r2_sum = 0.0;
    for (int c = 0; c < m; ++c) {
        if (ss_tot[c] < 1e-12) {
            r2_sum += ss_res[c] <= 1e-12 ? 1.0 : 0.0;
        } else {
            r2_sum += 1.0 - ss_res[c] / ss_tot[c];
        }
    }
    fit.r2 = r2_sum / m;
    return fit;
}

ProbeReport input_probe(Network& net, const Tensor2D& inputs) {
    const NetworkTopology& topo = net.topology();
    int max_width = topo.hidden_dim;
    if (topo.kind == TopologyKind::Dense && topo.num_hidden_layers > 1)
        max_width = topo.hidden_dim + topo.input_dim;
    if (inputs.rows < 10 * max_width)
        throw DimensionError("input_probe: need at least 10 samples per activation unit (" +
                             std::to_string(10 * max_width) + " rows)");

    ActivationTrace trace = net.trace_activations(inputs);
    ProbeReport report;
    for (std::size_t k = 0; k < trace.hidden.size(); ++k) {
        FitResult fit = probe_fit(trace.hidden[k], inputs);
        report.rows.push_back({static_cast<int>(k + 1), false, fit.mse, fit.r2, inputs.rows});
        if (topo.kind == TopologyKind::Dense && k + 1 < trace.hidden.size()) {
            FitResult cfit = probe_fit(trace.concat[k], inputs);
            report.rows.push_back({static_cast<int>(k + 1), true, cfit.mse, cfit.r2, inputs.rows});
        }
    }
    return report;
}

} // namespace rlcore
