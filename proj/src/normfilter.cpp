#include "multilap/normfilter.hpp"

#include <cmath>
#include <stdexcept>

#include "multilap/parallel.hpp"

namespace multilap {

void NormMode::validate() const {
    if (alpha_strategy == AlphaStrategy::fixed && fixed_alpha <= 0.0)
        throw std::invalid_argument("fixed alpha must be > 0");
}

namespace detail {

void accumulate_rows(const double* weights, int row0, int row1, int width, int height,
                     int window_radius, const ImagePlane& y, double* out, int threads) {
    const int r = window_radius;
    const int side = 2 * r + 1;
    const int m = side * side;
    const double* img = y.v.data();

    parallel_rows(row1 - row0, threads, [&](int a, int b) {
        for (int ry = a; ry < b; ++ry) {
            const int py = row0 + ry;
            for (int px = 0; px < width; ++px) {
                const double* wrow = weights + (static_cast<size_t>(ry) * width + px) * m;
                double acc = 0.0;
                for (int dy = -r; dy <= r; ++dy) {
                    const int ny = py + dy;
                    if (ny < 0 || ny >= height) continue;
                    const double* yrow = img + static_cast<size_t>(ny) * width + px;
                    const int ox = (dy + r) * side + r;
                    const int lo = px - r < 0 ? -px : -r;
                    const int hi = px + r >= width ? width - 1 - px : r;
                    for (int dx = lo; dx <= hi; ++dx) acc += wrow[ox + dx] * yrow[dx];
                }
                out[static_cast<size_t>(ry) * width + px] = acc;
            }
        }
    });
}

void row_square_sums(const WeightField& w, double& sum_sq, double& sum_sq_over_d) {
    const int m = w.window_size();
    sum_sq = 0.0;
    sum_sq_over_d = 0.0;
    for (int i = 0; i < w.pixels(); ++i) {
        const double* wrow = w.row(i);
        double rs = 0.0;
        for (int o = 0; o < m; ++o) rs += wrow[o] * wrow[o];
        sum_sq += rs;
        sum_sq_over_d += rs / w.degree[i];
    }
}

AlphaEstimate alpha_from_stats(AlphaStrategy strategy, double fixed_alpha, double n, double s1,
                               double s2, double tr_k2, double tr_kdinvk) {
    AlphaEstimate est;
    const double d_bar = s1 / n;
    switch (strategy) {
        case AlphaStrategy::fixed:
            est.alpha = fixed_alpha;
            return est;
        case AlphaStrategy::inverse_mean_degree:
            est.alpha = 1.0 / d_bar;
            return est;
        case AlphaStrategy::trace_ratio:
            est.alpha = s1 / s2;
            return est;
        case AlphaStrategy::closed_form:
            break;
    }
    const double numerator = tr_kdinvk - 2.0 * n + s1;
    const double denominator = tr_k2 - 2.0 * s1 + s2;
    if (denominator <= 1e-12) {
        est.alpha = 1.0 / d_bar;
        est.degenerate = true;
        return est;
    }
    est.alpha = numerator / denominator;
    return est;
}

}  // namespace detail

ImagePlane apply_exact(const WeightField& w, const ImagePlane& y, int threads) {
    if (w.width != y.width || w.height != y.height)
        throw std::invalid_argument("dimension mismatch");
    ImagePlane z(y.width, y.height);
    detail::accumulate_rows(w.weights.data(), 0, w.height, w.width, w.height, w.window_radius, y,
                            z.v.data(), threads);
    for (int i = 0; i < z.pixels(); ++i) z.v[i] /= w.degree[i];
    return z;
}

ImagePlane apply_norm_free(const WeightField& w, const ImagePlane& y, double alpha, int threads) {
    if (w.width != y.width || w.height != y.height)
        throw std::invalid_argument("dimension mismatch");
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be > 0");
    ImagePlane z(y.width, y.height);
    detail::accumulate_rows(w.weights.data(), 0, w.height, w.width, w.height, w.window_radius, y,
                            z.v.data(), threads);
    for (int i = 0; i < z.pixels(); ++i) z.v[i] = y.v[i] + alpha * (z.v[i] - w.degree[i] * y.v[i]);
    return z;
}

AlphaEstimate estimate_alpha(const WeightField& w, AlphaStrategy strategy, double fixed_alpha) {
    NormMode m;
    m.alpha_strategy = strategy;
    m.fixed_alpha = fixed_alpha;
    return estimate_alpha(w, m);
}

AlphaEstimate estimate_alpha(const WeightField& w, const NormMode& mode) {
    mode.validate();
    FieldStats st = field_stats(w);
    // Windowed traces, no dense assembly: tr(K) = n, tr(KD) = s1,
    // tr(K^2) = sum k_ij^2, tr(K D^-1 K) = sum_i (sum_o k_io^2)/d_i.
    double tr_k2 = 0.0, tr_kdinvk = 0.0;
    if (mode.alpha_strategy == AlphaStrategy::closed_form)
        detail::row_square_sums(w, tr_k2, tr_kdinvk);
    return detail::alpha_from_stats(mode.alpha_strategy, mode.fixed_alpha,
                                    static_cast<double>(st.n), st.s1, st.s2, tr_k2, tr_kdinvk);
}

VarianceFactors variance_factors(const WeightField& w, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be > 0");
    const int n = w.pixels();
    const int m = w.window_size();
    VarianceFactors vf;
    vf.nu.resize(n);
    vf.nu_hat.resize(n);
    vf.rho.resize(n);
    vf.nu_hat_approx.resize(n);
    for (int i = 0; i < n; ++i) {
        const double* wrow = w.row(i);
        double sq = 0.0;
        for (int o = 0; o < m; ++o) sq += wrow[o] * wrow[o];
        const double d = w.degree[i];
        const double nu = sq / (d * d);
        // Norm-free row: alpha*k_ij off-center, 1 + alpha*(1 - d_i) at the center.
        const double center = 1.0 + alpha * (1.0 - d);
        const double nu_hat = center * center + alpha * alpha * (sq - 1.0);
        const double rho = alpha * d;
        vf.nu[i] = nu;
        vf.nu_hat[i] = nu_hat;
        vf.rho[i] = rho;
        vf.nu_hat_approx[i] = rho * rho * nu + (rho - 1.0) * (rho - 1.0);
    }
    return vf;
}

}  // namespace multilap
