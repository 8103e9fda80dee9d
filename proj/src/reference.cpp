#include "multilap/reference.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "multilap/cascade.hpp"
#include "multilap/maskblend.hpp"
#include "multilap/weights.hpp"

namespace multilap {
namespace reference {

namespace {

void guard_size(const ImagePlane& y) {
    if (y.empty()) throw std::invalid_argument("empty image");
    if (y.pixels() > kMaxPixels) throw std::invalid_argument("image too large for dense oracle");
}

}  // namespace

DenseModel dense_affinity(const ImagePlane& y, const KernelParams& params) {
    params.validate();
    guard_size(y);
    const int w = y.width, h = y.height, n = y.pixels();
    const int r = params.window_radius, q = params.patch_radius;
    DenseModel model;
    model.n = n;
    model.k.assign(static_cast<size_t>(n) * n, 0.0);
    model.degree.assign(n, 0.0);
    model.valid_count.assign(n, 0);

    for (int i = 0; i < n; ++i) {
        const int xi = i % w, yi = i / w;
        for (int j = 0; j < n; ++j) {
            const int xj = j % w, yj = j / w;
            const int dx = xj - xi, dy = yj - yi;
            if (dx < -r || dx > r || dy < -r || dy > r) continue;
            double kij;
            if (i == j) {
                kij = 1.0;
            } else {
                double dv;
                if (params.kind == KernelKind::bilateral) {
                    const double d = y.v[i] - y.v[j];
                    dv = d * d;
                } else {
                    double acc = 0.0;
                    int cnt = 0;
                    for (int ty = -q; ty <= q; ++ty) {
                        for (int tx = -q; tx <= q; ++tx) {
                            const int ax = xi + tx, ay = yi + ty;
                            const int bx = xj + tx, by = yj + ty;
                            if (ax < 0 || ax >= w || ay < 0 || ay >= h) continue;
                            if (bx < 0 || bx >= w || by < 0 || by >= h) continue;
                            const double d = y.at(ax, ay) - y.at(bx, by);
                            acc += d * d;
                            ++cnt;
                        }
                    }
                    dv = acc / cnt;
                }
                double e = -dv / params.h_y;
                if (params.spatial_term) e -= (dx * dx + dy * dy) / params.h_x;
                kij = std::exp(e);
            }
            model.k[static_cast<size_t>(i) * n + j] = kij;
            model.degree[i] += kij;
            model.valid_count[i] += 1;
        }
    }
    return model;
}

DenseFilter dense_assemble(const ImagePlane& y, const KernelParams& params, NormKind mode,
                           double alpha) {
    DenseModel model = dense_affinity(y, params);
    const int n = model.n;
    DenseFilter f;
    f.n = n;
    f.exact = mode == NormKind::exact;
    f.w.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double kij = model.at(i, j);
            if (f.exact) {
                f.w[static_cast<size_t>(i) * n + j] = kij / model.degree[i];
            } else {
                double v = alpha * kij;
                if (i == j) v = 1.0 + alpha * (kij - model.degree[i]);
                f.w[static_cast<size_t>(i) * n + j] = v;
            }
        }
    }
    return f;
}

ImagePlane apply_dense(const DenseFilter& f, const ImagePlane& y) {
    if (f.n != y.pixels()) throw std::invalid_argument("dimension mismatch");
    ImagePlane z(y.width, y.height);
    for (int i = 0; i < f.n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < f.n; ++j) acc += f.at(i, j) * y.v[j];
        z.v[i] = acc;
    }
    return z;
}

FrobeniusScan frobenius_scan(const ImagePlane& y, const KernelParams& params, double alpha_min,
                             double alpha_max, int steps) {
    if (steps < 2) throw std::invalid_argument("empty grid");
    DenseModel model = dense_affinity(y, params);
    const int n = model.n;
    // J(alpha) = |M - alpha L|_F^2 with M = W - I, L = K - D.
    std::vector<double> m_mat(static_cast<size_t>(n) * n), l_mat(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const size_t idx = static_cast<size_t>(i) * n + j;
            const double kij = model.at(i, j);
            m_mat[idx] = kij / model.degree[i] - (i == j ? 1.0 : 0.0);
            l_mat[idx] = kij - (i == j ? model.degree[i] : 0.0);
        }
    }
    FrobeniusScan scan;
    scan.alphas.resize(steps);
    scan.j_values.resize(steps);
    double best = 0.0;
    for (int s = 0; s < steps; ++s) {
        const double alpha = alpha_min + (alpha_max - alpha_min) * s / (steps - 1);
        double j_val = 0.0;
        for (size_t idx = 0; idx < m_mat.size(); ++idx) {
            const double d = m_mat[idx] - alpha * l_mat[idx];
            j_val += d * d;
        }
        scan.alphas[s] = alpha;
        scan.j_values[s] = j_val;
        if (s == 0 || j_val < best) {
            best = j_val;
            scan.alpha_star = alpha;
        }
    }
    return scan;
}

ImagePlane diffusion_power(const ImagePlane& y, const KernelParams& params, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    DenseFilter w = dense_assemble(y, params, NormKind::exact);
    ImagePlane z = y;
    for (int it = 0; it < k; ++it) z = apply_dense(w, z);
    return z;
}

namespace {

struct Verifier {
    std::ostream& out;
    bool all_ok = true;

    void check(bool ok, const char* name, double err = -1.0) {
        if (ok) {
            out << "ok   " << name << "\n";
        } else {
            all_ok = false;
            out << "FAIL " << name;
            if (err >= 0.0) out << " (max error " << err << ")";
            out << "\n";
        }
    }
};

double max_abs_diff(const ImagePlane& a, const ImagePlane& b) {
    double m = 0.0;
    for (int i = 0; i < a.pixels(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

void verify_fixture(Verifier& v, const char* tag, const ImagePlane& y,
                    const KernelParams& params) {
    const WeightField field = build_weight_field(y, params);
    const DenseModel model = dense_affinity(y, params);
    const FieldStats st = field_stats(field);
    const int n = st.n;
    std::string prefix = std::string(tag) + ": ";

    double deg_err = 0.0;
    bool counts_ok = true;
    for (int i = 0; i < n; ++i) {
        deg_err = std::max(deg_err, std::abs(field.degree[i] - model.degree[i]));
        counts_ok = counts_ok && field.valid_count[i] == model.valid_count[i];
    }
    v.check(deg_err <= 1e-12 && counts_ok, (prefix + "degrees match dense assembly").c_str(),
            deg_err);

    const ImagePlane exact = apply_exact(field, y);
    const ImagePlane dense_exact = apply_dense(dense_assemble(y, params, NormKind::exact), y);
    v.check(max_abs_diff(exact, dense_exact) <= 1e-10, (prefix + "exact filter vs dense").c_str(),
            max_abs_diff(exact, dense_exact));

    const double alpha = 1.0 / st.d_bar;
    const ImagePlane fast = apply_norm_free(field, y, alpha);
    const DenseFilter dense_fast = dense_assemble(y, params, NormKind::norm_free, alpha);
    v.check(max_abs_diff(fast, apply_dense(dense_fast, y)) <= 1e-10,
            (prefix + "norm-free filter vs dense").c_str());

    // Row sums and symmetry of the dense norm-free filter, three alphas.
    double row_err = 0.0, sym_err = 0.0;
    for (double scale : {0.1, 1.0, 10.0}) {
        const DenseFilter f = dense_assemble(y, params, NormKind::norm_free, scale * alpha);
        for (int i = 0; i < n; ++i) {
            double sum = 0.0;
            for (int j = 0; j < n; ++j) {
                sum += f.at(i, j);
                sym_err = std::max(sym_err, std::abs(f.at(i, j) - f.at(j, i)));
            }
            row_err = std::max(row_err, std::abs(sum - 1.0));
        }
    }
    v.check(row_err <= 1e-9, (prefix + "norm-free rows sum to one").c_str(), row_err);
    v.check(sym_err <= 1e-9, (prefix + "norm-free filter symmetric").c_str(), sym_err);

    // Closed-form alpha against the Frobenius grid argmin.
    const AlphaEstimate closed = estimate_alpha(field, AlphaStrategy::closed_form);
    const int steps = 2000;
    const FrobeniusScan scan = frobenius_scan(y, params, 0.0, 2.0 / st.d_bar, steps);
    const double step = (2.0 / st.d_bar) / (steps - 1);
    v.check(!closed.degenerate && std::abs(closed.alpha - scan.alpha_star) <= step,
            (prefix + "closed-form alpha matches grid argmin").c_str(),
            std::abs(closed.alpha - scan.alpha_star));

    // Estimator ordering.
    const double trace_ratio = st.s1 / st.s2;
    v.check(1.0 / (static_cast<double>(st.m) * n) <= trace_ratio + 1e-15 &&
                trace_ratio <= 1.0 / st.d_bar + 1e-15,
            (prefix + "estimator ordering 1/(mn) <= s1/s2 <= 1/d_bar").c_str());

    // Windowed traces vs dense traces.
    double tr_k2 = 0.0, tr_kdinvk = 0.0;
    multilap::detail::row_square_sums(field, tr_k2, tr_kdinvk);
    double dense_tr_k2 = 0.0, dense_tr_kdinvk = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double kij = model.at(i, j);
            dense_tr_k2 += kij * kij;
            dense_tr_kdinvk += kij * model.at(j, i) / model.degree[j];
        }
    v.check(std::abs(tr_k2 - dense_tr_k2) <= 1e-9 &&
                std::abs(tr_kdinvk - dense_tr_kdinvk) <= 1e-9,
            (prefix + "windowed traces equal dense traces").c_str());

    // Hadamard squaring equals an explicit rebuild at h/2.
    const WeightField squared = hadamard_square(field);
    const WeightField rebuilt = build_weight_field(y, params.halved());
    double sq_err = 0.0;
    for (size_t idx = 0; idx < squared.weights.size(); ++idx)
        sq_err = std::max(sq_err, std::abs(squared.weights[idx] - rebuilt.weights[idx]));
    v.check(sq_err <= 1e-9, (prefix + "weight squaring equals rebuild at h/2").c_str(), sq_err);

    // Telescoping reconstruction, both normalization modes.
    for (NormKind mode : {NormKind::exact, NormKind::norm_free}) {
        NormMode nm;
        nm.mode = mode;
        const FilterCascade cascade = build_cascade(y, params, 2, nm);
        const LayerStack layers = decompose(y, cascade);
        double rec_err = 0.0;
        for (int i = 0; i < n; ++i) {
            double sum = layers.base.v[i] + layers.high.v[i];
            for (const ImagePlane& band : layers.bands) sum += band.v[i];
            rec_err = std::max(rec_err, std::abs(sum - y.v[i]));
        }
        v.check(rec_err <= 1e-9,
                (prefix + (mode == NormKind::exact ? "telescoping (exact)"
                                                   : "telescoping (norm-free)"))
                    .c_str(),
                rec_err);
    }

    // Two diffusion iterations equal two sequential applications.
    const ImagePlane diff2 = diffusion_power(y, params, 2);
    const ImagePlane twice = apply_exact(field, apply_exact(field, y));
    v.check(max_abs_diff(diff2, twice) <= 1e-10,
            (prefix + "diffusion power k=2 vs repeated application").c_str());

    // Variance factors: exact cross-term bound from the row algebra.
    const VarianceFactors vf = variance_factors(field, alpha);
    bool var_ok = true;
    for (int i = 0; i < n; ++i) {
        const double w_ii = 1.0 / field.degree[i];  // exact normalized self-weight
        const double bound = 2.0 * std::abs(vf.rho[i] * (1.0 - vf.rho[i])) * w_ii + 1e-9;
        var_ok = var_ok && std::abs(vf.nu_hat[i] - vf.nu_hat_approx[i]) <= bound;
    }
    v.check(var_ok, (prefix + "variance factors within cross-term bound").c_str());
}

}  // namespace

bool run_verification(std::ostream& out) {
    Verifier v{out};

    {
        ImagePlane y(1, 2);
        y.v = {0.0, 1.0};
        KernelParams p;
        p.kind = KernelKind::nlm;
        p.h_y = 1.0;
        p.window_radius = 1;
        p.patch_radius = 0;
        verify_fixture(v, "pair", y, p);

        const WeightField f = build_weight_field(y, p);
        const double k12 = f.row(0)[f.center_offset() + f.window_side()];  // neighbor below
        v.check(std::abs(k12 - std::exp(-1.0)) <= 1e-15, "pair: k_12 equals exp(-1)");
        const ImagePlane z = apply_exact(f, y);
        v.check(std::abs(z.v[0] - std::exp(-1.0) / (1.0 + std::exp(-1.0))) <= 1e-12 &&
                    std::abs(z.v[1] - 1.0 / (1.0 + std::exp(-1.0))) <= 1e-12,
                "pair: exact filter matches two-term closed form");
    }
    {
        ImagePlane y(4, 1);
        y.v = {0.0, 0.0, 1.0, 1.0};
        KernelParams p;
        p.kind = KernelKind::nlm;
        p.h_y = 1.0;
        p.window_radius = 3;  // full row window
        p.patch_radius = 0;
        verify_fixture(v, "step", y, p);
    }
    {
        ImagePlane y(4, 4);
        y.v = {0.05, 0.10, 0.90, 0.95, 0.10, 0.20, 0.80, 0.90,
               0.20, 0.40, 0.60, 0.80, 0.40, 0.50, 0.50, 0.60};
        KernelParams p;
        p.kind = KernelKind::nlm;
        p.h_y = 0.7;
        p.window_radius = 1;
        p.patch_radius = 1;
        verify_fixture(v, "ramp", y, p);
    }
    {
        ImagePlane y(4, 4);
        y.v = {0.81, 0.13, 0.62, 0.27, 0.45, 0.91, 0.08, 0.73,
               0.33, 0.57, 0.24, 0.66, 0.18, 0.49, 0.88, 0.04};
        KernelParams p;
        p.kind = KernelKind::nlm;
        p.h_y = 0.5;
        p.window_radius = 2;
        p.patch_radius = 1;
        verify_fixture(v, "noise", y, p);
    }
    {
        ImagePlane y(5, 5);
        for (int i = 0; i < 25; ++i) y.v[i] = (i % 7) / 7.0;
        KernelParams p;
        p.kind = KernelKind::bilateral;
        p.h_y = 0.3;
        p.h_x = 4.0;
        p.spatial_term = true;
        p.window_radius = 2;
        p.patch_radius = 0;
        verify_fixture(v, "bilateral", y, p);
    }
    {
        // Constant image with a full window: K is all ones, closed form 1/n.
        ImagePlane y(3, 3, 0.5);
        KernelParams p;
        p.kind = KernelKind::nlm;
        p.h_y = 0.7;
        p.window_radius = 2;
        p.patch_radius = 1;
        const WeightField f = build_weight_field(y, p);
        const AlphaEstimate closed = estimate_alpha(f, AlphaStrategy::closed_form);
        v.check(std::abs(closed.alpha - 1.0 / 9.0) <= 1e-12,
                "constant: closed-form alpha equals 1/n");
        const FrobeniusScan scan = frobenius_scan(y, p, 0.0, 2.0 / 9.0, 2001);
        v.check(std::abs(scan.alpha_star - 1.0 / 9.0) <= (2.0 / 9.0) / 2000.0 + 1e-15,
                "constant: Frobenius argmin equals 1/n");
    }

    out << (v.all_ok ? "verification passed" : "verification FAILED") << "\n";
    return v.all_ok;
}

}  // namespace reference
}  // namespace multilap
