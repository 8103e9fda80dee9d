#include "multilap/weights.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "multilap/parallel.hpp"

namespace multilap {

namespace instrument {
namespace {
std::atomic<uint64_t> g_exp_calls{0};
}
uint64_t exp_call_count() { return g_exp_calls.load(std::memory_order_relaxed); }
void reset_exp_calls() { g_exp_calls.store(0, std::memory_order_relaxed); }
}  // namespace instrument

namespace detail {

namespace {

// Mean squared difference over the mutual valid overlap of the two patches.
// The overlap always contains t = 0, so the count is at least 1. Loop order is
// identical for (i,j) and (j,i), which makes k_ij == k_ji bit-exact.
inline double patch_distance(const double* img, int width, int x, int y, int dx, int dy, int q,
                             int height) {
    int tx0 = -q, tx1 = q, ty0 = -q, ty1 = q;
    int xm = dx < 0 ? x + dx : x;        // min(x, x+dx)
    int xM = dx < 0 ? x : x + dx;        // max(x, x+dx)
    int ym = dy < 0 ? y + dy : y;
    int yM = dy < 0 ? y : y + dy;
    if (tx0 < -xm) tx0 = -xm;
    if (tx1 > width - 1 - xM) tx1 = width - 1 - xM;
    if (ty0 < -ym) ty0 = -ym;
    if (ty1 > height - 1 - yM) ty1 = height - 1 - yM;

    double acc = 0.0;
    for (int ty = ty0; ty <= ty1; ++ty) {
        const double* a = img + static_cast<size_t>(y + ty) * width + x;
        const double* b = img + static_cast<size_t>(y + dy + ty) * width + (x + dx);
        for (int tx = tx0; tx <= tx1; ++tx) {
            double d = a[tx] - b[tx];
            acc += d * d;
        }
    }
    int count = (tx1 - tx0 + 1) * (ty1 - ty0 + 1);
    return acc / count;
}

}  // namespace

void build_weight_rows(const ImagePlane& y, const KernelParams& params, int row0, int row1,
                       double* weights_out, double* degree_out, int* count_out, int threads) {
    const int width = y.width;
    const int height = y.height;
    const int r = params.window_radius;
    const int side = params.window_side();
    const int m = params.window_size();
    const int q = params.patch_radius;
    const bool bilateral = params.kind == KernelKind::bilateral;
    const double inv_hy = 1.0 / params.h_y;
    const double inv_hx = params.spatial_term ? 1.0 / params.h_x : 0.0;
    const double* img = y.v.data();

    // Margin inside which neither the window nor any patch is clipped.
    const int interior = r + (bilateral ? 0 : q);

    parallel_rows(row1 - row0, threads, [&](int a, int b) {
        uint64_t exps = 0;
        const int patch_count = (2 * q + 1) * (2 * q + 1);
        for (int ry = a; ry < b; ++ry) {
            const int py = row0 + ry;
            const bool row_interior = py >= interior && py < height - interior;
            for (int px = 0; px < width; ++px) {
                double* wrow = weights_out + (static_cast<size_t>(ry) * width + px) * m;
                double deg = 0.0;
                int cnt = 0;
                const double yi = img[static_cast<size_t>(py) * width + px];

                if (row_interior && px >= interior && px < width - interior) {
                    // Branch-free path; loop order matches the clipped path so
                    // results are bit-identical.
                    for (int dy = -r; dy <= r; ++dy) {
                        const int ox = (dy + r) * side + r;
                        for (int dx = -r; dx <= r; ++dx) {
                            if (dx == 0 && dy == 0) {
                                wrow[ox] = 1.0;
                                deg += 1.0;
                                continue;
                            }
                            double dv;
                            if (bilateral) {
                                double d = yi - img[static_cast<size_t>(py + dy) * width + px + dx];
                                dv = d * d;
                            } else {
                                double acc = 0.0;
                                for (int ty = -q; ty <= q; ++ty) {
                                    const double* pa =
                                        img + static_cast<size_t>(py + ty) * width + px;
                                    const double* pb =
                                        img + static_cast<size_t>(py + dy + ty) * width + px + dx;
                                    for (int tx = -q; tx <= q; ++tx) {
                                        double d = pa[tx] - pb[tx];
                                        acc += d * d;
                                    }
                                }
                                dv = acc / patch_count;
                            }
                            double e = -dv * inv_hy;
                            if (inv_hx != 0.0) e -= (dx * dx + dy * dy) * inv_hx;
                            double w = std::exp(e);
                            ++exps;
                            wrow[ox + dx] = w;
                            deg += w;
                        }
                    }
                    degree_out[static_cast<size_t>(ry) * width + px] = deg;
                    count_out[static_cast<size_t>(ry) * width + px] = m;
                    continue;
                }

                for (int o = 0; o < m; ++o) wrow[o] = 0.0;  // clipped entries stay invalid
                for (int dy = -r; dy <= r; ++dy) {
                    const int ny = py + dy;
                    if (ny < 0 || ny >= height) continue;
                    const int ox = (dy + r) * side + r;
                    for (int dx = -r; dx <= r; ++dx) {
                        const int nx = px + dx;
                        if (nx < 0 || nx >= width) continue;
                        if (dx == 0 && dy == 0) {
                            wrow[ox] = 1.0;  // self-affinity, exact
                            deg += 1.0;
                            ++cnt;
                            continue;
                        }
                        double dv;
                        if (bilateral) {
                            double d = yi - img[static_cast<size_t>(ny) * width + nx];
                            dv = d * d;
                        } else {
                            dv = patch_distance(img, width, px, py, dx, dy, q, height);
                        }
                        double e = -dv * inv_hy;
                        if (inv_hx != 0.0) e -= (dx * dx + dy * dy) * inv_hx;
                        double w = std::exp(e);
                        ++exps;
                        wrow[ox + dx] = w;
                        deg += w;
                        ++cnt;
                    }
                }
                degree_out[static_cast<size_t>(ry) * width + px] = deg;
                count_out[static_cast<size_t>(ry) * width + px] = cnt;
            }
        }
        instrument::g_exp_calls.fetch_add(exps, std::memory_order_relaxed);
    });
}

void square_weight_rows(double* weights, double* degree, const int* /*count*/, int rows, int width,
                        int window_size, int threads) {
    parallel_rows(rows, threads, [&](int a, int b) {
        for (int ry = a; ry < b; ++ry) {
            for (int px = 0; px < width; ++px) {
                double* wrow = weights + (static_cast<size_t>(ry) * width + px) * window_size;
                double deg = 0.0;
                for (int o = 0; o < window_size; ++o) {
                    wrow[o] *= wrow[o];  // invalid entries stay 0, the center stays 1
                    deg += wrow[o];
                }
                degree[static_cast<size_t>(ry) * width + px] = deg;
            }
        }
    });
}

}  // namespace detail

WeightField build_weight_field(const ImagePlane& y, const KernelParams& params, int threads) {
    params.validate();
    if (y.empty()) throw std::invalid_argument("empty image");
    for (double v : y.v)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite input");

    WeightField w;
    w.width = y.width;
    w.height = y.height;
    w.window_radius = params.window_radius;
    w.weights.assign(static_cast<size_t>(w.pixels()) * params.window_size(), 0.0);
    w.degree.resize(w.pixels());
    w.valid_count.resize(w.pixels());
    detail::build_weight_rows(y, params, 0, y.height, w.weights.data(), w.degree.data(),
                              w.valid_count.data(), threads);
    return w;
}

FieldStats field_stats(const WeightField& w) {
    FieldStats st;
    st.n = w.pixels();
    st.m = w.window_size();
    for (double d : w.degree) {
        st.s1 += d;
        st.s2 += d * d;
    }
    st.d_bar = st.s1 / static_cast<double>(st.n);
    return st;
}

}  // namespace multilap
