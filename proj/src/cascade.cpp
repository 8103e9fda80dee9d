#include "multilap/cascade.hpp"

#include <stdexcept>

namespace multilap {

WeightField hadamard_square(const WeightField& w, int threads) {
    WeightField out = w;
    detail::square_weight_rows(out.weights.data(), out.degree.data(), out.valid_count.data(),
                               out.height, out.width, out.window_size(), threads);
    return out;
}

FilterCascade build_cascade(const ImagePlane& y, const KernelParams& params, int k,
                            const NormMode& norm, int threads) {
    if (k < 1) throw std::invalid_argument("level count must be >= 1");
    norm.validate();
    FilterCascade c;
    c.norm = norm;
    c.params = params;
    c.levels.reserve(k);
    c.levels.push_back(build_weight_field(y, params, threads));
    for (int l = 1; l < k; ++l) c.levels.push_back(hadamard_square(c.levels.back(), threads));
    if (norm.mode == NormKind::norm_free) {
        c.alphas.reserve(k);
        for (const WeightField& w : c.levels) c.alphas.push_back(estimate_alpha(w, norm));
    }
    return c;
}

ImagePlane apply_filter(const WeightField& w, const ImagePlane& y, const NormMode& norm,
                        double alpha, int threads) {
    if (norm.mode == NormKind::exact) return apply_exact(w, y, threads);
    return apply_norm_free(w, y, alpha, threads);
}

LayerStack decompose(const ImagePlane& y, const FilterCascade& c, int threads) {
    if (c.levels.empty()) throw std::invalid_argument("empty cascade");
    if (c.levels.front().width != y.width || c.levels.front().height != y.height)
        throw std::invalid_argument("dimension mismatch");
    const int k = c.level_count();
    auto level_alpha = [&](int l) {
        return c.norm.mode == NormKind::norm_free ? c.alphas[l].alpha : 0.0;
    };

    LayerStack s;
    ImagePlane prev = apply_filter(c.levels[0], y, c.norm, level_alpha(0), threads);
    s.base = prev;
    s.bands.reserve(k - 1);
    for (int l = 1; l < k; ++l) {
        ImagePlane cur = apply_filter(c.levels[l], y, c.norm, level_alpha(l), threads);
        ImagePlane band(y.width, y.height);
        for (int i = 0; i < y.pixels(); ++i) band.v[i] = cur.v[i] - prev.v[i];
        s.bands.push_back(std::move(band));
        prev = std::move(cur);
    }
    s.high = ImagePlane(y.width, y.height);
    for (int i = 0; i < y.pixels(); ++i) s.high.v[i] = y.v[i] - prev.v[i];
    return s;
}

ImagePlane laplacian_apply(const WeightField& w, const ImagePlane& y, LaplacianForm form,
                           double alpha, int threads) {
    if (w.width != y.width || w.height != y.height)
        throw std::invalid_argument("dimension mismatch");
    ImagePlane out(y.width, y.height);
    if (form == LaplacianForm::random_walk) {
        ImagePlane z = apply_exact(w, y, threads);
        for (int i = 0; i < y.pixels(); ++i) out.v[i] = z.v[i] - y.v[i];
        return out;
    }
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be > 0");
    // alpha (K - D) y = alpha (sum_j k_ij y_j - d_i y_i)
    detail::accumulate_rows(w.weights.data(), 0, w.height, w.width, w.height, w.window_radius, y,
                            out.v.data(), threads);
    for (int i = 0; i < y.pixels(); ++i) out.v[i] = alpha * (out.v[i] - w.degree[i] * y.v[i]);
    return out;
}

}  // namespace multilap
