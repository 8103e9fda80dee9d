#pragma once

#include <vector>

#include "multilap/image.hpp"
#include "multilap/kernel.hpp"
#include "multilap/normfilter.hpp"
#include "multilap/weights.hpp"

namespace multilap {

// Multi-level filter bank. W_1 is the smoothest filter (largest h); each next
// level squares the previous level's weights element-wise, which equals an
// explicit rebuild at half the smoothing parameter. Only level 1 evaluates
// exponentials.
struct FilterCascade {
    std::vector<WeightField> levels;
    std::vector<AlphaEstimate> alphas;  // per level, populated in norm_free mode
    NormMode norm;
    KernelParams params;  // level-1 kernel parameters (h_1)

    int level_count() const { return static_cast<int>(levels.size()); }
};

// base + sum(bands) + high telescopes back to the input exactly.
struct LayerStack {
    ImagePlane base;                // W_1 y
    std::vector<ImagePlane> bands;  // (W_{l+1} - W_l) y, signed
    ImagePlane high;                // (I - W_k) y, signed
};

enum class LaplacianForm { random_walk, unnormalized };

WeightField hadamard_square(const WeightField& w, int threads = 1);

FilterCascade build_cascade(const ImagePlane& y, const KernelParams& params, int k,
                            const NormMode& norm, int threads = 1);

LayerStack decompose(const ImagePlane& y, const FilterCascade& c, int threads = 1);

// random_walk: (W - I) y with exact normalization; unnormalized: alpha (K - D) y.
ImagePlane laplacian_apply(const WeightField& w, const ImagePlane& y, LaplacianForm form,
                           double alpha = 0.0, int threads = 1);

// Filter application honoring the normalization mode (alpha used in norm_free).
ImagePlane apply_filter(const WeightField& w, const ImagePlane& y, const NormMode& norm,
                        double alpha, int threads = 1);

}  // namespace multilap
