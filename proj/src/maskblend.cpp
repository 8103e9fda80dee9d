#include "multilap/maskblend.hpp"

#include <cmath>
#include <stdexcept>

#include "multilap/parallel.hpp"

namespace multilap {

namespace detail {

StructureMask mask_from_degrees(const std::vector<double>& degree,
                                const std::vector<int>& valid_count, int width, int height,
                                double gamma) {
    StructureMask mask;
    mask.values = ImagePlane(width, height);
    const int n = width * height;
    for (int i = 0; i < n; ++i) {
        // d_i in [1, p_i] guarantees m_i in [0, 1], borders included.
        double m = 1.0 - degree[i] / valid_count[i];
        if (gamma != 1.0) m = std::pow(m, gamma);
        mask.values.v[i] = m;
    }
    return mask;
}

}  // namespace detail

StructureMask structure_mask(const WeightField& w, double gamma) {
    return detail::mask_from_degrees(w.degree, w.valid_count, w.width, w.height, gamma);
}

StructureMask structure_mask(const FilterCascade& c, int source_level, double gamma) {
    if (source_level < 1 || source_level > c.level_count())
        throw std::invalid_argument("mask source level out of range");
    return structure_mask(c.levels[source_level - 1], gamma);
}

ImagePlane blend(const ImagePlane& mapped_base, const std::vector<ImagePlane>& mapped_bands,
                 const ImagePlane& mapped_high, const StructureMask* mask, int threads) {
    for (const ImagePlane& b : mapped_bands) require_same_size(mapped_base, b);
    require_same_size(mapped_base, mapped_high);
    if (mask) require_same_size(mapped_base, mask->values);

    ImagePlane out(mapped_base.width, mapped_base.height);
    parallel_rows(mapped_base.height, threads, [&](int a, int b) {
        const int w = mapped_base.width;
        for (int y = a; y < b; ++y) {
            for (int x = 0; x < w; ++x) {
                const int i = y * w + x;
                const double m = mask ? mask->values.v[i] : 1.0;
                double acc = mapped_base.v[i];
                for (const ImagePlane& band : mapped_bands) acc += m * band.v[i];
                acc += m * mapped_high.v[i];
                out.v[i] = clamp01(acc);
            }
        }
    });
    return out;
}

}  // namespace multilap
