#pragma once

#include <vector>

#include "multilap/cascade.hpp"
#include "multilap/image.hpp"
#include "multilap/weights.hpp"

namespace multilap {

// Degree-based soft structure mask, m_i = 1 - d_i / p_i. Low degree (few
// similar neighbors) marks edges and texture; flat regions approach 0.
struct StructureMask {
    ImagePlane values;
};

// gamma != 1 contrast-stretches the mask itself (plumbing knob, default off).
StructureMask structure_mask(const WeightField& w, double gamma = 1.0);
StructureMask structure_mask(const FilterCascade& c, int source_level = 1, double gamma = 1.0);

namespace detail {
StructureMask mask_from_degrees(const std::vector<double>& degree,
                                const std::vector<int>& valid_count, int width, int height,
                                double gamma);
}

// z = mapped_base + sum_l m .* mapped_band_l + m .* mapped_high, clamped to
// [0,1] at the end (the single clamp of the whole pipeline). The base layer is
// never masked. Pass mask = nullptr for the unmasked sum.
ImagePlane blend(const ImagePlane& mapped_base, const std::vector<ImagePlane>& mapped_bands,
                 const ImagePlane& mapped_high, const StructureMask* mask, int threads = 1);

}  // namespace multilap
