#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "multilap/cascade.hpp"
#include "multilap/color.hpp"
#include "multilap/image.hpp"
#include "multilap/kernel.hpp"
#include "multilap/normfilter.hpp"
#include "multilap/tonemap.hpp"

namespace multilap {

enum class ColorMode { luma_only, per_channel_rgb };

struct EnhanceConfig {
    KernelParams kernel;
    int levels = 2;  // k; decomposition has k+1 layers (base, k-1 bands, high)
    NormMode norm;
    std::vector<CurveSpec> curves;  // levels+1 entries: base, band_1..band_{k-1}, high
    bool mask_enabled = true;
    int mask_source_level = 1;
    double mask_gamma = 1.0;
    ColorMode color_mode = ColorMode::luma_only;

    void validate() const;
    bool operator==(const EnhanceConfig&) const = default;
};

struct Preset {
    std::string name;
    EnhanceConfig config;
};

// Presets: "smooth", "sharpen", "denoise_sharpen" (alias "denoise-sharpen"),
// plus "identity" (all-identity curves, mask off). Unknown name throws.
EnhanceConfig resolve_preset(std::string_view name);
const std::vector<Preset>& preset_registry();

ImagePlane enhance(const ImagePlane& y, const EnhanceConfig& config, int threads = 1);
RgbImage enhance(const RgbImage& image, const EnhanceConfig& config, int threads = 1);

// Luma-only chain on pre-split planes; the chroma planes pass through
// untouched (moved into the result bit-for-bit).
YuvImage enhance_yuv(YuvImage image, const EnhanceConfig& config, int threads = 1);

// Diagnostics for the CLI dump options: the mapped-layer inputs and mask of a
// plane enhancement.
struct PlaneDiagnostics {
    LayerStack layers;  // unmapped layers
    ImagePlane mask;    // structure mask of the configured source level
    ImagePlane degree_ratio;  // d_i / p_i of level 1
};
PlaneDiagnostics enhance_diagnostics(const ImagePlane& y, const EnhanceConfig& config,
                                     int threads = 1);

namespace detail {
// Weight-stack entry budget above which enhance() switches to banded
// row-range evaluation. Mutable so tests can force the banded path on small
// images; the split never changes results.
size_t& band_entry_limit();
}  // namespace detail

}  // namespace multilap
