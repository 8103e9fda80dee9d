#pragma once

#include "multilap/image.hpp"

namespace multilap {

// BT.601 full-range luma/chroma. Chroma is stored centered at zero
// (cb = 0.5/(1-0.114) * (b - y), cr = 0.5/(1-0.299) * (r - y)).
struct YuvImage {
    ImagePlane y, cb, cr;
};

YuvImage rgb_to_yuv(const RgbImage& rgb);

// Reconstruction clamps each channel to [0,1]; boosted luma can leave gamut.
RgbImage yuv_to_rgb(const YuvImage& yuv);

}  // namespace multilap
