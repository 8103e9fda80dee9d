#pragma once

#include <string>

#include "multilap/image.hpp"

namespace multilap {

// 8-bit image I/O: PNG (gray and RGB; palette/alpha/16-bit inputs are
// converted on load) plus binary PPM (P6) and PGM (P5). Format is chosen by
// file extension. All loaders normalize to [0,1] doubles; savers clamp,
// quantize with round(v*255) and write 8-bit samples.
struct LoadedImage {
    int channels = 0;  // 1 or 3
    ImagePlane gray;   // set when channels == 1
    RgbImage rgb;      // set when channels == 3

    int width() const { return channels == 1 ? gray.width : rgb.width(); }
    int height() const { return channels == 1 ? gray.height : rgb.height(); }
};

LoadedImage load_image(const std::string& path);

void save_gray(const std::string& path, const ImagePlane& img);
void save_rgb(const std::string& path, const RgbImage& img);

}  // namespace multilap
