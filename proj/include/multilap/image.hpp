#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace multilap {

// Single-channel scalar image, row-major. Input planes live in [0,1];
// detail layers produced by the decomposition are signed.
struct ImagePlane {
    int width = 0;
    int height = 0;
    std::vector<double> v;

    ImagePlane() = default;
    ImagePlane(int w, int h, double fill = 0.0)
        : width(w), height(h), v(static_cast<size_t>(w) * h, fill) {}

    int pixels() const { return width * height; }
    bool empty() const { return width <= 0 || height <= 0; }

    double& at(int x, int y) { return v[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return v[static_cast<size_t>(y) * width + x]; }

    bool same_size(const ImagePlane& o) const {
        return width == o.width && height == o.height;
    }
};

struct RgbImage {
    ImagePlane r, g, b;

    RgbImage() = default;
    RgbImage(int w, int h) : r(w, h), g(w, h), b(w, h) {}

    int width() const { return r.width; }
    int height() const { return r.height; }
};

inline void require_same_size(const ImagePlane& a, const ImagePlane& b) {
    if (!a.same_size(b)) throw std::invalid_argument("dimension mismatch");
}

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// 8-bit quantization contract: load via v/255, store via round(v*255) after clamping.
inline uint8_t to_byte(double x) {
    return static_cast<uint8_t>(clamp01(x) * 255.0 + 0.5);
}
inline double from_byte(uint8_t b) { return b / 255.0; }

}  // namespace multilap
