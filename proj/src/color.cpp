#include "multilap/color.hpp"

namespace multilap {

namespace {
constexpr double kR = 0.299, kG = 0.587, kB = 0.114;
constexpr double kCbScale = 0.5 / (1.0 - kB);
constexpr double kCrScale = 0.5 / (1.0 - kR);
}  // namespace

YuvImage rgb_to_yuv(const RgbImage& rgb) {
    YuvImage out;
    const int w = rgb.width(), h = rgb.height();
    out.y = ImagePlane(w, h);
    out.cb = ImagePlane(w, h);
    out.cr = ImagePlane(w, h);
    for (int i = 0; i < w * h; ++i) {
        const double r = rgb.r.v[i], g = rgb.g.v[i], b = rgb.b.v[i];
        const double y = kR * r + kG * g + kB * b;
        out.y.v[i] = y;
        out.cb.v[i] = kCbScale * (b - y);
        out.cr.v[i] = kCrScale * (r - y);
    }
    return out;
}

RgbImage yuv_to_rgb(const YuvImage& yuv) {
    const int w = yuv.y.width, h = yuv.y.height;
    RgbImage out(w, h);
    for (int i = 0; i < w * h; ++i) {
        const double y = yuv.y.v[i];
        const double r = y + yuv.cr.v[i] / kCrScale;
        const double b = y + yuv.cb.v[i] / kCbScale;
        const double g = (y - kR * r - kB * b) / kG;
        out.r.v[i] = clamp01(r);
        out.g.v[i] = clamp01(g);
        out.b.v[i] = clamp01(b);
    }
    return out;
}

}  // namespace multilap
