#pragma once

#include <stdexcept>

namespace multilap {

enum class KernelKind { nlm, bilateral };

// Affinity kernel parameters. h_y scales squared value distances of pixels in
// [0,1]; h_x scales squared spatial distances in pixels and only participates
// when spatial_term is set. The window is (2*window_radius+1)^2 pixels; the
// NLM patch is (2*patch_radius+1)^2. The two radii are independent.
struct KernelParams {
    KernelKind kind = KernelKind::nlm;
    double h_y = 0.7;
    double h_x = 0.0;
    bool spatial_term = false;
    int window_radius = 2;
    int patch_radius = 1;

    int window_side() const { return 2 * window_radius + 1; }
    int window_size() const { return window_side() * window_side(); }

    void validate() const {
        if (h_y <= 0.0) throw std::invalid_argument("h_y must be > 0");
        if (spatial_term && h_x <= 0.0)
            throw std::invalid_argument("h_x must be > 0 when the spatial term is on");
        if (window_radius < 1) throw std::invalid_argument("window_radius must be >= 1");
        if (patch_radius < 0) throw std::invalid_argument("patch_radius must be >= 0");
    }

    // Element-wise squaring of the weights is the same field rebuilt at h/2.
    KernelParams halved() const {
        KernelParams p = *this;
        p.h_y = h_y / 2.0;
        if (spatial_term) p.h_x = h_x / 2.0;
        return p;
    }

    bool operator==(const KernelParams&) const = default;
};

}  // namespace multilap
