#pragma once

#include <cstdint>
#include <vector>

#include "multilap/image.hpp"
#include "multilap/kernel.hpp"

namespace multilap {

// Windowed un-normalized affinity weights: one stack of m = (2r+1)^2 scalars
// per pixel, row-major over pixels, offset-major within a stack. Entries whose
// neighbor falls outside the image are invalid and stored as 0. degree[i] is
// the sum of the valid entries (the center entry is exactly 1), valid_count[i]
// the number of valid entries including the center.
struct WeightField {
    int width = 0;
    int height = 0;
    int window_radius = 0;
    std::vector<double> weights;
    std::vector<double> degree;
    std::vector<int> valid_count;

    int window_side() const { return 2 * window_radius + 1; }
    int window_size() const { return window_side() * window_side(); }
    int center_offset() const { return window_radius * window_side() + window_radius; }
    int pixels() const { return width * height; }

    const double* row(int i) const { return weights.data() + static_cast<size_t>(i) * window_size(); }
    double* row(int i) { return weights.data() + static_cast<size_t>(i) * window_size(); }

    // Neighbor pixel index for window offset o at pixel (x,y), or -1 if clipped.
    int neighbor(int x, int y, int o) const {
        int side = window_side();
        int dy = o / side - window_radius;
        int dx = o % side - window_radius;
        int nx = x + dx, ny = y + dy;
        if (nx < 0 || nx >= width || ny < 0 || ny >= height) return -1;
        return ny * width + nx;
    }
};

struct FieldStats {
    double s1 = 0.0;   // tr(D)  = sum d_i
    double s2 = 0.0;   // tr(D^2) = sum d_i^2
    double d_bar = 0.0;
    long n = 0;
    int m = 0;
};

WeightField build_weight_field(const ImagePlane& y, const KernelParams& params, int threads = 1);

FieldStats field_stats(const WeightField& w);

namespace instrument {
// Number of exp() evaluations performed by weight construction since the last
// reset. Center weights are set to 1 exactly and are not counted.
uint64_t exp_call_count();
void reset_exp_calls();
}  // namespace instrument

namespace detail {
// Builds weight stacks for pixel rows [row0, row1). Outputs are indexed from
// row0 (weights_out holds (row1-row0)*width stacks). Used by both the
// whole-image builder and the banded pipeline path, so arithmetic per pixel is
// identical in the two.
void build_weight_rows(const ImagePlane& y, const KernelParams& params, int row0, int row1,
                       double* weights_out, double* degree_out, int* count_out, int threads);

// Squares every valid weight of the given pixel-row range in place and
// recomputes degrees (valid counts are geometry-only and unchanged).
void square_weight_rows(double* weights, double* degree, const int* count, int rows, int width,
                        int window_size, int threads);
}  // namespace detail

}  // namespace multilap
